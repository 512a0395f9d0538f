"""Seeded grids, residual suites for each identity, and the Xi-integral check.

Every tolerance is 10^-(precision - allowance), where the allowance is the
number of digits a suite is expected to lose, optionally raised to an
absolute floor for limit extractions.
"""
from __future__ import annotations

import csv
import io
import json
import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable

import mpmath as mp

from . import eisenperiod as ep
from . import herglotz1 as hg
from . import heckeact as ha
from . import kronecker as kr
from . import periodfn as pf
from .context import DEFAULT_CONTEXT, EvalContext, eps, evaluates, working
from .errors import ConvergenceError, DomainError, PoleError, UnknownSuite
from .numerics import quad, riemann_zeta, to_mp
from .quadfield import QuadIrr, conjugate

ALLOWANCE = {
    "fe": 5,
    "hecke": 5,
    "klf-limit": 30,
    "klf-routes": 28,
    "jfun": 10,
    "eisen": 5,
    "genperiod": 8,
    "ramanujan-integral": 10,
}
TABLE_SIG_DIGITS = 8

# printed table: (class, k) -> (partial zeta column, limit-formula column)
PRINTED_TABLE = {
    ("B0", 3): ("51.304025670384526", "51.304025667471024"),
    ("B0", 4): ("156.2731732710374", "156.27317327706047"),
    ("B1", 3): ("8.46173083386907", "8.461730833267936"),
    ("B1", 4): ("11.729190698921457", "11.729190666820669"),
}

LAURENT_POINTS = ["2+1*sqrt(3)", "3/2+1/2*sqrt(3)", "4+1*sqrt(15)", "3/2+1/2*sqrt(5)", "1+1/3*sqrt(3)"]

SUITES = ("fe", "hecke", "klf", "higher-klf", "jfun", "eisen", "genperiod", "ramanujan-integral")

DEFAULT_POINTS = {
    "fe": 50,
    "hecke": 20,
    "jfun": 30,
    "eisen": 10,
    "genperiod": 30,
}


def tolerance(ctx: EvalContext, allowance: int, floor=0):
    return max(mp.mpf(10) ** (allowance - ctx.precision_digits), mp.mpf(floor))


# --- grids -------------------------------------------------------------------


def _round(v: float) -> float:
    return float(f"{v:.12g}")


def grid(seed: int, count: int, kind: str = "real-positive") -> list:
    """Deterministic sample points.

    real-positive: log-uniform in [0.05, 20].
    complex-offcut: modulus log-uniform in [0.05, 20], |arg| <= 3.
    upper-half: Im in [0.5, 3], Re in [-1, 1].
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    rng = random.Random(f"{kind}:{seed}")
    lo, hi = math.log(0.05), math.log(20)
    out = []
    for _ in range(count):
        if kind == "real-positive":
            out.append(_round(math.exp(rng.uniform(lo, hi))))
        elif kind == "complex-offcut":
            r, a = math.exp(rng.uniform(lo, hi)), rng.uniform(-3, 3)
            out.append(complex(_round(r * math.cos(a)), _round(r * math.sin(a))))
        elif kind == "upper-half":
            out.append(complex(_round(rng.uniform(-1, 1)), _round(rng.uniform(0.5, 3))))
        else:
            raise DomainError(f"unknown grid kind {kind!r}")
    return out


def cot_grid(seed: int, count: int, n: int, margin: float = 1e-3) -> list[tuple[float, float]]:
    """Pairs (x, y) in (0, 1)^2 keeping every argument of the n-th cotangent identity
    at least ``margin`` away from the integers."""
    rng = random.Random(f"cot:{n}:{seed}")
    mats = ha.hecke_hat(n).matrices
    out = []
    while len(out) < count:
        x, y = _round(rng.random()), _round(rng.random())
        args = [(m.a * x + m.b * y, m.c * x + m.d * y) for m in mats]
        args += [(l * x, l * y) for l in range(1, n + 1) if n % l == 0]
        if all(abs(v - round(v)) >= margin for pair in args for v in pair):
            out.append((x, y))
    return out


# --- the Xi integral -----------------------------------------------------------


def _Xi(t):
    s = mp.mpf(1) / 2 + 1j * t
    return s * (s - 1) / 2 * mp.pi ** (-s / 2) * mp.gamma(s / 2) * riemann_zeta(s)


def _xi_envelope(t):
    """Upper bound for the integrand at t >= 10 from Stirling and |zeta(1/2+it)| <= 2 + t."""
    y = t / 4
    gammas = (2 * mp.pi) ** 2 / y**2 * mp.exp(-2 * mp.pi * y)
    poly = (t * t / 8 + 1) ** 2 * (2 + t) ** 2 / mp.pi
    return 2 * mp.pi ** (-mp.mpf(3) / 2) * poly * gammas / (1 + t * t)


@evaluates
def xi_cutoff():
    """T with the integrand envelope beyond T integrating to below working epsilon."""
    T = mp.mpf(20)
    while 2 * _xi_envelope(T) >= eps():
        T += 5
        if T > 10_000:
            raise ConvergenceError("xi_integral tail bound not met")
    return T


@evaluates
def xi_integral(x):
    """-pi^(-3/2) * integral of |Xi(t/2) Gamma((-1+it)/4)|^2 cos(t log(x)/2) / (1+t^2)."""
    x = to_mp(x)
    if mp.im(x) != 0 or x <= 0:
        raise DomainError("xi_integral needs real x > 0")
    L = mp.log(x)
    T = xi_cutoff()

    def f(t):
        return abs(_Xi(t / 2) * mp.gamma((-1 + 1j * t) / 4)) ** 2 * mp.cos(t * L / 2) / (1 + t * t)

    pts = mp.linspace(0, T, int(T / 5) + 1)
    return -mp.pi ** (-mp.mpf(3) / 2) * quad(f, pts, what="xi_integral")


@evaluates
def xi_left_member(x):
    """sqrt(x) {(gamma - log(2 pi x)) / (2x) + frak_F1(x)}."""
    x = to_mp(x)
    return mp.sqrt(x) * ((mp.euler - mp.log(2 * mp.pi * x)) / (2 * x) + pf.frak_F1(x))


# --- reports -----------------------------------------------------------------


@dataclass
class Case:
    id: str
    inputs: dict
    residual: mp.mpf
    tolerance: mp.mpf

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "inputs": self.inputs,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


@dataclass
class SuiteReport:
    suite: str
    seed: int
    precision: int
    cases: list[Case] = field(default_factory=list)
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def as_dict(self, timing: bool = True) -> dict:
        d = {
            "suite": self.suite,
            "seed": self.seed,
            "precision": self.precision,
            "cases": [c.as_dict() for c in self.cases],
            "pass": self.passed,
        }
        if timing:
            d["elapsed_ms"] = self.elapsed_ms
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.as_dict(timing), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "id", "inputs", "residual", "tolerance", "pass"])
        for c in self.cases:
            d = c.as_dict()
            w.writerow([self.suite, d["id"], json.dumps(d["inputs"], sort_keys=True), d["residual"], d["tolerance"], d["pass"]])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = []
        for c in self.cases:
            flag = "PASS" if c.passed else "FAIL"
            lines.append(f"{flag} {self.suite}/{c.id} residual={mp.nstr(c.residual, 3)} tol={mp.nstr(c.tolerance, 3)}")
        lines.append(f"{self.suite}: {'PASS' if self.passed else 'FAIL'} ({len(self.cases)} cases)")
        return "\n".join(lines)


def _fmt(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


class _Builder:
    def __init__(self, ctx: EvalContext):
        self.ctx = ctx
        self.cases: list[Case] = []

    def add(self, id_: str, inputs: dict, residual: Callable[[], object], tol):
        """Record a case; a raised library error counts as an infinite residual."""
        try:
            r = mp.mpf(abs(residual()))
        except (ArithmeticError, ValueError, RuntimeError) as exc:
            r = mp.inf
            inputs = dict(inputs, error=f"{type(exc).__name__}: {exc}")
        self.cases.append(Case(id_, {k: _fmt(v) for k, v in inputs.items()}, r, tol))


# --- suites ------------------------------------------------------------------


def _suite_fe(b: _Builder, seed: int, points: int):
    tol = tolerance(b.ctx, ALLOWANCE["fe"])
    for i, x in enumerate(grid(seed, points, "complex-offcut")):
        z = to_mp(x)
        b.add(f"three-term[{i}]", {"x": x}, lambda: pf.F1(z) - pf.F1(z + 1) - pf.F1(z / (z + 1)) / (z + 1), tol)
        b.add(f"two-term[{i}]", {"x": x}, lambda: pf.F1(z) - pf.F1(1 / z) / z, tol)
    for i, x in enumerate(grid(seed, max(1, points // 5), "real-positive")):
        z = to_mp(x)
        b.add(f"integral-route[{i}]", {"x": x}, lambda: pf.F1(z) - pf.F1_integral(z), tol)
        b.add(
            f"frak-three-term[{i}]",
            {"x": x},
            lambda: pf.frak_F1(z) - pf.frak_F1(z + 1) - pf.frak_F1(z / (z + 1)) / (z + 1)
            + (mp.euler - mp.log(2 * mp.pi) - z * mp.log(z / (z + 1))) / (2 * (z + 1)),
            tol,
        )
    for x in (20, 50, 100):
        for m in (4, 8, 12):
            av = pf.F1_asymptotic(x, m)
            b.add(f"asymptotic[x={x},m={m}]", {"x": x, "terms": m}, lambda: pf.F1(x) - av.value, 2 * av.bound)


def _suite_hecke(b: _Builder, seed: int, points: int):
    tol = tolerance(b.ctx, ALLOWANCE["hecke"])
    xs = grid(seed, points, "real-positive")
    for n in range(1, 7):
        for i, x in enumerate(xs):
            b.add(f"eigen-F1[n={n},{i}]", {"n": n, "x": x}, lambda: ha.eigen_residual_F1(n, x), tol)
    b.add("eigen-F1-hand[n=2,x=1]", {"n": 2, "x": 1}, lambda: _hand_value_n2(), tol)
    for n in range(1, 5):
        b.add(f"c-hom[n={n}]", {"n": n}, lambda: ha.c_hom(ha.hecke_hat(n)), 0)
        for i, (x, y) in enumerate(cot_grid(seed, max(1, points // 4), n)):
            b.add(f"cot[n={n},{i}]", {"n": n, "x": x, "y": y}, lambda: ha.cot_identity_residual(n, x, y), tol)


def _hand_value_n2():
    """T2-hat at x = 1 from F1(1) = 1/2, F1(2) = 1/4, F1(1/2) = 1/2."""
    exact = {mp.mpf(1): mp.mpf(1) / 2, mp.mpf(2): mp.mpf(1) / 4, mp.mpf(1) / 2: mp.mpf(1) / 2}
    lhs = ha.slash(lambda v: exact[v], 1, ha.hecke_hat(2), 1)
    return lhs - mp.sqrt(2) * 2 * exact[mp.mpf(1)]


def _suite_klf(b: _Builder, seed: int, points: int):
    ctx = b.ctx
    routes = tolerance(ctx, ALLOWANCE["klf-routes"])
    sig = mp.mpf(10) ** (1 - TABLE_SIG_DIGITS) / 2
    classes = kr.sqrt3_classes()
    for (name, k), (lhs_printed, rhs_printed) in PRINTED_TABLE.items():
        cls = classes[name]
        lhs = kr.partial_zeta(k, cls)
        rhs = kr.higher_klf_rhs(k, cls)
        inputs = {"class": name, "k": k}
        b.add(f"table-lhs[{name},k={k}]", inputs, lambda: (lhs - mp.mpf(lhs_printed)) / mp.mpf(lhs_printed), sig)
        b.add(f"table-rhs[{name},k={k}]", inputs, lambda: (rhs - mp.mpf(rhs_printed)) / mp.mpf(rhs_printed), sig)
        b.add(f"table-routes[{name},k={k}]", inputs, lambda: (lhs - rhs) / lhs, routes)
    w = QuadIrr.parse("2+1*sqrt(3)")
    b.add("overlap[s=3]", {"w": str(w)}, lambda: kr.Z_continued(3, w) - kr.Z_direct(3, w), routes)
    hi = ctx.with_precision(max(60, ctx.precision_digits))
    res_tol = tolerance(hi, ALLOWANCE["klf-limit"], "1e-6")
    const_tol = tolerance(hi, ALLOWANCE["klf-limit"], "1e-8")
    for text in LAURENT_POINTS:
        w = QuadIrr.parse(text)
        with working(hi):
            L = kr.laurent_data(w)
            x, y = w.to_mp(), conjugate(w).to_mp()
            b.add(f"laurent-residue[{text}]", {"w": text}, lambda: L.residue - (x - y) / (2 * x * y), res_tol)
            b.add(f"laurent-constant[{text}]", {"w": text}, lambda: L.constant - kr.kronecker_constant(x, y), const_tol)


def _suite_higher_klf(b: _Builder, seed: int, points: int):
    tol = tolerance(b.ctx, ALLOWANCE["klf-routes"])
    for name, cls in kr.sqrt3_classes().items():
        for k in (3, 4, 5):
            b.add(
                f"thm[{name},k={k}]",
                {"class": name, "k": k},
                lambda: (kr.higher_klf_rhs(k, cls) - kr.partial_zeta(k, cls)) / kr.partial_zeta(k, cls),
                tol,
            )


def _suite_jfun(b: _Builder, seed: int, points: int):
    tol = tolerance(b.ctx, ALLOWANCE["jfun"])
    for i, x in enumerate(grid(seed, points, "real-positive")):
        z = to_mp(x)
        b.add(f"two-term[{i}]", {"x": x}, lambda: hg.calJ1(z) - hg.calJ1(1 / z) / z, tol)
        b.add(f"via-F1[{i}]", {"x": x}, lambda: hg.calJ1(z) - hg.calJ1_via_F1(z), tol)
    for i, x in enumerate(grid(seed, max(1, points // 3), "real-positive")):
        b.add(f"J-relation[{i}]", {"x": x}, lambda: hg.J_RZ(x) - hg.J_RZ_via_F2(x), tol)
    b.add("J-at-1", {"x": 1}, lambda: hg.J_RZ(1) - mp.log(2) ** 2 / 2, tol)
    for n in range(1, 9):
        b.add(f"closed[n={n}]", {"n": n}, lambda: hg.calJ1_closed(n) - hg.calJ1(n), tol)
        b.add(f"closed[1/{n}]", {"n": n, "inverted": True}, lambda: hg.calJ1_closed(n, True) - hg.calJ1(mp.mpf(1) / n), tol)
    for n in (2, 4):
        u = n + mp.sqrt(n * n - 1)
        b.add(f"unit[n={n}]", {"n": n}, lambda: hg.unit_eval(n) - hg.calJ1(u), tol)


def _suite_eisen(b: _Builder, seed: int, points: int):
    tol = tolerance(b.ctx, ALLOWANCE["eisen"])
    taus = [1j, 0.5 + 1j, 2j] + grid(seed, points, "upper-half")
    for i, t in enumerate(taus):
        b.add(f"prop51[{i}]", {"tau": t}, lambda: ep.prop51_residual(t), tol)
        b.add(f"R1[{i}]", {"tau": t}, lambda: ep.R1(t) - ep.R1_eisenstein(t), tol)
    for N in range(1, 13):
        b.add(f"kurokawa[N={N}]", {"N": N}, lambda: ep.kurokawa_F1(N) - pf.F1(N), tol)
        b.add(f"kurokawa[1/{N}]", {"N": N, "inverted": True}, lambda: ep.kurokawa_F1(N, True) - pf.F1(mp.mpf(1) / N), tol)
    for s, t in (("1.25", 1j), ("1.6", 0.5 + 2j)):
        b.add(f"prop63[s={s}]", {"s": s, "tau": t}, lambda: ep.prop63_residual(s, t), tol)
        b.add(f"f_s[s={s}]", {"s": s, "tau": t}, lambda: ep.f_s(s, t) - ep.f_s_qseries(s, t), tol)


def _suite_genperiod(b: _Builder, seed: int, points: int):
    ctx = b.ctx
    tol = tolerance(ctx, ALLOWANCE["genperiod"])
    for s in ("0.75", "1.5", "2", "3"):
        b.add(f"psi-at-1[s={s}]", {"s": s}, lambda: ep.psi_plus(s, 1) - riemann_zeta(2 * mp.mpf(s) - 1), tol)
    for i, x in enumerate(grid(seed, points, "real-positive")):
        b.add(f"half[{i}]", {"x": x}, lambda: ep.psi_plus("0.5", x) + pf.F1(x), tol)
    for s, x in (("1.2", 3), ("1.5", 1), ("2", "0.7")):
        b.add(f"integral-route[s={s}]", {"s": s, "x": x}, lambda: ep.psi_plus_integral(s, x) - ep.psi_plus(s, x), tol)
    for s, x in (("1.25", "1.3"), ("2.5", "0.4"), ("0.5", "0.8")):
        b.add(f"three-term[s={s}]", {"s": s, "x": x}, lambda: ep.psi_three_term_residual(s, x), tol)
    for s, x in (("1.5", 100), ("1.2", "0.01")):
        r, bound = ep.psi_growth_residual(s, x)
        b.add(f"growth[s={s},x={x}]", {"s": s, "x": x}, lambda: r, bound)
    hi = ctx.with_precision(max(60, ctx.precision_digits))
    limit_tol = tolerance(hi, ALLOWANCE["klf-limit"], "1e-8")
    for x in ("0.7", "2.3"):
        with working(hi):
            L = ep.psi_laurent(x)
            b.add(f"residue[x={x}]", {"x": x}, lambda: L.residue - 1 / (2 * mp.mpf(x)), limit_tol)
            b.add(f"laurent-constant[x={x}]", {"x": x}, lambda: L.constant - ep.psi_laurent_constant(x), limit_tol)
    xs = grid(seed, max(1, points // 3), "real-positive")
    for s in ("1.25", "1.75", "2.5"):
        for n in range(2, 5):
            for i, x in enumerate(xs):
                b.add(f"eigen-psi[s={s},n={n},{i}]", {"s": s, "n": n, "x": x}, lambda: ha.eigen_residual_psi(n, s, x), tol)


def _suite_ramanujan_integral(b: _Builder, seed: int, points: int):
    tol = tolerance(b.ctx, ALLOWANCE["ramanujan-integral"])
    vals = {}
    for x in ("1", "2", "0.5"):
        vals[x] = xi_integral(x)
        b.add(f"left-member[x={x}]", {"x": x}, lambda: vals[x] - xi_left_member(x), tol)
    b.add("closed[x=1]", {"x": "1"}, lambda: vals["1"] - (mp.euler - mp.log(2 * mp.pi) + mp.mpf(1) / 2), tol)
    b.add("symmetry[x=2]", {"x": "2"}, lambda: vals["2"] - vals["0.5"], tol)


_RUNNERS = {
    "fe": _suite_fe,
    "hecke": _suite_hecke,
    "klf": _suite_klf,
    "higher-klf": _suite_higher_klf,
    "jfun": _suite_jfun,
    "eisen": _suite_eisen,
    "genperiod": _suite_genperiod,
    "ramanujan-integral": _suite_ramanujan_integral,
}


def run_suite(name: str, ctx: EvalContext = DEFAULT_CONTEXT, points: int | None = None) -> list[SuiteReport]:
    """Run one suite (or every suite for "all"); one report per suite."""
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, ctx, points)]
    if name not in _RUNNERS:
        raise UnknownSuite(name)
    start = time.perf_counter()
    b = _Builder(ctx)
    with working(ctx):
        _RUNNERS[name](b, ctx.seed, points or DEFAULT_POINTS.get(name, 10))
    ms = int((time.perf_counter() - start) * 1000)
    return [SuiteReport(name, ctx.seed, ctx.precision_digits, b.cases, ms)]
