"""Partial zeta building block Z(s; w, w') and the Kronecker limit data.

    Z(s; w, w') = sum_{p>=1, q>=0} (p (w - w') / ((q + p w)(q + p w')))^s

For integer k >= 3 the inner q-sum is a finite combination of Hurwitz zeta
and digamma values (partial fractions).  For general s the q-sum is done by
Euler-Maclaurin and the divergent pieces are peeled off as multiples of
zeta(s) and zeta(s-1), which continues Z to Re(s) > 1/2 with poles at 1, 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial
from typing import NamedTuple

import mpmath as mp
import numpy as np
from scipy import integrate

from .context import current, eps, evaluates
from .errors import ConvergenceError, DomainError, PoleError
from .numerics import asymptotic_sum, bernoulli_mpf, hurwitz_zeta as hz, quad, to_mp
from .periodfn import F1, Fk_derivative
from .quadfield import Cycle, QuadIrr, conjugate, cycle_to_reduced, is_reduced


@dataclass(frozen=True)
class NarrowClassData:
    d: int
    cycle: Cycle
    name: str = ""
    reduced: tuple[QuadIrr, ...] = field(init=False)

    def __post_init__(self):
        cyc = self.cycle if isinstance(self.cycle, Cycle) else Cycle(tuple(self.cycle))
        object.__setattr__(self, "cycle", cyc)
        object.__setattr__(self, "reduced", tuple(cycle_to_reduced(cyc, self.d)))


def sqrt3_classes() -> dict[str, NarrowClassData]:
    """The two narrow classes of Q(sqrt 3): cycles ((4)) and ((2, 3))."""
    return {
        "B0": NarrowClassData(3, Cycle((4,)), "B0"),
        "B1": NarrowClassData(3, Cycle((2, 3)), "B1"),
    }


def _pair(w):
    """(w, w') as mp numbers; accepts a reduced QuadIrr or an (x, y) tuple."""
    if isinstance(w, QuadIrr):
        if not is_reduced(w):
            raise DomainError(f"{w} is not reduced")
        return w.to_mp(), conjugate(w).to_mp()
    x, y = (to_mp(v) for v in w)
    if not x > y > 0:
        raise DomainError("need x > y > 0")
    return x, y


def _reach():
    # e^(-2 pi reach) is below the working epsilon
    return mp.mp.dps * mp.log(10) / (2 * mp.pi) + 2


def _taylor(s, phi0, phi1, c0):
    """Taylor coefficients of c0 * (phi(t)/phi0)^(-s) with phi(t) = phi0 + phi1 t + t^2."""
    cs = [c0, -s * phi1 * c0 / phi0]

    def get(m):
        while len(cs) <= m:
            n = len(cs) - 1
            cs.append(-((n + s) * phi1 * cs[n] + (n - 1 + 2 * s) * cs[n - 1]) / (phi0 * (n + 1)))
        return cs[m]

    return get


def _em_correction(coeff, scale, weight=lambda j: 1):
    """sum_j B_{2j}/(2j) * coeff(2j-1) * weight(j)."""
    out = asymptotic_sum(
        lambda j: bernoulli_mpf(2 * j) / (2 * j) * coeff(2 * j - 1) * weight(j), scale=scale
    )
    if out is None:
        raise ConvergenceError("Euler-Maclaurin correction diverged; outer cutoff too small")
    return out


def _pf_coeffs(k: int, delta):
    """A_j, B_j with 1/((q+a)^k (q+b)^k) = sum_j A_j/(q+a)^j + B_j/(q+b)^j, delta = b - a."""
    A, B = [None], [None]
    for j in range(1, k + 1):
        c = (-1) ** (k - j) * comb(2 * k - j - 1, k - j)
        A.append(c * delta ** (-(2 * k - j)))
        B.append(c * (-delta) ** (-(2 * k - j)))
    return A, B


def _I_int(k: int, x, y):
    """Closed form of the integral of ((x-y)/((t+x)(t+y)))^k over t > 0."""
    A, B = _pf_coeffs(k, y - x)
    total = -A[1] * mp.log(x / y)
    for j in range(2, k + 1):
        total += (A[j] * x ** (1 - j) + B[j] * y ** (1 - j)) / (j - 1)
    return (x - y) ** k * total


def _inner_exact(k: int, p: int, x, y):
    """sum_q (p(x-y)/((q+px)(q+py)))^k via Hurwitz zeta and digamma."""
    a, b = p * x, p * y
    A, B = _pf_coeffs(k, b - a)
    total = A[1] * (mp.digamma(b) - mp.digamma(a))
    for j in range(2, k + 1):
        total += A[j] * hz(j, a) + B[j] * hz(j, b)
    return (p * (x - y)) ** k * total


@evaluates
def Z_direct(k: int, w):
    if k < 3:
        raise DomainError("Z_direct needs k >= 3")
    x, y = _pair(w)
    P = int(mp.ceil(_reach() / y))
    if P > current().max_terms:
        raise ConvergenceError("outer cutoff exceeds max_terms")
    head = mp.fsum(_inner_exact(k, p, x, y) for p in range(1, P + 1))
    # p > P: Euler-Maclaurin in q, then summed over p as Hurwitz zeta values
    g0 = ((x - y) / (x * y)) ** k
    coeff = _taylor(mp.mpf(k), x * y, x + y, g0)
    a = P + 1
    tail = _I_int(k, x, y) * hz(k - 1, a) + g0 * hz(k, a) / 2
    tail -= _em_correction(coeff, abs(tail), lambda j: hz(k + 2 * j - 1, a))
    return head + tail


class RawOracle(NamedTuple):
    value: mp.mpf
    bound: mp.mpf
    raw: mp.mpf


def Z_raw_oracle(k: int, w: QuadIrr, P: int, Q: int) -> RawOracle:
    """Brute-force double sum in float64 with bracketing integral tails.

    ``bound`` brackets the true value: the q-tails of a decreasing summand lie
    between the integrals from Q+1 and from Q, and the p-tail between
    I_k sum p^(1-k) and that plus h(0) sum p^(-k).
    """
    if P < 100 or Q < 100:
        raise DomainError("P and Q must be at least 100")
    x = float(w)
    y = float(conjugate(w))
    delta = x - y
    p = np.arange(1, P + 1, dtype=float)[:, None]
    q = np.arange(0, Q + 1, dtype=float)[None, :]
    raw = float(np.sum((p * delta / ((q + p * x) * (q + p * y))) ** k))

    def h(t):
        return (delta / ((t + x) * (t + y))) ** k

    def tail_from(t0):
        return integrate.quad(h, t0, np.inf, epsabs=0, epsrel=1e-13, limit=200)[0]

    lo = hi = 0.0
    for pp in range(1, P + 1):
        scale = pp ** (1 - k)
        lo += scale * tail_from((Q + 1) / pp)
        hi += scale * tail_from(Q / pp)
    Ik = tail_from(0.0)
    lo += Ik * (P + 1) ** (2 - k) / (k - 2)
    hi += Ik * P ** (2 - k) / (k - 2) + h(0.0) * P ** (1 - k) / (k - 1)
    value = raw + (lo + hi) / 2
    bound = (hi - lo) / 2 + 1e-12 * abs(value)
    return RawOracle(mp.mpf(value), mp.mpf(bound), mp.mpf(raw))


def _K(s, x, y, T):
    """Integral over t > T of ((x-y)/((t+x)(t+y)))^s, as a Gauss hypergeometric value."""
    U = 1 / (T + x)
    return (x - y) ** s * U ** (2 * s - 1) / (2 * s - 1) * mp.hyp2f1(s, 2 * s - 1, 2 * s, (x - y) * U)


@evaluates
def I_s(s, x, y):
    """Integral over t > 0 of (x-y)^s/((x+t)^s (y+t)^s), by quadrature on u = t/(1+t)."""
    s, x, y = to_mp(s), to_mp(x), to_mp(y)
    if not x > y:
        raise DomainError("I_s needs x > y")
    if y <= 0:
        raise DomainError("I_s needs y > 0")
    if mp.re(s) <= mp.mpf(1) / 2:
        raise DomainError("I_s needs Re(s) > 1/2")
    d = x - y

    def f(u):
        v = 1 - u
        return (d * v * v / ((x * v + u) * (y * v + u))) ** s / (v * v)

    # near u = 1 the integrand is ~(1-u)^(2s-2); u = 1 - v^m flattens it
    m = max(1, 1 / (2 * mp.re(s) - 1))
    half = mp.mpf(1) / 2

    def g(v):
        w = v**m
        return m * d**s * mp.power(v, m * (2 * s - 1) - 1) / ((x * w + 1 - w) * (y * w + 1 - w)) ** s

    return quad(f, [0, half], what="I(s)") + quad(g, [0, half ** (1 / m)], what="I(s)")


@evaluates
def I_s_hypergeometric(s, x, y):
    """Closed form of I_s through 2F1 (independent of the quadrature route)."""
    s, x, y = to_mp(s), to_mp(x), to_mp(y)
    if not x > y > 0:
        raise DomainError("need x > y > 0")
    return _K(s, x, y, 0)


@evaluates
def Z_continued(s, w):
    s = to_mp(s)
    if mp.re(s) <= mp.mpf(1) / 2:
        raise DomainError("Z_continued needs Re(s) > 1/2")
    if s == 1 or s == 2:
        raise PoleError(f"Z has a pole at s = {s}")
    x, y = _pair(w)
    lam = (x - y) ** s
    g0 = lam / (x * y) ** s
    I = _K(s, x, y, 0)
    reach = _reach()
    P = int(mp.ceil(reach / y))
    if P > current().max_terms:
        raise ConvergenceError("outer cutoff exceeds max_terms")

    def bracket(p):
        Q0 = max(0, int(mp.ceil(reach - p * y)))
        f = lambda q: lam / ((q + p * x) * (q + p * y)) ** s
        direct = mp.fsum(f(q) for q in range(Q0))
        c0 = f(Q0)
        coeff = _taylor(s, (Q0 + p * x) * (Q0 + p * y), 2 * Q0 + p * (x + y), c0)
        em = c0 / 2 - _em_correction(coeff, abs(c0))
        ps = mp.power(p, 1 - 2 * s)
        if Q0:
            integral = ps * (_K(s, x, y, mp.mpf(Q0) / p) - I)
        else:
            integral = 0
        return direct + em + integral - mp.power(p, -2 * s) * g0 / 2

    head = mp.fsum(mp.power(p, s) * bracket(p) for p in range(1, P + 1))
    coeff = _taylor(s, x * y, x + y, g0)
    a = P + 1
    tail = -_em_correction(coeff, abs(head), lambda j: hz(s + 2 * j - 1, a))
    return g0 / 2 * mp.zeta(s) + mp.zeta(s - 1) * I + head + tail


@evaluates
def P_tilde(x, y):
    """F1(x) - F1(y) - (x-y)/(2xy) (gamma + log((x-y)/(xy)))."""
    x, y = to_mp(x), to_mp(y)
    if not x > y > 0:
        raise DomainError("P_tilde needs x > y > 0")
    r = (x - y) / (x * y)
    return F1(x) - F1(y) - r / 2 * (mp.euler + mp.log(r))


@evaluates
def kronecker_constant(x, y):
    """Constant term of Z at s = 1: F1(x) - F1(y) + (x-y)/(2xy) (gamma + log((x-y)/(xy))).

    Differs from P_tilde in the sign of the second term; the expansion of
    zeta(s) (x-y)^s / (2 (xy)^s) at s = 1 gives the plus sign.
    """
    x, y = to_mp(x), to_mp(y)
    if not x > y > 0:
        raise DomainError("kronecker_constant needs x > y > 0")
    r = (x - y) / (x * y)
    return F1(x) - F1(y) + r / 2 * (mp.euler + mp.log(r))


class LaurentData(NamedTuple):
    residue: mp.mpf
    constant: mp.mpf


@evaluates
def laurent_data(w, h="1e-6") -> LaurentData:
    """Residue and constant term of Z at s = 1 from the values at 1 +- h."""
    h = to_mp(h)
    up = Z_continued(1 + h, w)
    down = Z_continued(1 - h, w)
    return LaurentData(h * (up - down) / 2, (up + down) / 2)


@evaluates
def D_op(n: int, derivs_x, derivs_y, x, y):
    """sum_i C(2n-i, n) (F^(i)(x) - (-1)^i F^(i)(y)) / (i! (y-x)^(n-i))."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if len(derivs_x) < n + 1 or len(derivs_y) < n + 1:
        raise DomainError(f"need derivatives of orders 0..{n}")
    x, y = to_mp(x), to_mp(y)
    if x == y:
        raise DomainError("D_op needs x != y")
    total = 0
    for i in range(n + 1):
        fx, fy = to_mp(derivs_x[i]), to_mp(derivs_y[i])
        total += comb(2 * n - i, n) * (fx - (-1) ** i * fy) / (factorial(i) * (y - x) ** (n - i))
    return total


@evaluates
def higher_klf_rhs(k: int, cls: NarrowClassData):
    """sum over Red(B) of (D_{k-1} frak_F_k)(w, w')."""
    if k < 3:
        raise DomainError("k must be >= 3")
    total = 0
    for w in cls.reduced:
        x, y = w.to_mp(), conjugate(w).to_mp()
        dx = [Fk_derivative(k, i, x) for i in range(k)]
        dy = [Fk_derivative(k, i, y) for i in range(k)]
        total += D_op(k - 1, dx, dy, x, y)
    return total


@evaluates
def partial_zeta(k: int, cls: NarrowClassData):
    """sum over Red(B) of Z_direct(k, w)."""
    if k < 3:
        raise DomainError("k must be >= 3")
    return mp.fsum(Z_direct(k, w) for w in cls.reduced)
