"""Eisenstein q-series and the period function psi_s^+.

    psi_s^+(x) = sum*_{m,n>=0} (m x + n)^(-2s)

(edge terms halved, origin omitted).  It is continued in s through the
Hurwitz series with a Bernoulli tail; at s = 1/2 it equals -F1(x).
"""
from __future__ import annotations

from typing import NamedTuple

import mpmath as mp

from .context import current, eps, evaluates
from .errors import ConvergenceError, DomainError, PoleError
from .numerics import (
    _hurwitz,
    asymptotic_sum,
    bernoulli_mpf,
    divisor_count,
    divisor_sigma,
    on_cut,
    quad,
    riemann_zeta,
    to_mp,
)
from .periodfn import F1


# --- q-series ---------------------------------------------------------------


class QSeriesParams(NamedTuple):
    tau: mp.mpc
    trunc: int


def q_params(tau, growth=0) -> QSeriesParams:
    """Cutoff with |q|^trunc * trunc^growth below working epsilon."""
    tau = to_mp(tau)
    y = mp.im(tau)
    if y <= 0:
        raise DomainError("tau must lie in the upper half plane")
    target = mp.mp.dps * mp.log(10)
    n = int(mp.ceil(target / (2 * mp.pi * y))) + 1
    while 2 * mp.pi * y * n - growth * mp.log(n) < target:
        n += 1
    if n > current().max_terms:
        raise ConvergenceError(f"q-series at tau={mp.nstr(tau, 8)} needs more than max_terms terms")
    return QSeriesParams(mp.mpc(tau), n)


def _q_sum(coeff, tau, growth=0):
    p = q_params(tau, growth)
    q = mp.expjpi(2 * p.tau)
    total, qn = 0, 1
    for n in range(1, p.trunc + 1):
        qn *= q
        total += coeff(n) * qn
    return total


@evaluates
def E1_q(tau):
    """1 - 4 sum d(n) q^n."""
    return 1 - 4 * _q_sum(divisor_count, tau, growth=1)


@evaluates
def prop51_residual(tau):
    """|F1(-tau) - F1(tau) - (pi i / 2) E1(tau)|."""
    tau = to_mp(tau)
    return abs(F1(-tau) - F1(tau) - mp.pi * 1j / 2 * E1_q(tau))


@evaluates
def kurokawa_F1(N: int, inverted: bool = False):
    """Cotangent sum for F1(N), or F1(1/N) when ``inverted``."""
    if N < 1:
        raise DomainError("N must be >= 1")
    cot_sum = mp.fsum((N - 2 * k) * mp.cot(mp.pi * k / N) for k in range(1, N // 2 + 1))
    braces = 1 / mp.pi - cot_sum / N
    return mp.pi / 2 * braces if inverted else mp.pi / (2 * N) * braces


@evaluates
def R1(tau):
    """-(tau / (pi i)) F1(tau)."""
    tau = to_mp(tau)
    if mp.im(tau) <= 0:
        raise DomainError("tau must lie in the upper half plane")
    return -tau / (mp.pi * 1j) * F1(tau)


@evaluates
def R1_eisenstein(tau):
    """-(E1(-1/tau) - tau E1(tau)) / 4."""
    tau = to_mp(tau)
    return -(E1_q(-1 / tau) - tau * E1_q(tau)) / 4


@evaluates
def E2s_q(s, tau):
    """1 + (2 / zeta(1-2s)) sum sigma_{2s-1}(n) q^n."""
    s = to_mp(s)
    if s == 0:
        raise DomainError("E2s_q is undefined at s = 0 (zeta pole)")
    z = riemann_zeta(1 - 2 * s)
    if z == 0 or abs(z) < eps():
        raise DomainError(f"zeta(1-2s) vanishes at s = {s}")
    growth = max(0, float(mp.re(2 * s - 1))) + 1
    return 1 + 2 / z * _q_sum(lambda n: divisor_sigma(2 * s - 1, n), tau, growth)


# --- psi_s^+ -----------------------------------------------------------------


def _rising(a, m):
    r = mp.mpf(1)
    for j in range(m):
        r *= a + j
    return r


def _psi_coeff(s2, k):
    """B_2k / (2k)! * Gamma(s2 + 2k - 1) / Gamma(s2), entire in s2."""
    return bernoulli_mpf(2 * k) / mp.factorial(2 * k) * _rising(s2, 2 * k - 1)


def _psi_tail(s2, x, N, sector):
    a = N + 1
    head = _psi_coeff(s2, 1) * x ** (-s2 - 1) * _hurwitz(s2 + 1, a)
    rest = asymptotic_sum(
        lambda k: _psi_coeff(s2, k + 1) * x ** (-s2 - 2 * k - 1) * _hurwitz(s2 + 2 * k + 1, a),
        scale=head,
        sector=sector,
    )
    return None if rest is None else head + rest


def _psi_series(s, x):
    ctx = current()
    s2 = 2 * s
    sector = 1 / mp.cos(mp.arg(x) / 2)
    reach = mp.mp.dps * mp.log(10) / (2 * mp.pi) + 3 + abs(s)
    N = max(8, int(mp.ceil(reach * sector / abs(x))))
    while True:
        if N > ctx.max_terms:
            raise ConvergenceError(f"psi_plus series at x={mp.nstr(x, 8)} needs more than max_terms terms")
        tail = _psi_tail(s2, x, N, sector)
        if tail is not None:
            break
        N *= 2

    def summand(n):
        a = n * x
        return _hurwitz(s2, a) - a ** (-s2) / 2 + a ** (1 - s2) / (1 - s2)

    body = mp.fsum(summand(n) for n in range(1, N + 1)) + tail
    return body + riemann_zeta(s2) / 2 + x ** (1 - s2) / (s2 - 1) * riemann_zeta(s2 - 1)


@evaluates
def psi_plus(s, x):
    """psi_s^+(x) for x off the cut (-inf, 0], any s except the pole s = 1."""
    s, x = to_mp(s), to_mp(x)
    if on_cut(x):
        raise DomainError(f"{x} lies on the cut (-inf, 0]")
    if s == 1:
        raise PoleError("psi_plus has a pole at s = 1")
    if mp.im(s) == 0 and s <= 0 and mp.isint(s):
        raise DomainError("psi_plus is not implemented at non-positive integers s")
    if s == mp.mpf(1) / 2:
        return -F1(x)
    return _psi_series(s, x)


@evaluates
def psi_plus_integral(s, x):
    """Gamma(2s)^-1 * integral of (1/(e^t-1) + 1/2 + x^(2s)/2) t^(2s-1) / (e^(xt)-1)."""
    s, x = to_mp(s), to_mp(x)
    if mp.re(s) <= 1 or mp.re(x) <= 0:
        raise DomainError("psi_plus_integral needs Re(s) > 1 and Re(x) > 0")
    half = x ** (2 * s) / 2

    def f(t):
        return (1 / mp.expm1(t) + mp.mpf(1) / 2 + half) * t ** (2 * s - 1) / mp.expm1(x * t)

    # f ~ t^(2s-3) at 0; t = u^m with m (2 Re s - 2) >= 1 removes the cusp on [0, 1]
    m = max(1, 1 / (2 * mp.re(s) - 2))
    head = quad(lambda u: m * u ** (m - 1) * f(u**m), [0, mp.mpf(1) / 2, 1], what="psi_plus_integral")
    c = 1 / abs(x)
    pts = sorted(set([1, 8, 40] + [v for v in (8 * c, 40 * c) if v > 1])) + [mp.inf]
    return (head + quad(f, pts, what="psi_plus_integral")) / mp.gamma(2 * s)


def _large_x(s, x):
    """Three leading terms of psi_s^+(x) as x -> oo, and the next-term size."""
    s2 = 2 * s
    main = (
        riemann_zeta(s2) / 2
        + x ** (1 - s2) / (s2 - 1) * riemann_zeta(s2 - 1)
        + _psi_coeff(s2, 1) * riemann_zeta(s2 + 1) * x ** (-s2 - 1)
    )
    nxt = abs(_psi_coeff(s2, 2) * riemann_zeta(s2 + 3) * x ** (-s2 - 3))
    return main, nxt


@evaluates
def psi_growth_expansion(s, x):
    """(three-term asymptotic value, next-order size) for x >= 50 or x <= 1/50."""
    s, x = to_mp(s), to_mp(x)
    if mp.im(x) != 0 or x <= 0:
        raise DomainError("psi_growth_expansion needs real x > 0")
    if x >= 50:
        return _large_x(s, x)
    if x <= mp.mpf(1) / 50:
        main, nxt = _large_x(s, 1 / x)
        scale = x ** (-2 * s)
        return scale * main, abs(scale) * nxt
    raise DomainError("growth expansion applies for x >= 50 or x <= 1/50")


@evaluates
def psi_growth_residual(s, x):
    """(|psi_s^+(x) - growth expansion|, next-order bound)."""
    main, nxt = psi_growth_expansion(s, x)
    return abs(psi_plus(s, x) - main), 2 * nxt


@evaluates
def psi_three_term_residual(s, x):
    s, x = to_mp(s), to_mp(x)
    return abs(psi_plus(s, x) - psi_plus(s, x + 1) - (x + 1) ** (-2 * s) * psi_plus(s, x / (x + 1)))


class PsiLaurent(NamedTuple):
    residue: mp.mpf
    constant: mp.mpf


@evaluates
def psi_laurent(x, h="1e-6") -> PsiLaurent:
    """Residue and constant of psi_s^+(x) at s = 1 from the values at 1 +- h."""
    h = to_mp(h)
    up, down = psi_plus(1 + h, x), psi_plus(1 - h, x)
    return PsiLaurent(h * (up - down) / 2, (up + down) / 2)


@evaluates
def psi_laurent_constant(x):
    """(gamma - log x - 1)/x + pi^2/12 (1 - 1/x^2) + sum_n (zeta(2, nx) - 1/(nx))."""
    x = to_mp(x)
    if on_cut(x):
        raise DomainError(f"{x} lies on the cut (-inf, 0]")
    sector = 1 / mp.cos(mp.arg(x) / 2)
    reach = mp.mp.dps * mp.log(10) / (2 * mp.pi) + 3
    N = max(8, int(mp.ceil(reach * sector / abs(x))))
    while True:
        a = N + 1
        head = _hurwitz(2, a) / (2 * x * x)
        rest = asymptotic_sum(
            lambda k: bernoulli_mpf(2 * k) * x ** (-2 * k - 1) * _hurwitz(2 * k + 1, a),
            scale=head,
            sector=sector,
        )
        if rest is not None:
            break
        N *= 2
    body = mp.fsum(_hurwitz(2, n * x) - 1 / (n * x) for n in range(1, N + 1)) + head + rest
    return (mp.euler - mp.log(x) - 1) / x + mp.pi**2 / 12 * (1 - 1 / x**2) + body


@evaluates
def f_s(s, tau):
    """psi_s^+(tau) + tau^(-2s) psi_s^+(-1/tau)."""
    s, tau = to_mp(s), to_mp(tau)
    if mp.im(tau) <= 0:
        raise DomainError("tau must lie in the upper half plane")
    if mp.re(s) <= 1:
        raise DomainError("f_s needs Re(s) > 1")
    return psi_plus(s, tau) + tau ** (-2 * s) * psi_plus(s, -1 / tau)


@evaluates
def f_s_qseries(s, tau):
    """(1 + e^(-2 pi i s)) zeta(2s) / 2 + (-2 pi i)^(2s) / Gamma(2s) sum sigma_{2s-1}(n) q^n."""
    s, tau = to_mp(s), to_mp(tau)
    const = (1 + mp.expjpi(-2 * s)) * riemann_zeta(2 * s) / 2
    growth = max(0, float(mp.re(2 * s - 1))) + 1
    series = _q_sum(lambda n: divisor_sigma(2 * s - 1, n), tau, growth)
    return const + (2 * mp.pi) ** (2 * s) * mp.expjpi(-s) / mp.gamma(2 * s) * series


@evaluates
def Psi_s(s, tau):
    """E_2s(tau) - tau^(-2s) E_2s(-1/tau)."""
    s, tau = to_mp(s), to_mp(tau)
    return E2s_q(s, tau) - tau ** (-2 * s) * E2s_q(s, -1 / tau)


@evaluates
def prop63_residual(s, tau):
    """|Psi_s(tau) - 2 (1 - e^(-2 pi i s)) / ((1 + e^(-2 pi i s)) zeta(2s)) psi_s^+(tau)|."""
    s, tau = to_mp(s), to_mp(tau)
    if mp.re(s) <= 1:
        raise DomainError("prop63_residual needs Re(s) > 1")
    e = mp.expjpi(-2 * s)
    if abs(1 + e) < eps():
        raise DomainError("1 + e^(-2 pi i s) vanishes")
    factor = 2 * (1 - e) / ((1 + e) * riemann_zeta(2 * s))
    return abs(Psi_s(s, tau) - factor * psi_plus(s, tau))
