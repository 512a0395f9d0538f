"""The Ramanujan period function F1 and the family frak_Fk.

    frak_F1(x) = sum_n psi(nx) + 1/(2nx) - log(nx)
    F1(x)      = frak_F1(x) - (gamma - log(2 pi / x)) / 2

Three routes are available for F1: a digamma series with a Bernoulli tail,
a half-line integral (Re x > 0), and the large/small-x asymptotic expansion.
"""
from __future__ import annotations

import enum
from math import factorial
from typing import NamedTuple

import mpmath as mp

from .context import current, eps, evaluates
from .errors import ConvergenceError, DomainError
from .numerics import (
    asymptotic_sum,
    bernoulli_mpf,
    hurwitz_zeta as hz,
    hurwitz_zeta_ds,
    on_cut,
    polygamma,
    quad,
    to_mp,
    zeta_neg_int,
)


class EvalMethod(str, enum.Enum):
    SERIES = "series"
    INTEGRAL = "integral"
    ASYMPTOTIC = "asymptotic"


class AsymptoticValue(NamedTuple):
    value: mp.mpf | mp.mpc
    bound: mp.mpf


def _check_off_cut(x):
    x = to_mp(x)
    if on_cut(x):
        raise DomainError(f"{x} lies on the cut (-inf, 0]")
    return x


def _summand(k: int, i: int, x):
    if k == 1:
        return lambda n: mp.digamma(n * x) + 1 / (2 * n * x) - mp.log(n * x)
    if k == 2:
        return lambda n: (mp.digamma(n * x) - mp.log(n * x)) / n
    if i == 0:
        return lambda n: mp.digamma(n * x) / mp.mpf(n) ** (k - 1)
    return lambda n: polygamma(i, n * x) * mp.mpf(n) ** (1 - k + i)


def _tail(k: int, i: int, x, N: int, sector):
    """Sum over n > N of the summand, from the asymptotic expansion of psi."""
    a = N + 1
    if k == 1:
        head = 0
        term = lambda j: -bernoulli_mpf(2 * j) / (2 * j * x ** (2 * j)) * hz(2 * j, a)
    elif k == 2:
        head = -hz(2, a) / (2 * x)
        term = lambda j: -bernoulli_mpf(2 * j) / (2 * j * x ** (2 * j)) * hz(2 * j + 1, a)
    elif i == 0:
        head = -hurwitz_zeta_ds(k - 1, a) + mp.log(x) * hz(k - 1, a) - hz(k, a) / (2 * x)
        term = lambda j: -bernoulli_mpf(2 * j) / (2 * j * x ** (2 * j)) * hz(k - 1 + 2 * j, a)
    else:
        sign = (-1) ** (i + 1)
        head = sign * (
            factorial(i - 1) * hz(k - 1, a) / x**i
            + factorial(i) * hz(k, a) / (2 * x ** (i + 1))
        )
        term = lambda j: (
            sign * bernoulli_mpf(2 * j) * factorial(2 * j + i - 1) / factorial(2 * j)
            / x ** (2 * j + i) * hz(k - 1 + 2 * j, a)
        )
    rest = asymptotic_sum(term, scale=head, sector=sector)
    if rest is None:
        return None
    return head + rest


def _series(k: int, i: int, x):
    ctx = current()
    sector = 1 / mp.cos(mp.arg(x) / 2)
    reach = mp.mp.dps * mp.log(10) / (2 * mp.pi) + 3
    N = max(8, int(mp.ceil(reach * sector / abs(x))))
    while True:
        if N > ctx.max_terms:
            raise ConvergenceError(f"series for x={mp.nstr(x, 8)} needs more than max_terms terms")
        tail = _tail(k, i, x, N, sector)
        if tail is not None:
            break
        N *= 2
    f = _summand(k, i, x)
    return mp.fsum(f(n) for n in range(1, N + 1)) + tail


@evaluates
def frak_F1(x):
    x = _check_off_cut(x)
    return _series(1, 0, x)


def _shift(x):
    """frak_F1 - F1 = (gamma - log(2 pi / x)) / 2."""
    return (mp.euler - mp.log(2 * mp.pi / x)) / 2


@evaluates
def F1(x, method: EvalMethod | str = EvalMethod.SERIES):
    x = _check_off_cut(x)
    method = EvalMethod(method)
    if method is EvalMethod.INTEGRAL:
        return F1_integral(x)
    if method is EvalMethod.ASYMPTOTIC:
        return _F1_asymptotic_auto(x)
    return _series(1, 0, x) - _shift(x)


def _phi(t):
    # 1/(e^t - 1) - 1/t + 1/2; Taylor series below t = 1/2 avoids the cancellation
    if t < mp.mpf(1) / 2:
        return asymptotic_sum(
            lambda j: bernoulli_mpf(2 * j) * t ** (2 * j - 1) / mp.factorial(2 * j),
            scale=t,
        )
    return 1 / mp.expm1(t) - 1 / t + mp.mpf(1) / 2


@evaluates
def F1_integral(x):
    x = to_mp(x)
    if mp.re(x) <= 0:
        raise DomainError("integral route needs Re(x) > 0")
    c = 1 / abs(x)
    frak = -quad(lambda t: _phi(t) / mp.expm1(x * t), [0, c, 8 * c, 40 * c, mp.inf],
                 what="F1 integral")
    return frak - _shift(x)


def _asym_terms(x, terms: int):
    total = -_shift(x)
    for n in range(2, terms + 2):
        if n % 2 == 0:
            z = zeta_neg_int(n)
            total += mp.mpf(z.numerator) / z.denominator * mp.zeta(n) / x**n
    nxt = terms + 2 + (terms % 2)
    z = zeta_neg_int(nxt)
    bound = abs(mp.mpf(z.numerator) / z.denominator * mp.zeta(nxt) / x**nxt)
    return total, bound


@evaluates
def F1_asymptotic(x, terms: int) -> AsymptoticValue:
    """Truncated large-|x| expansion (or its mirror for small |x|) with an error bound.

    The bound is the magnitude of the first omitted nonzero term.
    """
    x = _check_off_cut(x)
    if terms < 1:
        raise DomainError("terms must be >= 1")
    if abs(x) >= 2:
        value, bound = _asym_terms(x, terms)
    elif abs(x) <= mp.mpf(1) / 2:
        value, bound = _asym_terms(1 / x, terms)
        value, bound = value / x, bound / abs(x)
    else:
        raise DomainError("asymptotic expansion unavailable for 1/2 < |x| < 2")
    return AsymptoticValue(value, bound)


def _F1_asymptotic_auto(x):
    """Asymptotic route with the smallest term count meeting the context precision."""
    target = mp.mpf(10) ** (-current().precision_digits)
    prev = None
    for m in range(1, 400, 2):
        v = F1_asymptotic(x, m)
        if v.bound < target:
            return v.value
        if prev is not None and v.bound > prev:
            break
        prev = v.bound
    raise DomainError(
        f"asymptotic route cannot reach the requested precision at |x| = {mp.nstr(abs(x), 5)}"
    )


@evaluates
def frak_Fk(k: int, x):
    """k >= 3: sum n^(1-k) psi(nx);  k = 2: sum (psi(nx) - log nx)/n;  k = 1: frak_F1."""
    if k < 1:
        raise DomainError("k must be >= 1")
    x = _check_off_cut(x)
    return _series(k, 0, x)


@evaluates
def Fk_derivative(k: int, i: int, x):
    """i-th derivative of frak_Fk for k >= 3, 0 <= i <= k-1, real x > 0."""
    if k < 3:
        raise DomainError("derivatives are implemented for k >= 3")
    if i < 0 or i >= k:
        raise DomainError("derivative order must satisfy 0 <= i <= k-1")
    x = to_mp(x)
    if mp.im(x) != 0 or x <= 0:
        raise DomainError("Fk_derivative needs real x > 0")
    return _series(k, i, x)
