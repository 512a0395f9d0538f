"""Extended-precision special functions.

Digamma and the Riemann zeta function are mpmath's; the wrappers add the
pole and domain checks the rest of the package relies on.  The Hurwitz zeta
function is summed here by Euler-Maclaurin so that tiny values such as
zeta(40, 500) keep full relative accuracy, which the Bernoulli tails used
throughout the package depend on.  Bernoulli numbers are exact rationals from
the defining recurrence.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

import mpmath as mp

from .context import current, eps, evaluates
from .errors import ConvergenceError, DomainError, PoleError

_BERN = [Fraction(1)]
_BERN_LOCK = threading.Lock()
_BERN_MPF: dict[tuple[int, int], mp.mpf] = {}


def bernoulli(n: int) -> Fraction:
    """Exact B_n with B_1 = -1/2."""
    n = int(n)
    if n < 0:
        raise DomainError("bernoulli index must be >= 0")
    if n >= 3 and n % 2:
        return Fraction(0)
    if n >= len(_BERN):
        with _BERN_LOCK:
            for m in range(len(_BERN), n + 1):
                acc = sum(comb(m + 1, k) * _BERN[k] for k in range(m))
                _BERN.append(-acc / (m + 1))
    return _BERN[n]


def bernoulli_mpf(n: int) -> mp.mpf:
    """B_n at the current working precision (cached per precision)."""
    key = (n, mp.mp.prec)
    val = _BERN_MPF.get(key)
    if val is None:
        b = bernoulli(n)
        val = mp.mpf(b.numerator) / b.denominator
        _BERN_MPF[key] = val
    return val


def zeta_neg_int(n: int) -> Fraction:
    """Exact zeta(1 - n) for n >= 1."""
    if n < 1:
        raise DomainError("zeta_neg_int needs n >= 1")
    if n == 1:
        return Fraction(-1, 2)
    return (-1) ** (n + 1) * bernoulli(n) / n


def to_mp(x):
    """Coerce ints, Fractions, decimal strings, QuadIrr and floats to mpmath."""
    if isinstance(x, (mp.mpf, mp.mpc)):
        return x
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    if hasattr(x, "to_mp"):
        return x.to_mp()
    if isinstance(x, str):
        return mp.mpmathify(x.replace(" ", ""))
    return mp.mpmathify(x)


def is_nonpositive_integer(z) -> bool:
    z = to_mp(z)
    return mp.im(z) == 0 and mp.re(z) <= 0 and mp.isint(mp.re(z))


def on_cut(x) -> bool:
    """True when x lies on (-inf, 0]."""
    x = to_mp(x)
    return mp.im(x) == 0 and mp.re(x) <= 0


@evaluates
def digamma(z):
    z = to_mp(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"digamma pole at {z}")
    return mp.digamma(z)


@evaluates
def polygamma(m: int, z):
    z = to_mp(z)
    if m < 1:
        raise DomainError("polygamma order must be >= 1")
    if is_nonpositive_integer(z):
        raise PoleError(f"polygamma pole at {z}")
    if mp.re(z) <= 0:
        return mp.psi(m, z)
    return (-1) ** (m + 1) * mp.factorial(m) * _hurwitz(mp.mpf(m + 1), z)


@evaluates
def riemann_zeta(s):
    s = to_mp(s)
    if s == 1:
        raise PoleError("zeta pole at s = 1")
    return mp.zeta(s)


def _em_start(s, a):
    """Number of explicit terms before the Euler-Maclaurin tail of zeta(s, a)."""
    reach = (mp.mp.dps * 3.5 + 2 * abs(s)) / (2 * mp.pi) + 2
    return max(0, int(mp.ceil(reach - mp.re(a))))


def _em_tail(s, b, log_derivative=False):
    """Euler-Maclaurin value of sum_{m>=0} (b+m)^-s, or of its s-derivative."""
    bs = b ** (-s)
    if log_derivative:
        lb = mp.log(b)
        total = -b * bs * (lb / (s - 1) + 1 / (s - 1) ** 2) - lb * bs / 2
        dpoch = 1 / s  # d/ds log of the Pochhammer factor
    else:
        total = b * bs / (s - 1) + bs / 2
    tiny = eps() * abs(total)
    poch = s  # (s)_{2k-1}
    bpow = bs / b  # b^(-s-2k+1)
    inv_b2 = 1 / (b * b)
    prev = None
    for k in range(1, 500):
        c = bernoulli_mpf(2 * k) / mp.factorial(2 * k) * poch * bpow
        t = c * (dpoch - lb) if log_derivative else c
        total += t
        # monotone majorant of |t|
        a = abs(c) * (abs(dpoch) + abs(lb)) if log_derivative else abs(t)
        if a <= tiny:
            return total
        if prev is not None and a > prev:
            raise ConvergenceError("Euler-Maclaurin tail diverged")
        prev = a
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        if log_derivative:
            dpoch += 1 / (s + 2 * k - 1) + 1 / (s + 2 * k)
        bpow *= inv_b2
    raise ConvergenceError("Euler-Maclaurin tail did not converge")


def _hurwitz(s, a):
    s, a = to_mp(s), to_mp(a)
    M = _em_start(s, a)
    head = mp.fsum(mp.power(a + m, -s) for m in range(M)) if M else 0
    return head + _em_tail(s, a + M)


@evaluates
def hurwitz_zeta(s, a):
    s, a = to_mp(s), to_mp(a)
    if s == 1:
        raise PoleError("Hurwitz zeta pole at s = 1")
    if mp.re(a) <= 0:
        raise DomainError("Hurwitz zeta needs Re(a) > 0")
    return _hurwitz(s, a)


@evaluates
def hurwitz_zeta_ds(s, a):
    """d/ds zeta(s, a)."""
    s, a = to_mp(s), to_mp(a)
    if s == 1:
        raise PoleError("Hurwitz zeta pole at s = 1")
    if mp.re(a) <= 0:
        raise DomainError("Hurwitz zeta needs Re(a) > 0")
    M = _em_start(s, a)
    head = -mp.fsum(mp.log(a + m) * mp.power(a + m, -s) for m in range(M)) if M else 0
    return head + _em_tail(s, a + M, log_derivative=True)


def divisors(n: int) -> list[int]:
    n = int(n)
    if n < 1:
        raise DomainError("divisors need n >= 1")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def divisor_count(n: int) -> int:
    return len(divisors(n))


@evaluates
def divisor_sigma(s, n: int):
    """sigma_s(n) = sum of d^s over divisors d of n."""
    s = to_mp(s)
    return mp.fsum(mp.power(d, s) for d in divisors(n))


def quad(f, points, *, what="integral"):
    """Tanh-sinh quadrature at the active context's refinement level.

    Raises ConvergenceError when mpmath's error estimate exceeds the square
    root of the working epsilon.
    """
    level = current().quad_level
    value, err = mp.quad(f, points, method="tanh-sinh", maxdegree=level, error=True)
    if not mp.isfinite(abs(value)) or err > mp.sqrt(eps()) * max(1, abs(value)):
        raise ConvergenceError(f"{what}: quadrature error estimate {mp.nstr(err, 3)}")
    return value


def asymptotic_sum(term, *, scale=1, sector=1, kmax=400):
    """Sum term(1), term(2), ... of an asymptotic series.

    Stops once |term(k)| * sector**(2k) drops below working epsilon times
    ``scale``; ``sector`` inflates the remainder estimate off the positive
    axis.  Returns None when the terms start growing first, so the caller can
    move further out before retrying.
    """
    tiny = eps() * max(1, abs(scale))
    total = 0
    prev = None
    for k in range(1, kmax + 1):
        t = term(k)
        a = abs(t)
        total += t
        if a * sector ** (2 * k) <= tiny:
            return total
        if prev is not None and a > prev and k > 2:
            return None
        prev = a
    return None


def require(cond: bool, msg: str, exc=DomainError):
    if not cond:
        raise exc(msg)


def check_finite(v, what="value"):
    if not mp.isfinite(abs(v)):
        raise ConvergenceError(f"{what} is not finite")
    return v
