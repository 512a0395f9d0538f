"""The integral J1, its shift calJ1 = J1 + log 2, and their closed forms.

calJ1 satisfies calJ1(x) = calJ1(1/x) / x and is expressed through F1 at
x, 2x and x/2.  At integers and their reciprocals it reduces to finite sums
of logarithms; at the units n + sqrt(n^2 - 1) (n even) it is given by the
constant P_tilde of the Kronecker limit formula.
"""
from __future__ import annotations

import mpmath as mp

from .context import evaluates
from .errors import DomainError
from .kronecker import P_tilde
from .numerics import quad, to_mp
from .periodfn import F1, frak_Fk


def _breakpoints(x):
    c = 1 / abs(x)
    return [0, c, 8 * c, 40 * c, mp.inf] if c < 1 else [0, 1, 8, 40, mp.inf]


@evaluates
def J1(x):
    """Integral over t > 0 of 1 / ((1 + e^-t)(1 + e^(xt)))."""
    x = to_mp(x)
    if mp.re(x) <= 0:
        raise DomainError("J1 needs Re(x) > 0")
    f = lambda t: 1 / ((1 + mp.exp(-t)) * (1 + mp.exp(x * t)))
    pts = sorted(set([0, 1, 8, 40] + _breakpoints(x)[1:-1]))
    return quad(f, pts + [mp.inf], what="J1")


@evaluates
def calJ1(x):
    return J1(x) + mp.log(2)


@evaluates
def calJ1_via_F1(x):
    """3 F1(x) - 2 F1(2x) - F1(x/2) + (1+x)/(2x) log 2."""
    x = to_mp(x)
    if mp.im(x) != 0 or x <= 0:
        raise DomainError("calJ1_via_F1 needs real x > 0")
    return 3 * F1(x) - 2 * F1(2 * x) - F1(x / 2) + (1 + x) / (2 * x) * mp.log(2)


def _log_sum(n: int):
    """sum_j log(1/2 - e_j/2) / (1 + e_j) with e_j = exp(pi i (2j-1)/n).

    Conjugate terms j and n+1-j are paired.  For odd n the singular middle
    term is replaced by -1/2.
    """
    total = mp.mpf(0)
    for j in range(1, n // 2 + 1):
        e = mp.expjpi(mp.mpf(2 * j - 1) / n)
        total += 2 * mp.re(mp.log((1 - e) / 2) / (1 + e))
    if n % 2:
        total -= mp.mpf(1) / 2
    return total


@evaluates
def calJ1_closed(n: int, inverted: bool = False):
    """calJ1(n), or calJ1(1/n) when ``inverted``, as a finite sum of logarithms."""
    if n < 1:
        raise DomainError("n must be >= 1")
    value = mp.log(2) - _log_sum(n)
    return value if inverted else value / n


@evaluates
def unit_C(u):
    u = to_mp(u)
    return (
        P_tilde(u, 1 / u)
        - 2 * P_tilde((u + 1) / 2, (u + 1) / (2 * u))
        - 2 * P_tilde(2 * u / (u + 1), 2 / (u + 1))
    )


@evaluates
def unit_eval(n: int):
    """calJ1(u) at u = n + sqrt(n^2 - 1) for even n >= 2."""
    if n < 2 or n % 2:
        raise DomainError("unit_eval needs an even n >= 2")
    u = n + mp.sqrt(n * n - 1)
    return (
        unit_C(u) / (u - 1)
        - 2 * mp.euler / (u + 1)
        + (u * u + 1) / (u * (u + 1)) * mp.log(2)
        - 2 / (u + 1) * mp.log((u - 1) / (u + 1))
    )


@evaluates
def J_RZ(x):
    """Integral over t > 0 of log(1 + e^(-xt)) / (1 + e^t)."""
    x = to_mp(x)
    if mp.re(x) <= 0:
        raise DomainError("J_RZ needs Re(x) > 0")
    f = lambda t: mp.log1p(mp.exp(-x * t)) / (1 + mp.exp(t))
    pts = sorted(set([0, 1, 8, 40] + _breakpoints(x)[1:-1]))
    return quad(f, pts + [mp.inf], what="J_RZ")


@evaluates
def J_RZ_via_F2(x):
    """frak_F2(2x) - 2 frak_F2(x) + frak_F2(x/2) + pi^2 / (12x)."""
    x = to_mp(x)
    return frak_Fk(2, 2 * x) - 2 * frak_Fk(2, x) + frak_Fk(2, x / 2) + mp.pi**2 / (12 * x)
