"""Hecke matrix sets, the weight-k slash action and eigenform residuals.

hecke_hat(n) is the family of integer matrices [a b; c d] with
0 <= c < a, 0 <= b < d and ad - bc = n.  Acting by the weight-1 slash it
multiplies F1 by sqrt(n) d(n); by the weight-2s slash it multiplies
psi_plus(s, .) by n^s sigma_{1-2s}(n).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import mpmath as mp

from .context import evaluates
from .errors import DomainError, PoleError
from .numerics import divisor_count, divisor_sigma, divisors, on_cut, to_mp
from .periodfn import F1


@dataclass(frozen=True, eq=False)
class IntMatrix2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det < 1:
            raise DomainError(f"determinant {self.det} < 1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def _key(self):
        # projective identification M ~ -M
        t = (self.a, self.b, self.c, self.d)
        first = next(v for v in t if v)
        return t if first > 0 else tuple(-v for v in t)

    def __eq__(self, other):
        return isinstance(other, IntMatrix2) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __matmul__(self, other: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __repr__(self):
        return f"[{self.a} {self.b}; {self.c} {self.d}]"


S = IntMatrix2(0, -1, 1, 0)
T = IntMatrix2(1, 1, 0, 1)
U = IntMatrix2(1, -1, 1, 0)
IDENTITY = IntMatrix2(1, 0, 0, 1)


@dataclass(frozen=True)
class HeckeElement:
    """Formal sum of (coefficient, matrix) pairs, all of determinant n."""

    terms: tuple[tuple[Fraction, IntMatrix2], ...]
    n: int

    def __post_init__(self):
        terms = tuple((Fraction(c), m) for c, m in self.terms)
        if not terms:
            raise DomainError("a Hecke element needs at least one term")
        for _, m in terms:
            if m.det != self.n:
                raise DomainError(f"{m} has determinant {m.det}, expected {self.n}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, matrices: Iterable[IntMatrix2], coeff=1) -> "HeckeElement":
        ms = list(matrices)
        return cls(tuple((Fraction(coeff), m) for m in ms), ms[0].det)

    @property
    def matrices(self) -> list[IntMatrix2]:
        return [m for _, m in self.terms]

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        if other.n != self.n:
            raise DomainError("formal sums need a common determinant")
        return HeckeElement(self.terms + other.terms, self.n)

    def __rmul__(self, scalar) -> "HeckeElement":
        return HeckeElement(tuple((Fraction(scalar) * c, m) for c, m in self.terms), self.n)


def hecke_hat(n: int) -> HeckeElement:
    if n < 1:
        raise DomainError("n must be >= 1")
    ms = [
        IntMatrix2(a, b, c, d)
        for a in range(1, n + 1)
        for b in range(n)
        for c in range(a)
        for d in range(b + 1, n + 1)
        if a * d - b * c == n
    ]
    return HeckeElement.of(ms)


def hecke_Tinfty(n: int) -> HeckeElement:
    if n < 1:
        raise DomainError("n must be >= 1")
    ms = [IntMatrix2(a, b, 0, n // a) for a in divisors(n) for b in range(n // a)]
    return HeckeElement.of(ms)


@evaluates
def slash(f: Callable, k, h: HeckeElement | IntMatrix2, x):
    """sum coeff * n^(k/2) (cx+d)^(-k) f((ax+b)/(cx+d))."""
    if isinstance(h, IntMatrix2):
        h = HeckeElement.of([h])
    x, k = to_mp(x), to_mp(k)
    scale = mp.power(h.n, k / 2)
    total = 0
    for coeff, m in h.terms:
        den = m.c * x + m.d
        if den == 0:
            raise PoleError(f"{m} sends {x} to infinity")
        image = (m.a * x + m.b) / den
        if on_cut(image):
            raise DomainError(f"{m} sends {x} onto the cut")
        total += mp.mpf(coeff.numerator) / coeff.denominator * mp.power(den, -k) * f(image)
    return scale * total


@evaluates
def eigen_residual_F1(n: int, x):
    x = to_mp(x)
    if mp.im(x) != 0 or x <= 0:
        raise DomainError("eigen_residual_F1 needs real x > 0")
    lhs = slash(F1, 1, hecke_hat(n), x)
    return abs(lhs - mp.sqrt(n) * divisor_count(n) * F1(x))


@evaluates
def eigen_residual_psi(n: int, s, x):
    from .eisenperiod import psi_plus

    s, x = to_mp(s), to_mp(x)
    if mp.im(x) != 0 or x <= 0:
        raise DomainError("eigen_residual_psi needs real x > 0")
    if s in (mp.mpf(1) / 2, 1):
        raise DomainError("s = 1/2 and s = 1 are excluded")
    lhs = slash(lambda z: psi_plus(s, z), 2 * s, hecke_hat(n), x)
    return abs(lhs - mp.power(n, s) * divisor_sigma(1 - 2 * s, n) * psi_plus(s, x))


def _cot_pi(x):
    """cot(pi x), zero at integers."""
    if isinstance(x, (int, Fraction)):
        if Fraction(x).denominator == 1:
            return mp.mpf(0)
    x = to_mp(x)
    if mp.isint(x):
        return mp.mpf(0)
    return mp.cot(mp.pi * x)


@evaluates
def script_C(x, y):
    """cot(pi x) cot(pi y) + 1 with cot(pi n) read as 0 at integers n."""
    return _cot_pi(x) * _cot_pi(y) + 1


def _sgn(v: int) -> int:
    return (v > 0) - (v < 0)


def c_hom(m: IntMatrix2 | HeckeElement) -> Fraction | int:
    """Integer-valued homomorphism on matrices, extended linearly to formal sums."""
    if isinstance(m, HeckeElement):
        total = sum((coeff * c_hom(mat) for coeff, mat in m.terms), Fraction(0))
        return int(total) if total.denominator == 1 else total
    a, b, c, d = m.a, m.b, m.c, m.d
    if a + b == 0 and c + d == 0:
        raise DomainError("c_hom is undefined when a+b = 0 and c+d = 0")
    if c + d == 0:
        return 1 - _sgn(a + b) * _sgn(d)
    if a + b == 0:
        return 1 - _sgn(b) * _sgn(c + d)
    return 1 - _sgn(a + b) * _sgn(c + d)


def _near_integer(v, tol) -> bool:
    return abs(v - mp.nint(v)) < tol


@evaluates
def cot_identity_residual(n: int, x, y, pole_tol="1e-3"):
    """|sum_M C(ax+by, cx+dy) - sum_{l|n} l C(lx, ly) - c(M)| over M in hecke_hat(n).

    Arguments within ``pole_tol`` of an integer raise PoleError: there the
    identity degenerates (an exact integer hit is not covered by it).
    """
    x, y = to_mp(x), to_mp(y)
    tol = to_mp(pole_tol)
    h = hecke_hat(n)
    if n == 1:
        return mp.mpf(0)
    args = [(m.a * x + m.b * y, m.c * x + m.d * y) for m in h.matrices]
    args += [(l * x, l * y) for l in divisors(n)]
    for u, v in args:
        if _near_integer(u, tol) or _near_integer(v, tol):
            raise PoleError(f"argument within {pole_tol} of a cotangent pole")
    lhs = mp.fsum(script_C(u, v) for u, v in args[: len(h)])
    rhs = mp.fsum(l * script_C(l * x, l * y) for l in divisors(n))
    return abs(lhs - rhs - c_hom(h))
