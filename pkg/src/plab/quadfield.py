"""Exact real quadratic irrationals, reduced numbers and negative continued fractions.

A reduced number w satisfies w > 1 > w' > 0 with w' its Galois conjugate.
Its negative continued fraction w = b1 - 1/(b2 - 1/(...)) is purely periodic;
the period ((b1, ..., br)) and its rotations describe a narrow ideal class.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath as mp

from .context import evaluates
from .errors import DegenerateError, DomainError, LimitError


def squarefree_split(n: int) -> tuple[int, int]:
    """Return (f, m) with n = f^2 * m and m squarefree (n >= 1)."""
    if n < 1:
        raise DomainError("squarefree_split needs n >= 1")
    f, m, p = 1, n, 2
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            f *= p
        p += 1
    return f, m


def _rat(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    raise TypeError(f"not an exact rational: {v!r}")


@dataclass(frozen=True)
class QuadIrr:
    """The number r + t*sqrt(d), with d stored squarefree."""

    d: int
    r: Fraction
    t: Fraction

    def __post_init__(self):
        d, r, t = int(self.d), _rat(self.r), _rat(self.t)
        if d < 2 or isqrt(d) ** 2 == d:
            raise DomainError(f"d = {d} must be a positive non-square")
        if t == 0:
            raise DomainError("t must be nonzero (the value would be rational)")
        f, m = squarefree_split(d)
        object.__setattr__(self, "d", m)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "t", t * f)

    # --- construction and display -------------------------------------
    _LITERAL = re.compile(
        r"^\s*(?:([+-]?\d+(?:/\d+)?)\s*(?=[+-]))?([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?sqrt\(\s*(\d+)\s*\)\s*$"
    )

    @classmethod
    def parse(cls, text: str) -> "QuadIrr":
        """Parse "a+b*sqrt(d)" with rational a, b (p/q allowed); a and b may be omitted."""
        m = cls._LITERAL.match(text)
        if not m:
            raise ValueError(f"cannot parse quadratic irrational {text!r}; expected a+b*sqrt(d)")
        a, sign, b, d = m.groups()
        t = Fraction(b) if b else Fraction(1)
        return cls(int(d), Fraction(a) if a else Fraction(0), -t if sign == "-" else t)

    def __str__(self):
        sign = "+" if self.t > 0 else "-"
        return f"{self.r}{sign}{abs(self.t)}*sqrt({self.d})"

    def pretty(self) -> str:
        """Common-denominator form such as (3+√3)/2."""
        den = self.r.denominator * self.t.denominator // _gcd(self.r.denominator, self.t.denominator)
        a, b = self.r * den, self.t * den
        sign = "+" if b > 0 else "-"
        coeff = "" if abs(b) == 1 else str(abs(b))
        body = f"{a}{sign}{coeff}√{self.d}" if a else f"{'-' if b < 0 else ''}{coeff}√{self.d}"
        return body if den == 1 else f"({body})/{den}"

    def to_mp(self):
        return mp.mpf(self.r.numerator) / self.r.denominator + (
            mp.mpf(self.t.numerator) / self.t.denominator
        ) * mp.sqrt(self.d)

    def __float__(self):
        return float(self.r) + float(self.t) * self.d**0.5

    # --- field arithmetic ------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadIrr):
            if other.d != self.d:
                raise DomainError("quadratic irrationals from different fields")
            return other.r, other.t
        return _rat(other), Fraction(0)

    @staticmethod
    def _make(d, r, t):
        return QuadIrr(d, r, t) if t else r

    def __add__(self, other):
        r, t = self._coerce(other)
        return self._make(self.d, self.r + r, self.t + t)

    __radd__ = __add__

    def __neg__(self):
        return QuadIrr(self.d, -self.r, -self.t)

    def __sub__(self, other):
        r, t = self._coerce(other)
        return self._make(self.d, self.r - r, self.t - t)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        r, t = self._coerce(other)
        return self._make(self.d, self.r * r + self.t * t * self.d, self.r * t + self.t * r)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.r * self.r - self.t * self.t * self.d

    def trace(self) -> Fraction:
        return 2 * self.r

    def inverse(self) -> "QuadIrr":
        n = self.norm()
        return QuadIrr(self.d, self.r / n, -self.t / n)

    def __truediv__(self, other):
        if isinstance(other, QuadIrr):
            return self * other.inverse()
        return QuadIrr(self.d, self.r / _rat(other), self.t / _rat(other))

    def __rtruediv__(self, other):
        return self.inverse() * other

    # --- exact order -----------------------------------------------------
    def sign(self) -> int:
        """Sign of r + t*sqrt(d), never zero since the value is irrational."""
        if self.r >= 0 and self.t > 0:
            return 1
        if self.r <= 0 and self.t < 0:
            return -1
        # opposite signs: compare r^2 with t^2 d
        big_r = self.r * self.r > self.t * self.t * self.d
        return (1 if self.r > 0 else -1) if big_r else (1 if self.t > 0 else -1)

    def _cmp(self, other) -> int:
        diff = self - other
        if isinstance(diff, Fraction):
            return (diff > 0) - (diff < 0)
        return diff.sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def floor(self) -> int:
        den = self.r.denominator * self.t.denominator
        A = int(self.r * den)
        B = int(self.t * den)
        s = isqrt(B * B * self.d)
        fb = s if B > 0 else -s - 1  # floor(B*sqrt(d)); B*sqrt(d) is irrational
        return (A + fb) // den

    def ceil(self) -> int:
        return self.floor() + 1


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def conjugate(w: QuadIrr) -> QuadIrr:
    return QuadIrr(w.d, w.r, -w.t)


def is_reduced(w: QuadIrr) -> bool:
    wc = conjugate(w)
    return w > 1 and wc < 1 and wc > 0


@dataclass(frozen=True)
class Cycle:
    entries: tuple[int, ...]

    def __post_init__(self):
        e = tuple(int(b) for b in self.entries)
        if not e:
            raise DomainError("a cycle needs at least one entry")
        if any(b < 2 for b in e):
            raise DomainError("cycle entries must be >= 2")
        if all(b == 2 for b in e):
            raise DegenerateError("a cycle of 2's has the rational fixed point 1")
        object.__setattr__(self, "entries", e)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def rotate(self, k: int) -> "Cycle":
        k %= len(self.entries)
        return Cycle(self.entries[k:] + self.entries[:k])

    def __str__(self):
        return ",".join(map(str, self.entries))

    @classmethod
    def parse(cls, text: str) -> "Cycle":
        try:
            return cls(tuple(int(tok) for tok in text.split(",") if tok.strip()))
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise ValueError(f"cannot parse cycle {text!r}") from exc


def parse_cycles(text: str) -> list[Cycle]:
    """Parse "4;2,3" into [Cycle((4,)), Cycle((2, 3))]."""
    return [Cycle.parse(part) for part in text.split(";") if part.strip()]


def neg_cf_step(w: QuadIrr) -> tuple[int, QuadIrr]:
    """One step b = ceil(w), w -> 1/(b - w)."""
    b = w.ceil()
    return b, 1 / (b - w)


def neg_cf_expand(w: QuadIrr, max_period: int = 10_000) -> Cycle:
    if not is_reduced(w):
        raise DomainError(f"{w} is not reduced")
    entries = []
    cur = w
    for _ in range(max_period):
        b, cur = neg_cf_step(cur)
        entries.append(b)
        if cur == w:
            return Cycle(tuple(entries))
    raise LimitError(f"period of {w} exceeds {max_period}")


def _word_matrix(entries):
    a, b, c, d = 1, 0, 0, 1
    for e in entries:
        # right-multiply by [[e, -1], [1, 0]]
        a, b, c, d = a * e + b, -a, c * e + d, -c
    return a, b, c, d


def cycle_to_reduced(cycle: Cycle, d: int) -> list[QuadIrr]:
    """Reduced numbers attached to each rotation of ``cycle`` (in rotation order)."""
    if not isinstance(cycle, Cycle):
        cycle = Cycle(tuple(cycle))
    _, kernel = squarefree_split(int(d))
    out = []
    for k in range(len(cycle)):
        a, b, c, dd = _word_matrix(cycle.rotate(k).entries)
        disc = (a + dd) ** 2 - 4  # trace^2 - 4 det, det = 1
        if disc <= 0 or isqrt(disc) ** 2 == disc:
            raise DegenerateError(f"cycle {cycle} has a rational fixed point")
        f, m = squarefree_split(disc)
        if m != kernel:
            raise DomainError(f"cycle {cycle} lives in Q(sqrt({m})), not Q(sqrt({kernel}))")
        # c w^2 + (dd - a) w - b = 0, larger root
        w = QuadIrr(m, Fraction(a - dd, 2 * c), Fraction(f, 2 * c))
        if not is_reduced(w):
            raise DomainError(f"fixed point {w} of cycle {cycle} is not reduced")
        out.append(w)
    return out


@evaluates
def Qk_form(w: QuadIrr, p: int, q: int):
    """(q + p w)(q + p w') / (w - w')."""
    if w.t <= 0:
        raise DomainError("Qk_form needs w > w' (t > 0)")
    num = q * q + p * q * w.trace() + p * p * w.norm()
    return (mp.mpf(num.numerator) / num.denominator) / (
        2 * (mp.mpf(w.t.numerator) / w.t.denominator) * mp.sqrt(w.d)
    )
