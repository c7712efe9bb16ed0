"""Exact integer and rational arithmetic.

Everything here works on plain Python ints. The supported input range is
declared up front (``MAX_MODULUS``, ``MAX_T``) so that downstream fixed-width
code (numpy index arithmetic, int64 serialisation) never overflows silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

MAX_MODULUS = 1 << 20  # r must be strictly below this
MAX_T = 24
INT64_MAX = (1 << 63) - 1


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(OverflowError):
    """A value exceeds the declared supported integer range."""


def stein_gcd(a: int, b: int) -> int:
    """Binary GCD using only shifts, subtraction and parity tests.

    ``stein_gcd(0, 0)`` is 0.
    """
    if a < 0 or b < 0:
        raise DomainError("stein_gcd expects non-negative integers")
    if a == 0:
        return b
    if b == 0:
        return a
    shift = 0
    while not (a | b) & 1:
        a >>= 1
        b >>= 1
        shift += 1
    while not a & 1:
        a >>= 1
    while b:
        while not b & 1:
            b >>= 1
        if a > b:
            a, b = b, a
        b -= a
    return a << shift


@dataclass(frozen=True)
class Rational:
    """Non-negative fraction ``num/den``. Not reduced unless built that way."""

    num: int
    den: int

    def __post_init__(self):
        if self.den <= 0:
            raise DomainError(f"denominator must be positive, got {self.den}")
        if self.num < 0:
            raise DomainError(f"numerator must be non-negative, got {self.num}")

    @property
    def is_reduced(self) -> bool:
        return stein_gcd(self.num, self.den) == 1

    def reduced(self) -> Rational:
        return reduce_fraction(self.num, self.den)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        return self.num / self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def reduce_fraction(p: int, q: int) -> Rational:
    """Reduce ``p/q`` to lowest terms with Stein's algorithm."""
    if q <= 0:
        raise DomainError(f"cannot reduce a fraction with denominator {q}")
    if p == 0:
        return Rational(0, 1)
    g = stein_gcd(p, q)
    return Rational(p // g, q // g)


def lcm(x: int, r: int) -> int:
    """Least common multiple; raises RangeError past the int64 range."""
    if x < 1 or r < 1:
        raise DomainError("lcm expects positive integers")
    value = x // stein_gcd(x, r) * r
    if value > INT64_MAX:
        raise RangeError(f"lcm({x}, {r}) exceeds the supported 64-bit range")
    return value


def bit_width(r: int) -> int:
    """``ceil(log2 r)``, floored at 1 so that a work register is never empty."""
    return max(1, (r - 1).bit_length())


def ceil_log2(value: Fraction | int) -> int:
    """Smallest k >= 0 with ``2**k >= value`` for a positive rational."""
    value = Fraction(value)
    if value <= 0:
        raise DomainError("ceil_log2 needs a positive argument")
    k = 0
    if value <= 1:
        return 0
    while (1 << k) < value:
        k += 1
    return k


def precompute_multiples(x: int, r: int, t: int) -> list[int]:
    """Addends ``(2**j * x) mod r`` for ``j < t`` by iterated modular doubling."""
    if r < 2:
        raise DomainError("modulus must be at least 2")
    if t < 1:
        raise DomainError("need at least one control qubit")
    out = []
    c = x % r
    for _ in range(t):
        out.append(c)
        c = c + c
        if c >= r:
            c -= r
    return out


def cf_convergents(b: Rational, den_bound: int) -> list[Rational]:
    """Continued-fraction convergents of ``b`` with denominator <= ``den_bound``.

    Returned in order of increasing denominator, each in lowest terms.
    """
    if not 0 <= b.num < b.den:
        raise DomainError("cf_convergents expects 0 <= b < 1")
    if den_bound < 1:
        raise DomainError("den_bound must be positive")
    num, den = b.num, b.den
    # h/k recurrences seeded with h_{-1}/k_{-1} = 1/0 and h_{-2}/k_{-2} = 0/1
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    out: list[Rational] = []
    while den:
        a, rem = divmod(num, den)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if k > den_bound:
            break
        out.append(Rational(h, k))
        num, den = den, rem
    return out


@dataclass(frozen=True)
class ProblemInstance:
    """The input pair and the quantities the algorithm is built around.

    ``x`` is kept as given; ``addend`` is ``x mod r``, the value the
    modular-addition unitary actually adds.
    """

    x: int
    r: int
    addend: int = field(init=False)
    L: int = field(init=False)
    N: int = field(init=False)
    P: int = field(init=False)
    k: int = field(init=False)

    def __post_init__(self):
        if self.x < 1 or self.r < 1:
            raise DomainError("x and r must be positive integers")
        if self.r >= MAX_MODULUS:
            raise RangeError(f"r must be below 2**20, got {self.r}")
        g = stein_gcd(self.x, self.r)
        P = lcm(self.x, self.r)
        object.__setattr__(self, "addend", self.x % self.r)
        object.__setattr__(self, "L", bit_width(self.r))
        object.__setattr__(self, "N", self.r // g)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "k", P // self.r)

    @property
    def gcd(self) -> int:
        return self.r // self.N

    @property
    def trivial(self) -> bool:
        """True when r divides x, so the orbit is a single point."""
        return self.addend == 0
