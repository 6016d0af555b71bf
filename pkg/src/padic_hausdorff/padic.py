"""Truncated p-adic scalars and vectors, origin-centred balls and spheres.

A nonzero scalar is stored in canonical form ``p**valuation * sum(d_k p**k)``
with a finite digit window; ``digits[0]`` is never zero.  Only the leading
digit matters for norms, so the window just has to be long enough for the
arithmetic the caller performs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DivergenceError, ParameterError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


def check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ParameterError(f"p must be a prime, got {p!r}")


def int_valuation(m: int, p: int) -> int:
    """Exponent of the largest power of p dividing the nonzero integer m."""
    if m == 0:
        raise ValueError("valuation of 0 is infinite")
    m = abs(m)
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@dataclass(frozen=True)
class PAdicScalar:
    prime: int
    valuation: int | None
    digits: tuple[int, ...] = ()

    def __post_init__(self):
        if self.valuation is None:
            if self.digits:
                raise ParameterError("the zero marker carries no digits")
            return
        if not self.digits or self.digits[0] == 0:
            raise ParameterError("leading digit of a nonzero scalar must be nonzero")
        if any(d < 0 or d >= self.prime for d in self.digits):
            raise ParameterError(f"digits must lie in [0, {self.prime - 1}]")

    @classmethod
    def zero(cls, prime: int) -> "PAdicScalar":
        return cls(prime, None, ())

    @property
    def is_zero(self) -> bool:
        return self.valuation is None

    @property
    def depth(self) -> int:
        return len(self.digits)

    @property
    def precision(self) -> float:
        """Absolute precision: the value is known modulo p**precision."""
        if self.is_zero:
            return math.inf
        return self.valuation + self.depth

    def norm(self) -> float:
        if self.is_zero:
            return 0.0
        return float(self.prime) ** (-self.valuation)

    def unit_integer(self) -> int:
        """The digit window read as an integer, least significant digit first."""
        return sum(d * self.prime**i for i, d in enumerate(self.digits))

    def to_fraction(self) -> Fraction:
        """Partial sum of the stored canonical expansion."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit_integer()) * Fraction(self.prime) ** self.valuation

    def __add__(self, other):
        if isinstance(other, PAdicScalar):
            return padic_add(self, other)
        return NotImplemented

    def __neg__(self):
        return padic_neg(self)


def valuation(x: PAdicScalar) -> float | int:
    """Exponent gamma with |x|_p = p**-gamma; infinity for zero."""
    if x.is_zero:
        return math.inf
    return x.valuation


def _from_integer_window(p: int, low: int, value: int, width: int) -> PAdicScalar:
    # value holds digits at exponents low .. low + width - 1
    value %= p**width
    if value == 0:
        return PAdicScalar.zero(p)
    shift = int_valuation(value, p)
    value //= p**shift
    digits = []
    for _ in range(width - shift):
        value, d = divmod(value, p)
        digits.append(d)
    return PAdicScalar(p, low + shift, tuple(digits))


def canonical_expand(rational, p: int, depth: int) -> PAdicScalar:
    """Valuation and first ``depth`` canonical digits of a rational number.

    ``rational`` may be an int, a Fraction or a ``(numerator, denominator)``
    pair.  The truncation error has norm at most ``p**-(valuation + depth)``.
    """
    check_prime(p)
    if depth < 1:
        raise ParameterError("depth must be at least 1")
    if isinstance(rational, tuple):
        rational = Fraction(*rational)
    rational = Fraction(rational)
    if rational == 0:
        return PAdicScalar.zero(p)
    num, den = rational.numerator, rational.denominator
    v = int_valuation(num, p) - int_valuation(den, p)
    num //= p ** int_valuation(num, p)
    den //= p ** int_valuation(den, p)
    digits = []
    r = Fraction(num, den)
    for _ in range(depth):
        # denominators stay prime to p, so r is a p-adic integer at every step
        a = (r.numerator * pow(r.denominator, -1, p)) % p
        digits.append(a)
        r = (r - a) / p
    return PAdicScalar(p, v, tuple(digits))


def padic_neg(x: PAdicScalar) -> PAdicScalar:
    if x.is_zero:
        return x
    return _from_integer_window(x.prime, x.valuation, -x.unit_integer(), x.depth)


def padic_add(x: PAdicScalar, y: PAdicScalar) -> PAdicScalar:
    """Digitwise sum with carries, valid to the common absolute precision.

    A sum that vanishes to that precision comes back as the zero marker.
    """
    if x.prime != y.prime:
        raise ParameterError(f"mismatched primes {x.prime} and {y.prime}")
    if x.is_zero:
        return y
    if y.is_zero:
        return x
    p = x.prime
    low = min(x.valuation, y.valuation)
    top = min(x.precision, y.precision)
    total = (x.unit_integer() * p ** (x.valuation - low)
             + y.unit_integer() * p ** (y.valuation - low))
    return _from_integer_window(p, low, total, top - low)


def scale_by_power(x: PAdicScalar, k: int) -> PAdicScalar:
    """Multiply by the rational p**k (the p-adic norm drops by p**k)."""
    if x.is_zero:
        return x
    return PAdicScalar(x.prime, x.valuation + k, x.digits)


@dataclass(frozen=True)
class PVector:
    components: tuple[PAdicScalar, ...]

    def __post_init__(self):
        if not self.components:
            raise ParameterError("a vector needs at least one component")
        primes = {c.prime for c in self.components}
        if len(primes) != 1:
            raise ParameterError("all components must share one prime")

    @classmethod
    def from_rationals(cls, values: Sequence, p: int, depth: int = 16) -> "PVector":
        return cls(tuple(canonical_expand(v, p, depth) for v in values))

    @property
    def prime(self) -> int:
        return self.components[0].prime

    @property
    def dim(self) -> int:
        return len(self.components)

    def norm(self) -> float:
        return max(c.norm() for c in self.components)

    def __add__(self, other: "PVector") -> "PVector":
        if self.dim != other.dim:
            raise ParameterError("dimension mismatch")
        return PVector(tuple(padic_add(a, b) for a, b in zip(self.components, other.components)))

    def scaled(self, k: int) -> "PVector":
        return PVector(tuple(scale_by_power(c, k) for c in self.components))


def vector_norm_exponent(v: PVector) -> float | int:
    """k with |v|_p = p**k (max over components); -inf for the zero vector."""
    exps = [-c.valuation for c in v.components if not c.is_zero]
    if not exps:
        return -math.inf
    return max(exps)


@dataclass(frozen=True)
class Region:
    kind: str  # "ball" or "sphere", origin-centred
    radius_exponent: int

    def __post_init__(self):
        if self.kind not in ("ball", "sphere"):
            raise ParameterError(f"unknown region kind {self.kind!r}")


def sphere_measure(k: int, n: int, p: int, alpha: float = 0.0) -> float:
    """Weighted measure of S_k: the weight |x|^alpha is constant p**(k alpha) there."""
    return float(p) ** (k * (n + alpha)) * (1.0 - float(p) ** (-n))


def ball_measure(gamma: int, n: int, p: int, alpha: float = 0.0) -> float:
    """Weighted measure of B_gamma, closed form of the sphere series."""
    if n + alpha <= 0:
        raise DivergenceError(f"ball measure diverges for alpha={alpha} <= -n", side="low")
    if alpha == 0:
        return float(p) ** (n * gamma)
    return (float(p) ** (gamma * (n + alpha)) * (1.0 - float(p) ** (-n))
            / (1.0 - float(p) ** (-(n + alpha))))


def measure(region: Region, n: int, p: int, alpha: float = 0.0) -> float:
    check_prime(p)
    if region.kind == "sphere":
        return sphere_measure(region.radius_exponent, n, p, alpha)
    return ball_measure(region.radius_exponent, n, p, alpha)
