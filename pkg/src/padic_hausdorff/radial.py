"""Radial functions, radial kernels and radial Lipschitz symbols on Q_p^n.

A radial function f(x) = g(|x|_p) is stored per shell: ``values[i]`` is
g(p**(k_min + i)).  Below the window the function equals ``tail_value``;
above it the function is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping

import numpy as np

from .errors import DivergenceError, ParameterError, UnsupportedRepresentationError
from .padic import PVector, check_prime, vector_norm_exponent


@dataclass(frozen=True)
class RadialFunction:
    p: int
    n: int
    k_min: int
    values: tuple[float, ...]
    tail_value: float = 0.0

    def __post_init__(self):
        check_prime(self.p)
        if self.n < 1:
            raise ParameterError("dimension n must be >= 1")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.values:
            raise ParameterError("a radial function needs a nonempty window")
        if not all(math.isfinite(v) for v in self.values) or not math.isfinite(self.tail_value):
            raise ParameterError("shell values must be finite")

    @property
    def k_max(self) -> int:
        return self.k_min + len(self.values) - 1

    @property
    def window(self) -> tuple[int, int]:
        return self.k_min, self.k_max

    def eval_shell(self, k: int) -> float:
        if k > self.k_max:
            return 0.0
        if k < self.k_min:
            return self.tail_value
        return self.values[k - self.k_min]

    def __call__(self, x: PVector) -> float:
        k = vector_norm_exponent(x)
        if k == -math.inf:
            return self.tail_value
        return self.eval_shell(k)

    def shells(self) -> Iterator[tuple[int, float]]:
        for i, v in enumerate(self.values):
            yield self.k_min + i, v

    def exponents(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def with_window(self, lo: int, hi: int) -> "RadialFunction":
        """Same function re-stored on [lo, hi]; shells dropped must hold the
        value the new convention would give them anyway, unless truncating."""
        values = tuple(self.eval_shell(k) for k in range(lo, hi + 1))
        tail = self.tail_value if lo <= self.k_min else self.eval_shell(lo - 1)
        return RadialFunction(self.p, self.n, lo, values, tail)

    def restricted_to_ball(self, gamma: int) -> "RadialFunction":
        """f times the indicator of B_gamma."""
        lo = min(self.k_min, gamma)
        values = tuple(self.eval_shell(k) if k <= gamma else 0.0
                       for k in range(lo, max(lo, gamma) + 1))
        return RadialFunction(self.p, self.n, lo, values, self.tail_value)

    def is_zero(self) -> bool:
        return self.tail_value == 0 and not any(self.values)

    def scale(self, c: float) -> "RadialFunction":
        return RadialFunction(self.p, self.n, self.k_min,
                              tuple(c * v for v in self.values), c * self.tail_value)

    def __add__(self, other):
        if isinstance(other, RadialFunction):
            return pointwise_combine(self, other, "add")
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, RadialFunction):
            return pointwise_combine(self, other, "add", -1.0)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, RadialFunction):
            return pointwise_combine(self, other, "mul")
        if isinstance(other, (int, float)):
            return self.scale(float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return self.scale(-1.0)

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "k_min": self.k_min,
                "values": list(self.values), "tail_value": self.tail_value}

    @classmethod
    def from_dict(cls, d: Mapping) -> "RadialFunction":
        return cls(int(d["p"]), int(d["n"]), int(d["k_min"]),
                   tuple(float(v) for v in d["values"]), float(d.get("tail_value", 0.0)))


def indicator_sphere(k: int, p: int, n: int, value: float = 1.0) -> RadialFunction:
    return RadialFunction(p, n, k, (value,))


def indicator_ball(gamma: int, p: int, n: int, value: float = 1.0) -> RadialFunction:
    return RadialFunction(p, n, gamma, (value,), tail_value=value)


def eval_shell(f: RadialFunction, k: int) -> float:
    return f.eval_shell(k)


def pointwise_combine(f: RadialFunction, h: RadialFunction, op: str = "add",
                      scalar: float = 1.0) -> RadialFunction:
    """``f + scalar*h`` for op="add", ``scalar*f*h`` for op="mul", shell-wise."""
    if (f.p, f.n) != (h.p, h.n):
        raise ParameterError("functions live on different spaces")
    lo = min(f.k_min, h.k_min)
    hi = max(f.k_max, h.k_max)
    ks = range(lo, hi + 1)
    if op == "add":
        values = tuple(f.eval_shell(k) + scalar * h.eval_shell(k) for k in ks)
        tail = f.tail_value + scalar * h.tail_value
    elif op == "mul":
        values = tuple(scalar * f.eval_shell(k) * h.eval_shell(k) for k in ks)
        tail = scalar * f.tail_value * h.tail_value
    else:
        raise ParameterError(f"unknown op {op!r}")
    return RadialFunction(f.p, f.n, lo, values, tail)


@dataclass(frozen=True)
class RadialSymbol(RadialFunction):
    """A radial multiplier b: window values, the constant tail below the window,
    the value at the origin (needed for Λ_δ) and the constant value above."""

    value_at_zero: float = 0.0
    top_value: float = 0.0

    @classmethod
    def power(cls, delta: float, p: int, n: int, window: tuple[int, int]) -> "RadialSymbol":
        """|x|_p**delta on the window, zero above it, zero near the origin."""
        lo, hi = window
        values = tuple(float(p) ** (k * delta) for k in range(lo, hi + 1))
        return cls(p, n, lo, values, 0.0, 0.0, 0.0)

    @classmethod
    def constant(cls, c: float, p: int, n: int) -> "RadialSymbol":
        return cls(p, n, 0, (c,), c, c, c)

    def eval_shell(self, k: int) -> float:
        if k > self.k_max:
            return self.top_value
        return super().eval_shell(k)

    def __call__(self, x: PVector) -> float:
        if vector_norm_exponent(x) == -math.inf:
            return self.value_at_zero
        return super().__call__(x)

    def is_constant(self) -> bool:
        c = self.value_at_zero
        return all(v == c for v in (*self.values, self.tail_value, self.top_value))

    def scale(self, c: float) -> "RadialSymbol":
        return RadialSymbol(self.p, self.n, self.k_min, tuple(c * v for v in self.values),
                            c * self.tail_value, c * self.value_at_zero, c * self.top_value)

    def as_function(self) -> RadialFunction:
        if self.top_value != 0:
            raise UnsupportedRepresentationError("symbol is not zero above its window")
        return RadialFunction(self.p, self.n, self.k_min, self.values, self.tail_value)

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["value_at_zero"] = self.value_at_zero
        d["top_value"] = self.top_value
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "RadialSymbol":
        tail = float(d.get("tail_value", 0.0))
        return cls(int(d["p"]), int(d["n"]), int(d["k_min"]),
                   tuple(float(v) for v in d["values"]), tail,
                   float(d.get("value_at_zero", tail)), float(d.get("top_value", 0.0)))


def lipschitz_seminorm(b: RadialSymbol, delta: float) -> float:
    """Λ_δ seminorm of a radial symbol via the ultrametric pair formula.

    For |h| < |x| the increment vanishes; otherwise |x + h| ranges over every
    radius up to |h|, so the seminorm is the sup over j < m (j may be the
    origin) of |b(p^m) - b(p^j)| / p^(m δ).  A tail that differs from b(0)
    makes the ratio blow up near the origin.
    """
    if not 0 < delta <= 1:
        raise ParameterError("delta must lie in (0, 1]")
    if b.tail_value != b.value_at_zero:
        return math.inf
    below = [b.value_at_zero, b.tail_value]
    best = 0.0
    for m in range(b.k_min, b.k_max + 2):
        vm = b.eval_shell(m)
        diff = max(abs(vm - v) for v in below)
        best = max(best, diff / float(b.p) ** (m * delta))
        below.append(vm)
    return best


# -- kernels ---------------------------------------------------------------

def _geometric(p: int, c: float, lo: float, hi: float) -> float:
    """sum_{j=lo}^{hi} p**(c j); infinite bounds allowed when convergent."""
    if lo > hi:
        return 0.0
    if lo == -math.inf and hi == math.inf:
        raise DivergenceError("two-sided geometric series never converges")
    if hi == math.inf:
        if c >= 0:
            raise DivergenceError(f"series sum_(j>={lo}) p^({c} j) diverges", side="high")
        return float(p) ** (c * lo) / -math.expm1(c * math.log(p))
    if lo == -math.inf:
        if c <= 0:
            raise DivergenceError(f"series sum_(j<={hi}) p^({c} j) diverges", side="low")
        return float(p) ** (c * hi) / -math.expm1(-c * math.log(p))
    if c == 0:
        return float(hi - lo + 1)
    return (float(p) ** (c * lo) - float(p) ** (c * (hi + 1))) / -math.expm1(c * math.log(p))


class KernelSpec:
    """Radial kernel ψ, evaluated at the points p**j; values are stored as |ψ|."""

    family: str
    scale: float

    def value(self, j: int, p: int) -> float:
        raise NotImplementedError

    def values(self, js: np.ndarray, p: int) -> np.ndarray:
        return np.array([self.value(int(j), p) for j in js], dtype=float)

    def support(self) -> tuple[float, float]:
        """Smallest and largest j with ψ(p**j) possibly nonzero."""
        raise NotImplementedError

    def shell_sum(self, p: int, s: float, w: float = 1.0,
                  lo: float = -math.inf, hi: float = math.inf) -> float:
        """sum_{lo <= j <= hi} ψ(p**j)**w p**(j s), closed form where analytic."""
        raise NotImplementedError

    def shell_sup(self, p: int, s: float) -> float:
        """sup_j ψ(p**j) p**(j s); the q' = ∞ moment."""
        raise NotImplementedError

    def limit_at_zero(self) -> float | None:
        """ψ(0+) when finite; None when ψ blows up at the origin."""
        raise NotImplementedError

    def power_exponents(self) -> tuple[float | None, float | None]:
        """Exponents of the per-shell power laws below j=0 and above j=0."""
        return None, None

    def scaled(self, c: float) -> "KernelSpec":
        return replace(self, scale=abs(c) * self.scale)

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Tabulated(KernelSpec):
    table: Mapping[int, float] = field(default_factory=dict)
    scale: float = 1.0
    family: str = field(default="tabulated", init=False)

    def __post_init__(self):
        table = {int(j): abs(float(v)) for j, v in dict(self.table).items()}
        if not table:
            raise ParameterError("tabulated kernel needs at least one entry")
        object.__setattr__(self, "table", dict(sorted(table.items())))
        object.__setattr__(self, "scale", abs(float(self.scale)))

    def __hash__(self):
        return hash((tuple(self.table.items()), self.scale))

    def value(self, j, p):
        return self.scale * self.table.get(int(j), 0.0)

    def support(self):
        return min(self.table), max(self.table)

    def shell_sum(self, p, s, w=1.0, lo=-math.inf, hi=math.inf):
        terms = [(self.scale * v) ** w * float(p) ** (j * s)
                 for j, v in self.table.items() if lo <= j <= hi and v]
        return math.fsum(terms)

    def shell_sup(self, p, s):
        return max(self.scale * v * float(p) ** (j * s) for j, v in self.table.items())

    def limit_at_zero(self):
        return 0.0

    def to_dict(self):
        return {"family": "tabulated", "values": {str(j): v for j, v in self.table.items()},
                "scale": self.scale}


@dataclass(frozen=True)
class PowerCutoff(KernelSpec):
    """ψ(t) = scale * t**a on (0, 1], zero beyond."""

    a: float = 0.0
    scale: float = 1.0
    family: str = field(default="powercutoff", init=False)

    def __post_init__(self):
        object.__setattr__(self, "scale", abs(float(self.scale)))

    def value(self, j, p):
        if j > 0:
            return 0.0
        return self.scale * float(p) ** (j * self.a)

    def support(self):
        return -math.inf, 0

    def shell_sum(self, p, s, w=1.0, lo=-math.inf, hi=math.inf):
        if self.scale == 0:
            return 0.0
        return self.scale**w * _geometric(p, w * self.a + s, lo, min(hi, 0))

    def shell_sup(self, p, s):
        if self.a + s < 0:
            raise DivergenceError("sup moment diverges as t -> 0", side="low")
        return self.scale

    def limit_at_zero(self):
        if self.a > 0:
            return 0.0
        if self.a == 0:
            return self.scale
        return None

    def power_exponents(self):
        return self.a, None

    def to_dict(self):
        return {"family": "powercutoff", "a": self.a, "scale": self.scale}


@dataclass(frozen=True)
class TwoSidedPower(KernelSpec):
    """ψ(t) = scale * t**a on (0, 1] and scale * t**-b on (1, ∞)."""

    a: float = 0.0
    b: float = 1.0
    scale: float = 1.0
    family: str = field(default="twosided", init=False)

    def __post_init__(self):
        object.__setattr__(self, "scale", abs(float(self.scale)))

    def value(self, j, p):
        if j > 0:
            return self.scale * float(p) ** (-j * self.b)
        return self.scale * float(p) ** (j * self.a)

    def support(self):
        return -math.inf, math.inf

    def shell_sum(self, p, s, w=1.0, lo=-math.inf, hi=math.inf):
        if self.scale == 0:
            return 0.0
        low = _geometric(p, w * self.a + s, lo, min(hi, 0))
        high = _geometric(p, s - w * self.b, max(lo, 1), hi)
        return self.scale**w * math.fsum([low, high])

    def shell_sup(self, p, s):
        if self.a + s < 0:
            raise DivergenceError("sup moment diverges as t -> 0", side="low")
        if s - self.b > 0:
            raise DivergenceError("sup moment diverges as t -> ∞", side="high")
        return self.scale

    def limit_at_zero(self):
        if self.a > 0:
            return 0.0
        if self.a == 0:
            return self.scale
        return None

    def power_exponents(self):
        return self.a, -self.b

    def to_dict(self):
        return {"family": "twosided", "a": self.a, "b": self.b, "scale": self.scale}


def kernel_eval(psi: KernelSpec, j: int, p: int) -> float:
    return psi.value(j, p)


def kernel_from_dict(d: Mapping) -> KernelSpec:
    family = str(d.get("family", "")).lower()
    scale = float(d.get("scale", 1.0))
    if family == "tabulated":
        return Tabulated({int(j): float(v) for j, v in d["values"].items()}, scale)
    if family == "powercutoff":
        return PowerCutoff(float(d["a"]), scale)
    if family == "twosided":
        return TwoSidedPower(float(d["a"]), float(d["b"]), scale)
    raise ParameterError(f"unknown kernel family {family!r}")


def parse_kernel(text: str) -> KernelSpec:
    """Shorthand ``family:param[,param]``, e.g. ``powercutoff:0``,
    ``twosided:0.5,2`` or ``tabulated:0=1,1=0.5``."""
    family, _, params = text.partition(":")
    family = family.strip().lower()
    parts = [s.strip() for s in params.split(",") if s.strip()]
    try:
        if family == "tabulated":
            table = {}
            for item in parts:
                j, _, v = item.partition("=")
                table[int(j)] = float(v)
            return Tabulated(table)
        if family == "powercutoff":
            return PowerCutoff(float(parts[0]) if parts else 0.0)
        if family == "twosided":
            return TwoSidedPower(float(parts[0]), float(parts[1]))
    except (IndexError, ValueError) as exc:
        raise ParameterError(f"bad kernel shorthand {text!r}") from exc
    raise ParameterError(f"unknown kernel family {family!r}")


def random_radial(p: int, n: int, window: tuple[int, int],
                  value_range: tuple[float, float] = (0.1, 10.0),
                  rng_seed=0, signed: bool = False) -> RadialFunction:
    """Shell values drawn log-uniformly from value_range; deterministic in the seed."""
    lo, hi = window
    if hi < lo:
        raise ParameterError("empty window")
    rng = np.random.default_rng(rng_seed)
    a, b = value_range
    vals = np.exp(rng.uniform(math.log(a), math.log(b), size=hi - lo + 1))
    if signed:
        vals *= rng.choice([-1.0, 1.0], size=vals.size)
    return RadialFunction(p, n, lo, tuple(vals.tolist()))
