"""Monte-Carlo oracle over Q_p^n, independent of the shell-sum code paths.

Points of the ball B_gamma = p^-gamma Z_p^n are drawn with i.i.d. uniform
digits, which realises the normalised Haar measure on the ball up to the
digit depth.  Each coordinate is stored as p^-gamma * u with u an integer in
[0, p^D); a coordinate whose D digits are all zero is treated as lying in the
smallest resolved shell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError
from .padic import PAdicScalar, PVector, _from_integer_window, check_prime, vector_norm_exponent
from .radial import KernelSpec, RadialFunction, RadialSymbol

CHUNK = 1 << 14


@dataclass(frozen=True)
class SampleConfig:
    ball_exponent: int = 0
    digit_depth: int = 24
    sample_count: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.digit_depth < 8:
            raise ParameterError("digit depth must be >= 8")
        if self.sample_count < 1:
            raise ParameterError("need at least one sample")


@dataclass(frozen=True)
class BallSample:
    p: int
    n: int
    gamma: int
    depth: int
    units: np.ndarray  # shape (N, n), coordinate i = p^-gamma * units[:, i]

    def __len__(self):
        return self.units.shape[0]

    def coordinate_valuations(self) -> np.ndarray:
        """p-adic valuation of each unit (depth for an all-zero digit window)."""
        cur = self.units.copy()
        v = np.zeros(cur.shape, dtype=np.int64)
        alive = cur != 0
        for _ in range(self.depth):
            div = alive & (cur % self.p == 0)
            if not div.any():
                break
            v += div
            cur = np.where(div, cur // self.p, cur)
            alive = div
        v[self.units == 0] = self.depth
        return v

    def norm_exponents(self) -> np.ndarray:
        """k with |x|_p = p^k for every sample."""
        return self.gamma - self.coordinate_valuations().min(axis=1)

    def point(self, i: int) -> PVector:
        comps = []
        for u in self.units[i].tolist():
            comps.append(_from_integer_window(self.p, -self.gamma, int(u), self.depth))
        return PVector(tuple(comps))

    def shifted(self, a: PVector) -> "BallSample":
        """The sample translated by a; requires |a|_p <= p^gamma."""
        if a.dim != self.n or a.prime != self.p:
            raise ParameterError("shift lives in another space")
        if vector_norm_exponent(a) > self.gamma:
            raise ParameterError("shift must lie inside the sampled ball")
        mod = self.p**self.depth
        shift = np.array([_unit_at_scale(c, self.gamma, self.depth) for c in a.components],
                         dtype=np.int64)
        return BallSample(self.p, self.n, self.gamma, self.depth, (self.units + shift) % mod)


def _unit_at_scale(c: PAdicScalar, gamma: int, depth: int) -> int:
    if c.is_zero:
        return 0
    offset = c.valuation + gamma
    return (c.unit_integer() * c.prime**offset) % c.prime**depth


def sample_ball(cfg: SampleConfig, p: int, n: int) -> BallSample:
    """cfg.sample_count uniform points of B_gamma, drawn chunk by chunk.

    Each chunk has its own child seed, so the sequence does not depend on how
    chunks are later distributed over workers.
    """
    check_prime(p)
    if p**cfg.digit_depth >= 2**62:
        raise ParameterError("p^depth must fit in 62 bits; lower the digit depth")
    seqs = np.random.SeedSequence(cfg.seed).spawn(math.ceil(cfg.sample_count / CHUNK))
    parts = []
    left = cfg.sample_count
    for ss in seqs:
        m = min(CHUNK, left)
        parts.append(np.random.default_rng(ss).integers(0, p**cfg.digit_depth, size=(m, n)))
        left -= m
    return BallSample(p, n, cfg.ball_exponent, cfg.digit_depth, np.concatenate(parts))


def sample_shell(k: int, count: int, p: int, n: int, depth: int = 24, seed=0) -> BallSample:
    """Uniform points of the sphere S_k (rejection from B_k)."""
    rng = np.random.default_rng(seed)
    out = []
    have = 0
    while have < count:
        units = rng.integers(0, p**depth, size=(2 * count, n))
        lead = (units % p != 0).any(axis=1)
        out.append(units[lead])
        have += int(lead.sum())
    return BallSample(p, n, k, depth, np.concatenate(out)[:count])


def radial_integrand(f: RadialFunction) -> Callable[[BallSample], np.ndarray]:
    def F(sample: BallSample) -> np.ndarray:
        ks = sample.norm_exponents()
        return np.array([f.eval_shell(int(k)) for k in range(ks.min(), ks.max() + 1)])[ks - ks.min()]
    return F


def pointwise(func: Callable[[PVector], float]) -> Callable[[BallSample], np.ndarray]:
    """Lift a black-box function of one PVector to a batch integrand."""
    def F(sample: BallSample) -> np.ndarray:
        return np.array([func(sample.point(i)) for i in range(len(sample))], dtype=float)
    return F


def _mean_and_error(values: np.ndarray, volume: float) -> tuple[float, float]:
    n = values.size
    mean = float(values.mean())
    se = float(values.std(ddof=1)) / math.sqrt(n) if n > 1 else math.inf
    return mean * volume, se * volume


def mc_integral(F: Callable[[BallSample], np.ndarray], cfg: SampleConfig, p: int, n: int,
                alpha: float = 0.0) -> tuple[float, float]:
    """Estimate of ∫_(B_gamma) F(x) |x|_p^alpha dx and its standard error."""
    sample = sample_ball(cfg, p, n)
    weights = np.power(float(p), alpha * sample.norm_exponents())
    volume = float(p) ** (n * cfg.ball_exponent)
    return _mean_and_error(np.asarray(F(sample), dtype=float) * weights, volume)


@dataclass(frozen=True)
class ShiftReport:
    estimate: float
    shifted_estimate: float
    stderr: float
    z: float


def check_shift_invariance(F: Callable[[BallSample], np.ndarray], a: PVector,
                           cfg: SampleConfig) -> ShiftReport:
    """Compare ∫ F(x) dx with ∫ F(x + a) dx on the same sample points.

    The z-score uses the paired differences; identical integrands give z = 0.
    """
    sample = sample_ball(cfg, a.prime, a.dim)
    volume = float(a.prime) ** (a.dim * cfg.ball_exponent)
    base = np.asarray(F(sample), dtype=float)
    moved = np.asarray(F(sample.shifted(a)), dtype=float)
    est, _ = _mean_and_error(base, volume)
    est_shift, _ = _mean_and_error(moved, volume)
    _, se = _mean_and_error(moved - base, volume)
    diff = est_shift - est
    z = 0.0 if se == 0 and diff == 0 else diff / se if se > 0 else math.inf
    return ShiftReport(est, est_shift, se, z)


def ball_indicator(center: PVector, radius_exponent: int) -> Callable[[BallSample], np.ndarray]:
    """Indicator of the ball B_r(center), a non-radial test integrand."""
    neg = PVector(tuple(-c for c in center.components))

    def F(sample: BallSample) -> np.ndarray:
        moved = sample.shifted(neg)
        return (moved.norm_exponents() <= radius_exponent).astype(float)
    return F


def random_point(p: int, n: int, k: int, depth: int = 24, seed=0, exact_norm: bool = True) -> PVector:
    """One random point with |x|_p = p^k (or in B_k when exact_norm is False)."""
    if exact_norm:
        s = sample_shell(k, 1, p, n, depth, seed)
    else:
        s = sample_ball(SampleConfig(k, depth, 1, seed), p, n)
    return s.point(0)


def mc_hausdorff_point(psi: KernelSpec, beta: float, f: RadialFunction, x: PVector,
                       cfg: SampleConfig) -> tuple[float, float]:
    """Estimate H_{Φ,β} f(x) = ∫ Φ(x |y|_p) |y|_p^(β-n) f(y) dy by sampling y.

    Φ(x |y|_p) multiplies the vector x by the rational |y|_p = p^k, which moves
    its norm to p^(e - k); the scaling is done in p-adic arithmetic.
    """
    if f.tail_value != 0:
        raise ParameterError("oracle needs a finitely supported f")
    if cfg.ball_exponent < f.k_max:
        raise ParameterError("sampled ball must contain the support of f")
    p, n = f.p, f.n
    sample = sample_ball(cfg, p, n)
    ks = sample.norm_exponents()
    table = {}
    for k in np.unique(ks).tolist():
        scaled = vector_norm_exponent(x.scaled(int(k)))
        table[k] = (psi.value(scaled, p) * float(p) ** (k * (beta - n)) * f.eval_shell(int(k))
                    if scaled != -math.inf else 0.0)
    vals = np.array([table[k] for k in ks.tolist()])
    return _mean_and_error(vals, float(p) ** (n * cfg.ball_exponent))


def sample_lipschitz_ratios(b: RadialSymbol, delta: float, pairs: int = 10_000,
                            seed=0, depth: int = 16) -> np.ndarray:
    """|b(x+h) - b(x)| / |h|^delta for random pairs with norms in the stored window.

    Both |x| and |h| are drawn uniformly from the exponents k_min-1 .. k_max+1,
    then the points uniformly from the chosen spheres.
    """
    rng = np.random.default_rng(seed)
    p, n = b.p, b.n
    lo, hi = b.k_min - 1, b.k_max + 1
    ex = rng.integers(lo, hi + 1, size=pairs)
    eh = rng.integers(lo, hi + 1, size=pairs)
    ratios = np.empty(pairs)
    for i in range(pairs):
        sx = int(rng.integers(0, 2**62))
        sh = int(rng.integers(0, 2**62))
        x = random_point(p, n, int(ex[i]), depth, sx)
        h = random_point(p, n, int(eh[i]), depth, sh)
        ratios[i] = abs(b(x + h) - b(x)) / h.norm() ** delta
    return ratios
