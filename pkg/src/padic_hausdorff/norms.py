"""Haar integration of radial functions and the norm functionals built on it.

Every quantity is an exact shell sum: a radial function is constant on each
sphere S_k, whose weighted measure is p^(k(n+alpha))(1 - p^-n), and the
constant tail below the window occupies the ball B_(k_min - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, ParameterError
from .padic import ball_measure
from .radial import RadialFunction


def shell_measures(f: RadialFunction, alpha: float = 0.0) -> np.ndarray:
    ks = f.exponents().astype(float)
    p = float(f.p)
    return np.power(p, ks * (f.n + alpha)) * (1.0 - p ** (-f.n))


def tail_measure(f: RadialFunction, alpha: float = 0.0) -> float:
    """Weighted measure of the region below the window (0 when the tail is zero)."""
    if f.tail_value == 0:
        return 0.0
    if f.n + alpha <= 0:
        raise DivergenceError("nonzero tail is not integrable for alpha <= -n", side="low")
    return ball_measure(f.k_min - 1, f.n, f.p, alpha)


def _level_entries(f: RadialFunction, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """(|value|, weighted measure) for every shell and the tail, zeros dropped."""
    vals = np.abs(f.array())
    meas = shell_measures(f, alpha)
    if f.tail_value != 0:
        vals = np.append(vals, abs(f.tail_value))
        meas = np.append(meas, tail_measure(f, alpha))
    keep = vals > 0
    return vals[keep], meas[keep]


def haar_integral(f: RadialFunction, alpha: float = 0.0) -> float:
    """∫ f(x) |x|_p^alpha dx as a shell sum with the tail in closed form."""
    terms = (f.array() * shell_measures(f, alpha)).tolist()
    if f.tail_value != 0:
        terms.append(f.tail_value * tail_measure(f, alpha))
    return math.fsum(terms)


def _scaled_power_sum(vals: np.ndarray, meas: np.ndarray, q: float) -> float:
    # (sum v^q m)^(1/q) computed as M * (sum (v m^(1/q) / M)^q)^(1/q)
    if vals.size == 0:
        return 0.0
    u = vals * np.power(meas, 1.0 / q)
    big = float(u.max())
    if big == 0:
        return 0.0
    return big * math.fsum(((u / big) ** q).tolist()) ** (1.0 / q)


def lebesgue_norm(f: RadialFunction, q: float, alpha: float = 0.0) -> float:
    """(∫ |f|^q |x|^alpha dx)^(1/q)."""
    if q < 1:
        raise ParameterError("need q >= 1")
    vals, meas = _level_entries(f, alpha)
    return _scaled_power_sum(vals, meas, q)


def distribution(f: RadialFunction, lam: float, alpha: float = 0.0) -> float:
    """Weighted measure of {|f| > lam}."""
    if lam < 0:
        raise ParameterError("level must be nonnegative")
    vals = np.abs(f.array())
    meas = shell_measures(f, alpha)
    terms = meas[vals > lam].tolist()
    if abs(f.tail_value) > lam:
        terms.append(tail_measure(f, alpha))
    return math.fsum(terms)


@dataclass(frozen=True)
class StepRearrangement:
    """Decreasing step function: ``values[i]`` on an interval of length ``widths[i]``.

    Values are strictly decreasing and positive; f* vanishes beyond the last step.
    """

    values: tuple[float, ...]
    widths: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(self.widths):
            raise ParameterError("values and widths differ in length")
        if any(b >= a for a, b in zip(self.values, self.values[1:])):
            raise ParameterError("values must be strictly decreasing")
        if any(w <= 0 for w in self.widths):
            raise ParameterError("widths must be positive")

    @property
    def steps(self) -> list[tuple[float, float]]:
        return list(zip(self.values, self.widths))

    def breakpoints(self) -> np.ndarray:
        """Cumulative measures T_1 < T_2 < ... (right endpoints of the steps)."""
        return np.cumsum(np.asarray(self.widths, dtype=float))

    @property
    def total_measure(self) -> float:
        return math.fsum(self.widths)

    def __call__(self, t: float) -> float:
        for v, T in zip(self.values, self.breakpoints()):
            if t < T:
                return v
        return 0.0

    def measure_above(self, lam: float) -> float:
        """|{t > 0 : f*(t) > lam}|."""
        return math.fsum(w for v, w in zip(self.values, self.widths) if v > lam)


def rearrangement(f: RadialFunction, alpha: float = 0.0) -> StepRearrangement:
    """Exact decreasing rearrangement of |f| with respect to |x|^alpha dx."""
    vals, meas = _level_entries(f, alpha)
    grouped: dict[float, list[float]] = {}
    for v, m in zip(vals.tolist(), meas.tolist()):
        grouped.setdefault(v, []).append(m)
    levels = sorted(grouped, reverse=True)
    return StepRearrangement(tuple(levels), tuple(math.fsum(grouped[v]) for v in levels))


def weak_norm(f: RadialFunction, q: float, alpha: float = 0.0) -> float:
    """sup_lam lam * mu_f(lam)^(1/q).

    For a step function the sup is the left limit at one of the finitely many
    values v, where the level set is {|f| >= v}.
    """
    vals, meas = _level_entries(f, alpha)
    if vals.size == 0:
        return 0.0
    levels = np.unique(vals)
    at_least = (vals[None, :] >= levels[:, None]) @ meas
    return float(np.max(levels * np.power(at_least, 1.0 / q)))


def lorentz_norm(f: RadialFunction, q: float, s: float, alpha: float = 0.0) -> float:
    """Lorentz L^{q,s} norm from the rearrangement, with the outer 1/s power.

    On a step [T_(i-1), T_i) the integral (s/q)∫ t^(s/q) f*(t)^s dt/t equals
    v_i^s (T_i^(s/q) - T_(i-1)^(s/q)).
    """
    if q < 1 or s < 1:
        raise ParameterError("need q >= 1 and s >= 1")
    fs = rearrangement(f, alpha)
    if not fs.values:
        return 0.0
    v = np.asarray(fs.values)
    T = fs.breakpoints()
    u = v * np.power(T, 1.0 / q)
    big = float(u.max())
    if s == math.inf:
        return big
    T_prev = np.concatenate(([0.0], T[:-1]))
    with np.errstate(divide="ignore"):
        frac = -np.expm1((s / q) * np.log(T_prev / T))
    terms = (u / big) ** s * frac
    return big * math.fsum(terms.tolist()) ** (1.0 / s)


def lorentz_norm_rows(values: np.ndarray, measures: np.ndarray, q: float, s: float) -> np.ndarray:
    """Lorentz norms of many step functions over the same pieces at once.

    Row i takes the value ``values[i, j]`` on a set of measure ``measures[j]``.
    Equal values need not be merged: the step integrals telescope across ties.
    """
    if q < 1 or s < 1:
        raise ParameterError("need q >= 1 and s >= 1")
    vals = np.abs(np.atleast_2d(np.asarray(values, dtype=float)))
    meas = np.asarray(measures, dtype=float)
    order = np.argsort(-vals, axis=1, kind="stable")
    v = np.take_along_axis(vals, order, axis=1)
    T = np.cumsum(meas[order], axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(v > 0, v * np.power(T, 1.0 / q), 0.0)
    big = u.max(axis=1)
    if s == math.inf:
        return big
    T_prev = np.concatenate((np.zeros((T.shape[0], 1)), T[:, :-1]), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = -np.expm1((s / q) * np.log(T_prev / T))
        scaled = np.where(v > 0, (u / np.where(big > 0, big, 1.0)[:, None]) ** s * frac, 0.0)
    return big * np.sum(scaled, axis=1) ** (1.0 / s)


def _check_morrey(q: float, lam: float) -> None:
    if not 1 <= q < math.inf:
        raise ParameterError("need 1 <= q < inf")
    if not -1.0 / q - 1e-15 <= lam < 0:
        raise ParameterError(f"need -1/q <= lambda < 0, got {lam}")


def _morrey_window(f: RadialFunction) -> range:
    # beyond the window the supremand is monotone and decays away from it
    return range(f.k_min - 2, f.k_max + 3)


def central_morrey_norm(f: RadialFunction, q: float, lam: float) -> float:
    """sup over balls B_gamma of |B_gamma|^(-lam - 1/q) (∫_(B_gamma) |f|^q)^(1/q)."""
    _check_morrey(q, lam)
    p, n = f.p, f.n
    shell_int = np.abs(f.array()) ** q * shell_measures(f, 0.0)
    best = 0.0
    for g in _morrey_window(f):
        upto = min(g, f.k_max) - f.k_min + 1
        terms = shell_int[:max(upto, 0)].tolist()
        if f.tail_value != 0:
            terms.append(abs(f.tail_value) ** q * ball_measure(min(g, f.k_min - 1), n, p))
        local = math.fsum(terms) ** (1.0 / q)
        best = max(best, float(p) ** (-n * g * (lam + 1.0 / q)) * local)
    return best


def _local_weak(vals: np.ndarray, meas: np.ndarray, q: float) -> float:
    if vals.size == 0:
        return 0.0
    order = np.argsort(-vals, kind="stable")
    cum = np.cumsum(meas[order])
    return float(np.max(vals[order] * np.power(cum, 1.0 / q)))


def weak_central_morrey_norm(f: RadialFunction, q: float, lam: float) -> float:
    """sup over balls of |B_gamma|^(-lam - 1/q) times the local weak L^q norm."""
    _check_morrey(q, lam)
    p, n = f.p, f.n
    vals = np.abs(f.array())
    meas = shell_measures(f, 0.0)
    best = 0.0
    for g in _morrey_window(f):
        upto = max(min(g, f.k_max) - f.k_min + 1, 0)
        v, m = vals[:upto], meas[:upto]
        if f.tail_value != 0:
            v = np.append(v, abs(f.tail_value))
            m = np.append(m, ball_measure(min(g, f.k_min - 1), n, p))
        keep = v > 0
        local = _local_weak(v[keep], m[keep], q)
        best = max(best, float(p) ** (-n * g * (lam + 1.0 / q)) * local)
    return best
