"""Randomised end-to-end checks of the weak and strong bounds.

Every trial draws parameters inside the hypotheses of one inequality (draws
that violate them are rejected and the reason is counted), evaluates both
sides exactly with the discrete constants, and records the ratio.  Trials
are seeded from ``(seed, suite, index)`` alone, so reports do not depend on
the number of worker processes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any

import numpy as np

from .constants import (constant_thm3, constant_thm4, constant_thm5, integral_constant_thm3,
                        integral_constant_thm4, integral_constant_thm5, solve_balance)
from .errors import DivergenceError, ParameterError, UnsupportedRepresentationError
from .norms import (central_morrey_norm, lebesgue_norm, lorentz_norm, lorentz_norm_rows,
                    shell_measures, weak_central_morrey_norm,
                    weak_norm)
from .operators import (commutator_apply, hausdorff_apply, majorant_violation, output_window_for,
                        pointwise_majorant)
from .padic import ball_measure
from .params import SpaceParams
from .radial import (KernelSpec, PowerCutoff, RadialFunction, RadialSymbol, Tabulated,
                     TwoSidedPower, kernel_from_dict, lipschitz_seminorm)

SUITES = ("thm3", "thm4", "thm4_strong", "thm5", "thm5_strong")
_SUITE_KEY = {name: i for i, name in enumerate(SUITES)}
MAX_ATTEMPTS = 500


@dataclass(frozen=True)
class SuiteConfig:
    suites: tuple[str, ...] = SUITES
    trials: int = 200
    strong_trials: int = 100
    seed: int = 0
    tol: float = 1e-9
    primes: tuple[int, ...] = (2, 3, 5)
    dims: tuple[int, ...] = (1, 2)
    q_max: float = 4.0
    r_max: float = 8.0
    kernel_families: tuple[str, ...] = ("tabulated", "powercutoff", "twosided")
    margin: float = 0.3
    window_max: int = 8
    enlarge: int = 8
    s_values: tuple[Any, ...] = (1.0, 2.0, "q", 7.0, math.inf)
    stability_tol: float = 0.05
    bits: float = 44.0
    json_path: str | None = None
    csv_path: str | None = None

    def __post_init__(self):
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ParameterError(f"unknown suites {sorted(unknown)}")
        if self.trials < 1 or self.strong_trials < 1:
            raise ParameterError("trial counts must be positive")
        if self.q_max <= 1.2 or self.r_max <= 1:
            raise ParameterError("q_max must exceed 1.2 and r_max 1")
        if not set(self.kernel_families) <= {"tabulated", "powercutoff", "twosided"}:
            raise ParameterError("unknown kernel family")
        if self.enlarge < 2 or self.enlarge % 2:
            raise ParameterError("enlarge must be a positive even shell count")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["s_values"] = [s if isinstance(s, str) else _num(s) for s in self.s_values]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SuiteConfig":
        names = {f.name for f in fields(cls)}
        extra = set(d) - names
        if extra:
            raise ParameterError(f"unknown config keys {sorted(extra)}")
        kw = dict(d)
        for key in ("suites", "primes", "dims", "kernel_families"):
            if key in kw:
                kw[key] = tuple(kw[key])
        if "s_values" in kw:
            kw["s_values"] = tuple(s if s == "q" else float(s) for s in kw["s_values"])
        return cls(**kw)


@dataclass
class TrialRecord:
    suite: str
    index: int
    params: dict
    kernel: dict
    f: dict
    symbol: dict | None = None
    input_shape: str = ""
    symbol_kind: str | None = None
    s: float | None = None
    lhs: float = math.nan
    rhs: float = math.nan
    constant: float | None = None
    integral_constant: float | None = None
    input_norm: float = math.nan
    ratio: float = math.nan
    passed: bool = False
    degenerate: bool = False
    skipped: bool = False
    reason: str = ""
    majorant_ok: bool | None = None
    extra: dict = field(default_factory=dict)
    timing: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        del d["timing"]  # keeps reports byte-identical across runs
        return _jsonable(d)


def _num(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    return _num(obj)


class _Reject(Exception):
    pass


# -- random ingredients -------------------------------------------------------

def _loguniform(rng, lo, hi):
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def _random_kernel(rng, cfg: SuiteConfig, crit_low: float, crit_high: float) -> KernelSpec:
    """Kernel whose moments converge with at least ``cfg.margin`` to spare.

    crit_low/crit_high are the exponents a must exceed (as -crit_low) and b
    must exceed near 0 and infinity respectively.
    """
    family = cfg.kernel_families[int(rng.integers(len(cfg.kernel_families)))]
    scale = _loguniform(rng, 0.5, 2.0)
    if family == "tabulated":
        m = int(rng.integers(1, 5))
        offsets = rng.choice(np.arange(-3, 4), size=m, replace=False)
        return Tabulated({int(j): _loguniform(rng, 0.2, 2.0) for j in offsets}, scale)
    a_min = cfg.margin - crit_low
    a = 0.0 if a_min <= 0 and rng.random() < 0.3 else float(rng.uniform(a_min, a_min + 2.5))
    if family == "powercutoff":
        return PowerCutoff(a, scale)
    b_min = crit_high + cfg.margin
    return TwoSidedPower(a, float(rng.uniform(b_min, b_min + 2.5)), scale)


def _random_input(rng, cfg: SuiteConfig, p: int, n: int,
                  power_exp: float) -> tuple[RadialFunction, RadialFunction, str]:
    """A finitely supported radial f and the same f continued over cfg.enlarge more shells."""
    shape = str(rng.choice(["random", "flat", "shell", "power"], p=[0.5, 0.2, 0.15, 0.15]))
    k_len = 1 if shape == "shell" else int(rng.integers(1, cfg.window_max + 1))
    k0 = int(rng.integers(-4, 5))
    pad = cfg.enlarge // 2
    total = k_len + 2 * pad
    c = _loguniform(rng, 0.1, 10.0)
    ks = np.arange(k0 - pad, k0 + k_len + pad)
    if shape == "random":
        vals = np.exp(rng.uniform(math.log(0.1), math.log(10.0), size=total))
        if rng.random() < 0.25:
            vals *= rng.choice([-1.0, 1.0], size=total)
    elif shape == "power":
        vals = c * np.power(float(p), -power_exp * (ks - k0))
    else:
        vals = np.full(total, c)
    vals = tuple(float(v) for v in vals)
    big = RadialFunction(p, n, k0 - pad, vals)
    base = RadialFunction(p, n, k0, vals[pad:pad + k_len])
    return base, big, shape


def _random_symbol(rng, p: int, n: int, delta: float) -> tuple[RadialSymbol, str]:
    kind = str(rng.choice(["power", "tabulated", "constant"], p=[0.4, 0.45, 0.15]))
    w0 = int(rng.integers(-5, 3))
    w1 = w0 + int(rng.integers(0, 8))
    if kind == "power":
        return RadialSymbol.power(delta, p, n, (w0, w1)), kind
    if kind == "constant":
        return RadialSymbol.constant(float(rng.uniform(-2, 2)), p, n), kind
    b0 = float(rng.uniform(-1, 1))
    vals = tuple(float(v) for v in rng.uniform(-2, 2, size=w1 - w0 + 1))
    return RadialSymbol(p, n, w0, vals, b0, b0), kind


@dataclass
class Trial:
    suite: str
    index: int
    params: SpaceParams
    psi: KernelSpec
    f: RadialFunction
    f_big: RadialFunction
    shape: str
    b: RadialSymbol | None = None
    symbol_kind: str | None = None
    eps: float | None = None


def _pick(rng, seq):
    return seq[int(rng.integers(len(seq)))]


def _draw_thm3(rng, cfg, suite, index) -> Trial:
    p, n = _pick(rng, cfg.primes), _pick(rng, cfg.dims)
    q = 1.0 if rng.random() < 0.15 else float(rng.uniform(1.0, cfg.q_max))
    lam = -1.0 / q if rng.random() < 0.15 else float(rng.uniform(-1.0 / q, 0.0))
    if lam >= -1e-3:
        raise _Reject("lambda too close to 0")
    params = SpaceParams(p, n, q=q, lam=lam, beta=0.0)
    crit = -n * lam
    psi = _random_kernel(rng, cfg, crit, crit)
    f, big, shape = _random_input(rng, cfg, p, n, crit)
    return Trial(suite, index, params, psi, f, big, shape)


def _draw_alpha_gamma(rng, n):
    return float(rng.uniform(-0.9 * n, n)), float(rng.uniform(-0.9 * n, 2.0 * n))


def _strong_eps(q: float) -> float:
    return min((q - 1.0) / 2.0, 0.1)


def _draw_thm4(rng, cfg, suite, index) -> Trial:
    strong = suite.endswith("strong")
    p, n = _pick(rng, cfg.primes), _pick(rng, cfg.dims)
    alpha, gamma = _draw_alpha_gamma(rng, n)
    if not strong and rng.random() < 0.15:
        q = 1.0
    else:
        q = float(rng.uniform(1.05, cfg.q_max))
    beta = 0.0 if rng.random() < 0.2 else float(rng.uniform(0.0, n))
    base = SpaceParams(p, n, q=q, alpha=alpha, gamma=gamma, beta=beta)
    try:
        r = solve_balance("thm4", base, "r")
    except ParameterError as exc:
        raise _Reject(f"balance: {exc}") from None
    if r > cfg.r_max:
        raise _Reject("r beyond sampling range")
    params = base.replace(r=r)
    crit = (n + gamma) / r
    psi = _random_kernel(rng, cfg, crit, crit)
    eps = None
    if strong:
        eps = _strong_eps(q)
        _check_perturbed(psi, params, eps, "thm4")
    f, big, shape = _random_input(rng, cfg, p, n, (n + alpha) / q)
    return Trial(suite, index, params, psi, f, big, shape, eps=eps)


def _draw_thm5(rng, cfg, suite, index) -> Trial:
    strong = suite.endswith("strong")
    p, n = _pick(rng, cfg.primes), _pick(rng, cfg.dims)
    alpha, gamma = _draw_alpha_gamma(rng, n)
    delta = float(rng.uniform(0.05, 0.95))
    q_hi = min(cfg.q_max, n / delta) if strong else cfg.q_max
    if q_hi <= 1.05:
        raise _Reject("no room for q in (1, n/delta)")
    q = float(rng.uniform(1.05, q_hi))
    beta = 0.0 if rng.random() < 0.3 else float(rng.uniform(0.0, n))
    base = SpaceParams(p, n, q=q, alpha=alpha, gamma=gamma, beta=beta, delta=delta)
    try:
        r = solve_balance("thm5", base, "r")
    except ParameterError as exc:
        raise _Reject(f"balance: {exc}") from None
    if r <= q:
        raise _Reject("solved r does not exceed q")
    if r > cfg.r_max:
        raise _Reject("r beyond sampling range")
    params = base.replace(r=r)
    crit = (n + gamma) / r
    psi = _random_kernel(rng, cfg, crit, crit + delta)
    eps = None
    if strong:
        eps = _strong_eps(q)
        if q + eps >= n / delta:
            raise _Reject("q + eps reaches n/delta")
        _check_perturbed(psi, params, eps, "thm5")
    f, big, shape = _random_input(rng, cfg, p, n, (n + alpha) / q)
    b, kind = _random_symbol(rng, p, n, delta)
    return Trial(suite, index, params, psi, f, big, shape, b, kind, eps)


def perturbed_params(params: SpaceParams, eps: float, which: str) -> list[SpaceParams]:
    """The two weak-type endpoints q -/+ eps with r re-solved from the balance."""
    out = []
    for qi in (params.q - eps, params.q + eps):
        base = params.replace(q=qi)
        out.append(base.replace(r=solve_balance(which, base, "r")))
    return out


def _check_perturbed(psi, params, eps, which) -> None:
    try:
        for pi in perturbed_params(params, eps, which):
            if which == "thm4":
                constant_thm4(psi, pi)
            else:
                constant_thm5(psi, 1.0, pi)
    except (ParameterError, DivergenceError) as exc:
        raise _Reject(f"endpoint q±eps: {exc}") from None


_DRAW = {"thm3": _draw_thm3, "thm4": _draw_thm4, "thm4_strong": _draw_thm4,
         "thm5": _draw_thm5, "thm5_strong": _draw_thm5}


def trial_rng(seed: int, suite: str, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(_SUITE_KEY[suite], index)))


def draw_trial(cfg: SuiteConfig, suite: str, index: int) -> tuple[Trial, Counter]:
    """Rejection-sample one admissible trial; also return the rejection reasons."""
    rng = trial_rng(cfg.seed, suite, index)
    rejected: Counter = Counter()
    for _ in range(MAX_ATTEMPTS):
        try:
            return _DRAW[suite](rng, cfg, suite, index), rejected
        except _Reject as exc:
            rejected[_reason_key(str(exc))] += 1
    raise ParameterError(f"{suite}[{index}]: no admissible draw in {MAX_ATTEMPTS} attempts")


def _reason_key(msg: str) -> str:
    # strip the numbers so that reasons aggregate
    return msg.split(":")[0] if msg.startswith(("balance", "endpoint")) else msg


# -- evaluation ---------------------------------------------------------------

def _base_record(t: Trial) -> TrialRecord:
    return TrialRecord(
        suite=t.suite, index=t.index, params=t.params.to_dict(), kernel=t.psi.to_dict(),
        f=t.f.to_dict(), symbol=None if t.b is None else t.b.to_dict(),
        input_shape=t.shape, symbol_kind=t.symbol_kind)


def _critical(t: Trial) -> float:
    pr = t.params
    if t.suite == "thm3":
        return -pr.n * pr.lam
    return (pr.n + pr.gamma) / pr.r


def _output(t: Trial, f: RadialFunction, bits: float) -> RadialFunction:
    window = output_window_for(t.psi, f, _critical(t), bits)
    if t.b is None:
        return hausdorff_apply(t.psi, t.params.beta, f, window)
    return commutator_apply(t.b, t.psi, t.params.beta, f, window)


def _finish(rec: TrialRecord, tol: float) -> TrialRecord:
    if rec.degenerate:
        rec.ratio = 0.0 if rec.rhs == 0 else rec.lhs / rec.rhs
        rec.passed = True
        return rec
    rec.ratio = rec.lhs / rec.rhs if rec.rhs > 0 else (0.0 if rec.lhs == 0 else math.inf)
    rec.passed = bool(rec.ratio <= 1.0 + tol) and rec.majorant_ok is not False
    return rec


def _check_majorant(rec: TrialRecord, t: Trial, out: RadialFunction, which: str,
                    f_norm: float, b_norm: float = 0.0) -> None:
    profile = pointwise_majorant(t.psi, t.params.beta, t.params, which, f_norm, b_norm)
    bad = majorant_violation(out, profile)
    rec.majorant_ok = bad is None
    if bad is not None:
        rec.reason = f"pointwise majorant fails at shell {bad}"


def evaluate_weak(t: Trial, cfg: SuiteConfig) -> TrialRecord:
    """Both sides of the weak-type inequality for one trial."""
    rec = _base_record(t)
    pr = t.params
    out = _output(t, t.f, cfg.bits)
    if t.suite == "thm3":
        f_norm = central_morrey_norm(t.f, pr.q, pr.lam)
        rec.constant = constant_thm3(t.psi, pr)
        rec.integral_constant = integral_constant_thm3(t.psi, pr)
        rec.lhs = weak_central_morrey_norm(out, pr.q, pr.lam)
        which = "thm3"
        if pr.lam == -1.0 / pr.q:
            rec.extra["edge_weak_norm"] = weak_norm(out, pr.q)
            rec.extra["edge_lebesgue_norm"] = lebesgue_norm(t.f, pr.q)
        b_norm = 0.0
    else:
        f_norm = lebesgue_norm(t.f, pr.q, pr.alpha)
        rec.lhs = weak_norm(out, pr.r, pr.gamma)
        if t.b is None:
            which, b_norm = "thm4", 0.0
            rec.constant = constant_thm4(t.psi, pr)
            rec.integral_constant = integral_constant_thm4(t.psi, pr)
        else:
            which = "thm5"
            b_norm = lipschitz_seminorm(t.b, pr.delta)
            rec.extra["b_seminorm"] = b_norm
            rec.constant = constant_thm5(t.psi, b_norm, pr)
            rec.integral_constant = integral_constant_thm5(t.psi, b_norm, pr)
    rec.input_norm = f_norm
    rec.rhs = rec.constant * f_norm
    rec.extra["output_window"] = list(out.window)
    if f_norm == 0 or (which == "thm5" and b_norm == 0):
        rec.degenerate = True
        rec.majorant_ok = None
    else:
        _check_majorant(rec, t, out, which, f_norm, b_norm)
    return _finish(rec, cfg.tol)


def _s_value(s, q: float) -> float:
    return q if s == "q" else float(s)


@dataclass
class InputClass:
    """Shell indicators and flat blocks on a window, plus extra drawn inputs.

    Outputs are linear in the input, so every member's output is a
    combination of the per-shell outputs stored in ``basis``.
    """

    lo: int
    coeffs: np.ndarray       # (members, shells) over [lo, lo + shells)
    labels: list[str]
    basis: np.ndarray        # (shells, output shells + 1); last column is the tail
    in_measure: np.ndarray   # (shells,)
    out_measure: np.ndarray  # (output shells + 1,)

    def ratios(self, q: float, r: float, s: float, mask: np.ndarray) -> tuple[float, str]:
        c = self.coeffs[mask]
        num = lorentz_norm_rows(c @ self.basis, self.out_measure, r, s)
        den = lorentz_norm_rows(c, self.in_measure, q, s)
        with np.errstate(divide="ignore", invalid="ignore"):
            R = np.where(den > 0, num / den, 0.0)
        i = int(np.argmax(R))
        return float(R[i]), np.asarray(self.labels, dtype=object)[mask][i]


def _window_of(*fs: RadialFunction) -> tuple[int, int]:
    return min(f.k_min for f in fs), max(f.k_max for f in fs)


REACH_DECADES = 2.0   # a shell this many decades weaker than the zone is left out
MAX_REACH = 40
BLOCK_REACH = 6


def _reach(psi: KernelSpec, p: int, margin_below: float, margin_above: float) -> tuple[int, int]:
    """How far below / above the symbol's zone an input shell still interacts.

    Tabulated kernels interact within their support.  Power-law kernels
    interact everywhere, but the ratio of a shell at distance d decays like
    p^(-d margin), so shells beyond REACH_DECADES decades are dropped.
    """
    if isinstance(psi, Tabulated):
        j_lo, j_hi = psi.support()
        return max(int(j_hi), 0), max(-int(j_lo), 0)

    def shells(margin):
        return min(MAX_REACH, math.ceil(REACH_DECADES * math.log(10) / (margin * math.log(p))))

    below = 0 if isinstance(psi, PowerCutoff) else shells(margin_below)
    return below, shells(margin_above)


def _class_windows(t: Trial) -> tuple[tuple[int, int], tuple[int, int]]:
    """Base windows for single shells and for blocks of shells."""
    f_lo, f_hi = t.f.window
    if t.b is None:
        return (f_lo, f_hi), (f_lo, f_hi)
    pr = t.params
    crit = _critical(t)
    a, neg_b = t.psi.power_exponents()
    m_below = (-neg_b - crit - pr.delta) if neg_b is not None else 1.0
    m_above = (a + crit + pr.delta) if a is not None else 1.0
    below, above = _reach(t.psi, pr.p, m_below, m_above)
    # the zone where b is not locally constant, including the drop above its window
    z_lo, z_hi = t.b.k_min, t.b.k_max + 1
    shells = (min(f_lo, z_lo - below), max(f_hi, z_hi + above))
    blocks = (min(f_lo, z_lo - min(below, BLOCK_REACH)), max(f_hi, z_hi + min(above, BLOCK_REACH)))
    return shells, blocks


def build_input_class(t: Trial, cfg: SuiteConfig) -> tuple[InputClass, np.ndarray]:
    """The input class on the enlarged windows and the mask of the base class.

    Members are single shells, flat blocks of shells and the drawn inputs.
    The enlarged class widens both base windows by cfg.enlarge // 2 shells
    on each side, so it contains the base class.
    """
    pr = t.params
    p, n = pr.p, pr.n
    (s_lo, s_hi), (bl_lo, bl_hi) = _class_windows(t)
    pad = cfg.enlarge // 2
    lo, hi = min(s_lo, bl_lo) - pad, max(s_hi, bl_hi) + pad
    k = hi - lo + 1
    probe = RadialFunction(p, n, lo, (1.0,) * k)
    win = output_window_for(t.psi, probe, _critical(t), cfg.bits)
    if t.b is not None:
        win = (min(win[0], t.b.k_min), max(win[1], t.b.k_max))
    outs = []
    for j in range(k):
        e = RadialFunction(p, n, lo + j, (1.0,))
        if t.b is None:
            outs.append(hausdorff_apply(t.psi, pr.beta, e, win))
        else:
            outs.append(commutator_apply(t.b, t.psi, pr.beta, e, win))
    o_lo, o_hi = _window_of(*outs)
    outs = [o.with_window(o_lo, o_hi) for o in outs]
    basis = np.array([list(o.values) + [o.tail_value] for o in outs])
    out_shell = shell_measures(outs[0], pr.gamma)
    tail_meas = ball_measure(o_lo - 1, n, p, pr.gamma) if basis[:, -1].any() else 0.0
    out_measure = np.append(out_shell, tail_meas)
    in_measure = shell_measures(probe, pr.alpha)

    coeffs, labels, in_base = [], [], []

    def add(first, last, base):
        c = np.zeros(k)
        c[first - lo:last - lo + 1] = 1.0
        coeffs.append(c)
        labels.append(f"block[{first},{last}]")
        in_base.append(base)

    for m in range(lo, hi + 1):
        if not bl_lo - pad <= m <= bl_hi + pad:
            add(m, m, s_lo <= m <= s_hi)
    for first in range(bl_lo - pad, bl_hi + pad + 1):
        for last in range(first, bl_hi + pad + 1):
            base = bl_lo <= first and last <= bl_hi
            if first == last:
                base = base or s_lo <= first <= s_hi
            add(first, last, base)
    for name, g in (("f", t.f), ("f_enlarged", t.f_big)):
        coeffs.append(np.array([g.eval_shell(lo + j) for j in range(k)]))
        labels.append(name)
        in_base.append(name == "f")
    cls = InputClass(lo, np.array(coeffs), labels, basis, in_measure, out_measure)
    return cls, np.array(in_base)


def evaluate_strong(t: Trial, cfg: SuiteConfig) -> list[TrialRecord]:
    """Lorentz ratios R(s) for the drawn input, and class sups on both windows."""
    pr = t.params
    out = _output(t, t.f, cfg.bits)
    out_big = _output(t, t.f_big, cfg.bits)
    weak_lhs = weak_norm(out, pr.r, pr.gamma)
    cls, base_mask = build_input_class(t, cfg)
    everything = np.ones_like(base_mask)
    degenerate = t.b is not None and lipschitz_seminorm(t.b, pr.delta) == 0
    rows = []
    for s_spec in cfg.s_values:
        s = _s_value(s_spec, pr.q)
        rec = _base_record(t)
        rec.s = s
        rec.extra["s_label"] = s_spec if isinstance(s_spec, str) else _num(float(s_spec))
        rec.extra["eps"] = t.eps
        rec.lhs = lorentz_norm(out, pr.r, s, pr.gamma)
        rec.rhs = rec.input_norm = lorentz_norm(t.f, pr.q, s, pr.alpha)
        big_ratio = lorentz_norm(out_big, pr.r, s, pr.gamma) / lorentz_norm(t.f_big, pr.q, s, pr.alpha)
        rec.extra["ratio_enlarged"] = big_ratio
        sup, arg = cls.ratios(pr.q, pr.r, s, base_mask)
        sup_big, arg_big = cls.ratios(pr.q, pr.r, s, everything)
        rec.extra.update(class_sup=sup, class_argmax=arg,
                         class_sup_enlarged=sup_big, class_argmax_enlarged=arg_big)
        if s == math.inf:
            rec.extra["weak_lhs"] = weak_lhs
        rec.degenerate = degenerate
        rec.ratio = rec.lhs / rec.rhs
        rec.passed = all(math.isfinite(x) for x in (rec.ratio, big_ratio, sup, sup_big))
        rows.append(rec)
    return rows


def run_trial(cfg: SuiteConfig, suite: str, index: int) -> tuple[list[TrialRecord], Counter]:
    start = time.perf_counter()
    trial, rejected = draw_trial(cfg, suite, index)
    try:
        if suite.endswith("strong"):
            recs = evaluate_strong(trial, cfg)
        else:
            recs = [evaluate_weak(trial, cfg)]
    except (DivergenceError, UnsupportedRepresentationError, OverflowError) as exc:
        rec = _base_record(trial)
        rec.skipped, rec.passed, rec.reason = True, False, f"{type(exc).__name__}: {exc}"
        recs = [rec]
    elapsed = time.perf_counter() - start
    for r in recs:
        r.timing = elapsed / len(recs)
    return recs, rejected


def _run_one(job):
    cfg, suite, index = job
    return run_trial(cfg, suite, index)


def _trial_count(cfg: SuiteConfig, suite: str) -> int:
    return cfg.strong_trials if suite.endswith("strong") else cfg.trials


def _summary(suite: str, records: list[TrialRecord], rejected: Counter, cfg: SuiteConfig) -> dict:
    attempts = len({r.index for r in records}) + sum(rejected.values())
    skipped = [r for r in records if r.skipped]
    live = [r for r in records if not r.skipped]
    out = {
        "trials": len({r.index for r in records}),
        "rows": len(records),
        "rejected": dict(sorted(rejected.items())),
        "skipped": len({r.index for r in skipped}),
        "skip_fraction": len({r.index for r in skipped}) / max(attempts, 1),
        "failed": sum(1 for r in live if not r.passed),
        "degenerate": sum(1 for r in live if r.degenerate),
        "majorant_failures": sum(1 for r in live if r.majorant_ok is False),
    }
    nondeg = [r for r in live if not r.degenerate]
    if not suite.endswith("strong"):
        out["max_ratio"] = max((r.ratio for r in nondeg), default=0.0)
        ok = out["failed"] == 0 and out["skip_fraction"] < 0.1
    else:
        per_s = {}
        ok = out["failed"] == 0 and out["skip_fraction"] < 0.1
        labels = []
        for r in nondeg:
            if r.extra["s_label"] not in labels:
                labels.append(r.extra["s_label"])
        for label in labels:
            rows = [r for r in nondeg if r.extra["s_label"] == label]
            m = max(r.extra["class_sup"] for r in rows)
            m_big = max(r.extra["class_sup_enlarged"] for r in rows)
            change = abs(m_big - m) / m if m > 0 else 0.0
            stable = change <= cfg.stability_tol
            ok = ok and stable and math.isfinite(m) and math.isfinite(m_big)
            drawn = max(r.ratio for r in rows)
            drawn_big = max(r.extra["ratio_enlarged"] for r in rows)
            per_s[str(label)] = {"max_ratio": m, "max_ratio_enlarged": m_big,
                                 "relative_change": change, "stable": stable,
                                 "max_drawn_ratio": drawn, "max_drawn_ratio_enlarged": drawn_big}
        out["per_s"] = per_s
        gaps = [abs(r.lhs - r.extra["weak_lhs"]) / r.extra["weak_lhs"]
                for r in live if "weak_lhs" in r.extra and r.extra["weak_lhs"] > 0]
        out["max_weak_coincidence_gap"] = max(gaps, default=0.0)
    out["passed"] = bool(ok)
    return out


@dataclass
class SuiteResult:
    suite: str
    records: list[TrialRecord]
    summary: dict


def run_suites(cfg: SuiteConfig, jobs: int = 1) -> dict[str, SuiteResult]:
    """Run the selected suites; trial order in the result is by index."""
    jobs_list = [(cfg, suite, i) for suite in cfg.suites for i in range(_trial_count(cfg, suite))]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, jobs_list, chunksize=8))
    else:
        results = [_run_one(j) for j in jobs_list]
    by_suite: dict[str, SuiteResult] = {}
    for (_, suite, _), (recs, rejected) in zip(jobs_list, results):
        res = by_suite.setdefault(suite, SuiteResult(suite, [], {"_rejected": Counter()}))
        res.records.extend(recs)
        res.summary["_rejected"].update(rejected)
    for suite, res in by_suite.items():
        res.records.sort(key=lambda r: (r.index, -1.0 if r.s is None else r.s))
        res.summary = _summary(suite, res.records, res.summary["_rejected"], cfg)
    return by_suite


def verify_thm3(cfg: SuiteConfig, jobs: int = 1) -> list[TrialRecord]:
    return run_suites(_only(cfg, "thm3"), jobs)["thm3"].records


def verify_thm4_weak(cfg: SuiteConfig, jobs: int = 1) -> list[TrialRecord]:
    return run_suites(_only(cfg, "thm4"), jobs)["thm4"].records


def verify_thm4_strong(cfg: SuiteConfig, jobs: int = 1) -> list[TrialRecord]:
    return run_suites(_only(cfg, "thm4_strong"), jobs)["thm4_strong"].records


def verify_thm5_weak(cfg: SuiteConfig, jobs: int = 1) -> list[TrialRecord]:
    return run_suites(_only(cfg, "thm5"), jobs)["thm5"].records


def verify_thm5_strong(cfg: SuiteConfig, jobs: int = 1) -> list[TrialRecord]:
    return run_suites(_only(cfg, "thm5_strong"), jobs)["thm5_strong"].records


def _only(cfg: SuiteConfig, suite: str) -> SuiteConfig:
    from dataclasses import replace
    return replace(cfg, suites=(suite,))


def all_passed(results: dict[str, SuiteResult]) -> bool:
    return all(r.summary["passed"] for r in results.values())


# -- reports ------------------------------------------------------------------

def report_json(cfg: SuiteConfig, results: dict[str, SuiteResult]) -> str:
    config = cfg.to_dict()
    # where the report goes is not part of what it reports
    config.pop("json_path")
    config.pop("csv_path")
    doc = {
        "config": config,
        "passed": all_passed(results),
        "suites": {name: {"summary": _jsonable(res.summary),
                          "records": [r.to_dict() for r in res.records]}
                   for name, res in sorted(results.items())},
    }
    return json.dumps(doc, sort_keys=True, indent=1, allow_nan=False) + "\n"


CSV_COLUMNS = ("theorem", "index", "s", "p", "n", "q", "r", "alpha", "gamma", "beta", "delta",
               "lam", "lhs", "rhs", "ratio", "pass", "degenerate", "skipped")


def report_csv(results: dict[str, SuiteResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for name, res in sorted(results.items()):
        for r in res.records:
            pr = r.params
            w.writerow([name, r.index, "" if r.s is None else repr(r.s)]
                       + [repr(pr[k]) for k in ("p", "n", "q", "r", "alpha", "gamma", "beta",
                                                "delta", "lam")]
                       + [repr(r.lhs), repr(r.rhs), repr(r.ratio), int(r.passed),
                          int(r.degenerate), int(r.skipped)])
    return buf.getvalue()


def write_reports(cfg: SuiteConfig, results: dict[str, SuiteResult]) -> None:
    if cfg.json_path:
        with open(cfg.json_path, "w", encoding="utf-8") as fh:
            fh.write(report_json(cfg, results))
    if cfg.csv_path:
        with open(cfg.csv_path, "w", encoding="utf-8") as fh:
            fh.write(report_csv(results))


def kernel_of(record: TrialRecord | dict) -> KernelSpec:
    d = record.kernel if isinstance(record, TrialRecord) else record["kernel"]
    return kernel_from_dict(d)
