"""Kernel moments and the constants of the four weak-type bounds.

The discrete constants (``constant_thm3`` ...) are the exact quantities the
Hölder estimates produce before the shell sum is majorised by an integral;
they make every inequality checkable with no unknown multiplicative constant.
The integral-form constants are reported next to them with C = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivergenceError, ParameterError
from .params import SpaceParams, conjugate
from .radial import KernelSpec, PowerCutoff, Tabulated, TwoSidedPower


@dataclass(frozen=True)
class KernelMoment:
    discrete_sum: float
    continuous_integral: float | None
    s: float
    w: float


def _continuous_part(psi: KernelSpec, s: float, w: float, part: str) -> float | None:
    """∫ ψ(t)^w t^(s-1) dt over (0, 1] ("low") or (1, ∞) ("high")."""
    if isinstance(psi, Tabulated) or w == math.inf:
        return None
    amp = psi.scale**w
    if part == "low":
        e = w * psi.a + s
        if e <= 0:
            raise DivergenceError(f"∫_0^1 t^({e}-1) dt diverges", side="low")
        return amp / e
    if isinstance(psi, PowerCutoff):
        return 0.0
    e = w * psi.b - s
    if e <= 0:
        raise DivergenceError(f"∫_1^∞ t^({-e}-1) dt diverges", side="high")
    return amp / e


def kernel_moment(psi: KernelSpec, p: int, s: float, w: float = 1.0) -> KernelMoment:
    """Discrete sum_j ψ(p^j)^w p^(js) and its integral analogue ∫ ψ^w t^(s-1) dt.

    ``w = inf`` gives the sup moment sup_j ψ(p^j) p^(js) used when q = 1.
    """
    if w < 1:
        raise ParameterError("moment power must be >= 1")
    if w == math.inf:
        return KernelMoment(psi.shell_sup(p, s), None, s, w)
    discrete = psi.shell_sum(p, s, w)
    if isinstance(psi, Tabulated):
        return KernelMoment(discrete, None, s, w)
    low = _continuous_part(psi, s, w, "low")
    high = _continuous_part(psi, s, w, "high")
    return KernelMoment(discrete, low + high, s, w)


def _root_moment(psi: KernelSpec, p: int, s_over_w: float, w: float) -> tuple[float, float | None]:
    """(sum ψ^w p^(j s))^(1/w) with s = w * s_over_w, plus the integral form."""
    if w == math.inf:
        return psi.shell_sup(p, s_over_w), None
    m = kernel_moment(psi, p, w * s_over_w, w)
    cont = None if m.continuous_integral is None else m.continuous_integral ** (1.0 / w)
    return m.discrete_sum ** (1.0 / w), cont


def weak_factor(p: int, n: int, gamma: float, r: float) -> float:
    """((1 - p^-n) / (1 - p^-(n+gamma)))^(1/r): weak L^r norm of |x|^(-(n+gamma)/r)."""
    if n + gamma <= 0:
        raise ParameterError("need n + gamma > 0")
    return ((1.0 - float(p) ** (-n)) / -math.expm1(-(n + gamma) * math.log(p))) ** (1.0 / r)


def _shell_factor(params: SpaceParams) -> float:
    return (1.0 - float(params.p) ** (-params.n)) ** params.inv_q_conj


def constant_thm3(psi: KernelSpec, params: SpaceParams) -> float:
    """(1 - p^-n)^(1/q') sum_j ψ(p^j) p^(-j n lambda)."""
    params.thm3_admissible()
    d1 = kernel_moment(psi, params.p, -params.n * params.lam, 1.0).discrete_sum
    return _shell_factor(params) * d1


def integral_constant_thm3(psi: KernelSpec, params: SpaceParams) -> float | None:
    params.thm3_admissible()
    k1 = kernel_moment(psi, params.p, -params.n * params.lam, 1.0).continuous_integral
    return None if k1 is None else k1 * _shell_factor(params)


def _thm4_exponent(params: SpaceParams) -> float:
    # s / q' = (n + alpha)/q - beta, equal to (n + gamma)/r under the balance
    return (params.n + params.alpha) / params.q - params.beta


def constant_thm4(psi: KernelSpec, params: SpaceParams) -> float:
    """weak factor * (1 - p^-n)^(1/q') * (sum_j ψ(p^j)^q' p^(j s))^(1/q')."""
    params.thm4_admissible()
    d2, _ = _root_moment(psi, params.p, _thm4_exponent(params), params.q_conj)
    return weak_factor(params.p, params.n, params.gamma, params.r) * _shell_factor(params) * d2


def integral_constant_thm4(psi: KernelSpec, params: SpaceParams) -> float | None:
    params.thm4_admissible()
    _, a = _root_moment(psi, params.p, _thm4_exponent(params), params.q_conj)
    if a is None:
        return None
    return weak_factor(params.p, params.n, params.gamma, params.r) * _shell_factor(params) * a


def thm5_moments(psi: KernelSpec, params: SpaceParams) -> tuple[float, float]:
    """Root moments for the two Hölder terms: exponents s1/q' and s1/q' - delta."""
    e1 = _thm4_exponent(params)
    d_1, _ = _root_moment(psi, params.p, e1, params.q_conj)
    d_2, _ = _root_moment(psi, params.p, e1 - params.delta, params.q_conj)
    return d_1, d_2


def constant_thm5(psi: KernelSpec, b_seminorm: float, params: SpaceParams) -> float:
    """weak factor * (1 - p^-n)^(1/q') * (D(s1) + D(s2)) * ||b||."""
    params.thm5_admissible()
    if b_seminorm == 0:
        return 0.0
    d_1, d_2 = thm5_moments(psi, params)
    return (weak_factor(params.p, params.n, params.gamma, params.r) * _shell_factor(params)
            * (d_1 + d_2) * b_seminorm)


def integral_constant_thm5(psi: KernelSpec, b_seminorm: float, params: SpaceParams) -> float | None:
    """K_4 with the combined max(1, t^(-delta q')) integrand and C = 1."""
    params.thm5_admissible()
    w = params.q_conj
    s1 = w * _thm4_exponent(params)
    s2 = s1 - params.delta * w
    low = _continuous_part(psi, s2, w, "low")
    high = _continuous_part(psi, s1, w, "high")
    if low is None:
        return None
    k3 = low + high
    return (k3 * weak_factor(params.p, params.n, params.gamma, params.r)
            * (1.0 - float(params.p) ** (-params.n)) * b_seminorm)


def constants_report(which: str, psi: KernelSpec, params: SpaceParams,
                     b_seminorm: float = 1.0) -> dict:
    """Discrete and integral-form constants side by side."""
    if which in ("3", "thm3"):
        return {"theorem": "thm3", "discrete": constant_thm3(psi, params),
                "integral_form": integral_constant_thm3(psi, params)}
    if which in ("4", "thm4"):
        return {"theorem": "thm4", "discrete": constant_thm4(psi, params),
                "integral_form": integral_constant_thm4(psi, params)}
    if which in ("5", "thm5"):
        return {"theorem": "thm5", "discrete": constant_thm5(psi, b_seminorm, params),
                "integral_form": integral_constant_thm5(psi, b_seminorm, params)}
    raise ParameterError(f"unknown theorem {which!r}")


def interpolation_exponents(q1: float, r1: float, q2: float, r2: float,
                            theta: float) -> tuple[float, float]:
    """Harmonic interpolation: 1/q = (1-theta)/q1 + theta/q2, same for r."""
    if not 1 <= q1 < q2:
        raise ParameterError("need 1 <= q1 < q2")
    if r1 == r2 or min(r1, r2) < 1:
        raise ParameterError("need distinct r1, r2 >= 1")
    if not 0 < theta < 1:
        raise ParameterError("theta must lie in (0, 1)")
    q = 1.0 / ((1 - theta) / q1 + theta / q2)
    r = 1.0 / ((1 - theta) / r1 + theta / r2)
    return q, r


def solve_balance(which: str, params: SpaceParams, unknown: str) -> float:
    """Solve the exponent balance of the weak bound for one unknown.

    thm4: (n+alpha)/q - beta = (n+gamma)/r
    thm5: (beta+delta) - (n+alpha)/q = -(n+gamma)/r
    """
    n, a, q = params.n, params.alpha, params.q
    shift = params.delta if which in ("5", "thm5") else 0.0
    if which not in ("4", "thm4", "5", "thm5"):
        raise ParameterError(f"unknown theorem {which!r}")
    if unknown == "delta" and not shift:
        raise ParameterError("delta does not enter the thm4 balance")
    rate = (n + a) / q - params.beta - shift  # = (n+gamma)/r
    if unknown == "r":
        if rate <= 0:
            raise ParameterError("no admissible r: (n+alpha)/q - beta - delta <= 0")
        value = (n + params.gamma) / rate
        ok = value >= 1
    elif unknown == "gamma":
        value = params.r * rate - n
        ok = value > -n
    elif unknown == "beta":
        value = (n + a) / q - shift - (n + params.gamma) / params.r
        ok = 0 <= value < n
    elif unknown == "delta":
        value = (n + a) / q - params.beta - (n + params.gamma) / params.r
        ok = 0 < value < 1
    else:
        raise ParameterError(f"cannot solve for {unknown!r}")
    if not ok:
        raise ParameterError(f"no admissible {unknown}: solved value {value}")
    return value
