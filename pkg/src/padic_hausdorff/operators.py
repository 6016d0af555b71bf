"""Fractional Hausdorff operators and their commutators on radial functions.

With Φ(x) = ψ(|x|_p) and f = g(|x|_p), integrating over the spheres S_k gives

    H_{Φ,β} f(p^l) = (1 - p^-n) sum_k ψ(p^(l-k)) p^(kβ) g(p^k),

which is a finite sum whenever f has finite support, for any kernel.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .constants import constant_thm3, constant_thm4, thm5_moments, weak_factor
from .errors import ParameterError, UnsupportedRepresentationError
from .params import SpaceParams
from .radial import KernelSpec, RadialFunction, RadialSymbol, Tabulated

DEFAULT_PAD = 16


class PowerProfile(NamedTuple):
    """The radial power A |x|_p^e."""

    coefficient: float
    exponent: float

    def at_shell(self, l: int, p: int) -> float:
        return self.coefficient * float(p) ** (l * self.exponent)


def _pad_for(margin: float, p: int, bits: float, max_pad: int) -> int:
    if margin <= 0:
        raise ParameterError(f"output tail does not decay (margin {margin})")
    return min(max_pad, math.ceil(bits / (margin * math.log2(p))) + 2)


def output_window_for(psi: KernelSpec, f: RadialFunction,
                      critical_exponent: float | None = None, bits: float = 44.0,
                      min_pad: int = DEFAULT_PAD, max_pad: int = 400) -> tuple[int, int]:
    """Exponent window on which to evaluate H f.

    Tabulated kernels give the exact output support.  For power-law kernels the
    output behaves like p^(l a) below the input window and p^(-l b) above it;
    every norm functional we evaluate weighs a shell like p^(l * critical), so
    the part outside the window contributes at most about 2^-bits once the pad
    covers bits / (margin log2 p) shells, margin = a + critical or b - critical.
    A kernel that is constant near 0 gives an exact constant tail instead.
    """
    if isinstance(psi, Tabulated):
        j_lo, j_hi = psi.support()
        lo = f.k_min + j_lo if f.tail_value == 0 else f.k_min + j_lo - min_pad
        return lo, f.k_max + j_hi
    a, neg_b = psi.power_exponents()
    if critical_exponent is None:
        lo = f.k_min - min_pad
        hi = f.k_max + (min_pad if neg_b is not None else 0)
        return lo, hi
    if a == 0:
        lo = f.k_min - 2
    else:
        lo = f.k_min - max(min_pad, _pad_for(a + critical_exponent, f.p, bits, max_pad))
    if neg_b is None:
        hi = f.k_max
    else:
        hi = f.k_max + max(min_pad, _pad_for(-neg_b - critical_exponent, f.p, bits, max_pad))
    return lo, hi


def _check_beta(beta: float, n: int) -> None:
    if not 0 <= beta < n:
        raise ParameterError(f"need 0 <= beta < n, got beta={beta}")


def hausdorff_apply(psi: KernelSpec, beta: float, f: RadialFunction,
                    output_window: tuple[int, int] | None = None) -> RadialFunction:
    """H_{Φ,β} f on the output window, exact shell by shell.

    Outside the window the result carries a constant tail only when the output
    is provably constant there (kernel constant near 0); otherwise it is
    truncated to zero.
    """
    _check_beta(beta, f.n)
    if f.tail_value != 0 and not isinstance(psi, Tabulated):
        raise UnsupportedRepresentationError(
            "inputs with a nonzero tail need a finitely supported kernel")
    p, n = f.p, f.n
    if output_window is None:
        output_window = output_window_for(psi, f)
    lo, hi = output_window
    tail = 0.0
    if f.tail_value == 0 and psi.power_exponents()[0] == 0:
        # ψ(p^j) = scale for all j <= 0, so H f is constant for l <= k_min
        lo = min(lo, f.k_min)
        tail = None
    factor = 1.0 - float(p) ** (-n)
    ks = list(range(f.k_min, f.k_max + 1))
    weighted = [float(p) ** (k * beta) * g for k, g in zip(ks, f.values)]
    j_lo, j_hi = psi.support()
    values = []
    for l in range(lo, hi + 1):
        terms = [psi.value(l - k, p) * w for k, w in zip(ks, weighted) if w and j_lo <= l - k <= j_hi]
        if f.tail_value != 0:
            # shells below the window: k = l - j for tabulated offsets j
            terms.extend(psi.value(j, p) * f.tail_value * float(p) ** ((l - j) * beta)
                         for j in psi.table if l - j < f.k_min)
        values.append(factor * math.fsum(terms))
    if tail is None:
        tail = values[0] if lo <= f.k_min else 0.0
    return RadialFunction(p, n, lo, tuple(values), tail)


def commutator_apply(b: RadialSymbol, psi: KernelSpec, beta: float, f: RadialFunction,
                     output_window: tuple[int, int] | None = None) -> RadialFunction:
    """b H_{Φ,β} f - H_{Φ,β}(b f) on the output window.

    Summed directly as (1 - p^-n) sum_k ψ(p^(l-k)) p^(kβ) (b(p^l) - b(p^k)) g(p^k),
    which avoids cancelling two large terms and is exactly zero for constant b.
    """
    _check_beta(beta, f.n)
    if f.tail_value != 0 and not isinstance(psi, Tabulated):
        raise UnsupportedRepresentationError(
            "inputs with a nonzero tail need a finitely supported kernel")
    p, n = f.p, f.n
    if output_window is None:
        output_window = output_window_for(psi, f)
    lo, hi = output_window
    lo = min(lo, b.k_min)
    hi = max(hi, b.k_max)
    constant_tail = f.tail_value == 0 and psi.power_exponents()[0] == 0
    if constant_tail:
        # below both windows ψ(p^(l-k)) = scale and b(p^l) = b(0): constant in l
        lo = min(lo, f.k_min, b.k_min - 1)
    factor = 1.0 - float(p) ** (-n)
    ks = list(range(f.k_min, f.k_max + 1))
    weighted = [float(p) ** (k * beta) * g for k, g in zip(ks, f.values)]
    b_in = [b.eval_shell(k) for k in ks]
    j_lo, j_hi = psi.support()
    values = []
    for l in range(lo, hi + 1):
        bl = b.eval_shell(l)
        terms = [psi.value(l - k, p) * w * (bl - bk) for k, w, bk in zip(ks, weighted, b_in)
                 if w and bl != bk and j_lo <= l - k <= j_hi]
        if f.tail_value != 0:
            terms.extend(psi.value(j, p) * f.tail_value * float(p) ** ((l - j) * beta)
                         * (bl - b.eval_shell(l - j))
                         for j in psi.table if l - j < f.k_min)
        values.append(factor * math.fsum(terms))
    tail = values[0] if constant_tail else 0.0
    return RadialFunction(p, n, lo, tuple(values), tail)


def pointwise_majorant(psi: KernelSpec, beta: float, params: SpaceParams, which: str,
                       f_norm: float, b_seminorm: float = 0.0) -> PowerProfile:
    """The power bound |T f(x)| <= A |x|_p^e produced by the Hölder step.

    thm3: A = (1 - p^-n)^(1/q') D_1 ||f||_(central Morrey), e = n lambda.
    thm4: A = (1 - p^-n)^(1/q') D_2 ||f||_(L^q), e = -(n+gamma)/r.
    thm5: A = (1 - p^-n)^(1/q') (D(s1) + D(s2)) ||b|| ||f||_(L^q), same e.
    """
    p, n = params.p, params.n
    if which in ("3", "thm3"):
        if beta != 0:
            raise ParameterError("the Morrey bound concerns beta = 0")
        return PowerProfile(constant_thm3(psi, params) * f_norm, n * params.lam)
    e = -(n + params.gamma) / params.r
    if which in ("4", "thm4"):
        if beta != params.beta:
            raise ParameterError("beta disagrees with params.beta")
        k2 = constant_thm4(psi, params) / weak_factor(p, n, params.gamma, params.r)
        return PowerProfile(k2 * f_norm, e)
    if which in ("5", "thm5"):
        params.thm5_admissible()
        if beta != params.beta:
            raise ParameterError("beta disagrees with params.beta")
        d_1, d_2 = thm5_moments(psi, params)
        shell = (1.0 - float(p) ** (-n)) ** params.inv_q_conj
        return PowerProfile(shell * (d_1 + d_2) * b_seminorm * f_norm, e)
    raise ParameterError(f"unknown theorem {which!r}")


def majorant_violation(out: RadialFunction, profile: PowerProfile, rtol: float = 1e-9) -> int | None:
    """First output shell where |T f(p^l)| exceeds A p^(l e) beyond rtol, else None."""
    for l, v in out.shells():
        bound = profile.at_shell(l, out.p)
        if abs(v) > bound * (1 + rtol) + 1e-300:
            return l
    return None
