"""Hausdorff operators and their commutators on radial functions over Q_p^n."""

from .constants import (constant_thm3, constant_thm4, constant_thm5, constants_report,
                        kernel_moment, solve_balance, weak_factor)
from .errors import DivergenceError, ParameterError, UnsupportedRepresentationError
from .norms import (central_morrey_norm, distribution, haar_integral, lebesgue_norm,
                    lorentz_norm, rearrangement, weak_central_morrey_norm, weak_norm)
from .operators import commutator_apply, hausdorff_apply, output_window_for, pointwise_majorant
from .padic import PAdicScalar, PVector, Region, canonical_expand, measure, valuation
from .params import SpaceParams
from .radial import (PowerCutoff, RadialFunction, RadialSymbol, Tabulated, TwoSidedPower,
                     indicator_ball, indicator_sphere, lipschitz_seminorm, parse_kernel)

__version__ = "0.1.0"
