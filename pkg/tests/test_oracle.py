from fractions import Fraction

import numpy as np
import pytest

from padic_hausdorff.errors import ParameterError
from padic_hausdorff.norms import haar_integral
from padic_hausdorff.operators import hausdorff_apply
from padic_hausdorff.oracle import (SampleConfig, ball_indicator, check_shift_invariance,
                                    mc_hausdorff_point, mc_integral, pointwise, radial_integrand,
                                    random_point, sample_ball, sample_lipschitz_ratios)
from padic_hausdorff.padic import PVector
from padic_hausdorff.radial import (PowerCutoff, RadialFunction, RadialSymbol, TwoSidedPower,
                                    indicator_ball, indicator_sphere, lipschitz_seminorm)

N = 20_000


def vec(p, *vals):
    return PVector.from_rationals([Fraction(v) for v in vals], p, 24)


class TestSampler:
    def test_deterministic(self):
        cfg = SampleConfig(0, 12, 500, seed=3)
        assert np.array_equal(sample_ball(cfg, 3, 2).units, sample_ball(cfg, 3, 2).units)

    @pytest.mark.parametrize("p,n", [(2, 1), (3, 2), (5, 1)])
    def test_sphere_fraction(self, p, n):
        ks = sample_ball(SampleConfig(0, 16, N, seed=p), p, n).norm_exponents()
        frac, target = float((ks == 0).mean()), 1 - p ** -n
        assert abs(frac - target) <= 4 * (target * (1 - target) / N) ** 0.5

    def test_quarter_ball(self):
        ks = sample_ball(SampleConfig(0, 16, N, seed=1), 2, 1).norm_exponents()
        assert abs(float((ks <= -2).mean()) - 0.25) <= 4 * (0.1875 / N) ** 0.5

    def test_depth_bounds(self):
        with pytest.raises(ParameterError):
            SampleConfig(0, 4, 10)
        with pytest.raises(ParameterError):
            sample_ball(SampleConfig(0, 40, 10), 7, 1)


class TestIntegrals:
    def test_ball_indicator_exact(self):
        est, se = mc_integral(radial_integrand(indicator_ball(0, 3, 2)), SampleConfig(0, 12, 1000),
                              3, 2)
        assert (est, se) == (1.0, 0.0)

    def test_sphere_indicator(self):
        est, se = mc_integral(radial_integrand(indicator_sphere(0, 2, 1)), SampleConfig(0, 20, N),
                              2, 1)
        assert abs(est - 0.5) <= 3 * se

    @pytest.mark.parametrize("seed", range(5))
    def test_random_radial(self, seed):
        rng = np.random.default_rng(seed)
        p, n, alpha = [(2, 1, 0.0), (3, 1, 0.5), (2, 2, -0.5), (5, 1, 1.0), (3, 2, 0.0)][seed]
        f = RadialFunction(p, n, -3, tuple(rng.uniform(0.1, 3, 4)))
        est, se = mc_integral(radial_integrand(f), SampleConfig(0, 16, N, seed), p, n, alpha)
        exact = haar_integral(f.restricted_to_ball(0), alpha)
        assert abs(est - exact) <= 4 * se

    def test_pointwise_lift_agrees(self):
        f = RadialFunction(3, 1, -2, (1.0, 2.0, 0.5))
        cfg = SampleConfig(0, 12, 300, 4)
        s = sample_ball(cfg, 3, 1)
        assert np.array_equal(pointwise(f)(s), radial_integrand(f)(s))


class TestShift:
    def test_zero_shift(self):
        rep = check_shift_invariance(radial_integrand(indicator_sphere(0, 2, 1)), vec(2, 0),
                                     SampleConfig(0, 16, 2000))
        assert rep.estimate == rep.shifted_estimate and rep.z == 0

    def test_translated_ball(self):
        p, n = 3, 1
        a = vec(p, 3)  # |a| = 1/3
        F = ball_indicator(vec(p, 0), -1)
        rep = check_shift_invariance(F, a, SampleConfig(0, 16, N, 2))
        assert abs(rep.estimate - p ** -n) <= 4 * (p ** -n / N) ** 0.5
        assert abs(rep.shifted_estimate - p ** -n) <= 4 * (p ** -n / N) ** 0.5

    def test_small_shift_preserves_sphere(self):
        rep = check_shift_invariance(radial_integrand(indicator_sphere(0, 5, 2)), vec(5, 25, 0),
                                     SampleConfig(0, 12, N, 9))
        assert abs(rep.z) <= 3
        assert rep.estimate == rep.shifted_estimate

    def test_large_shift_rejected(self):
        with pytest.raises(ParameterError):
            check_shift_invariance(radial_integrand(indicator_sphere(0, 2, 1)), vec(2, "1/2"),
                                   SampleConfig(0, 16, 100))


class TestHausdorffPoint:
    @pytest.mark.parametrize("psi", [PowerCutoff(0.5), TwoSidedPower(0.3, 1.5)])
    def test_radial_and_exact(self, psi):
        p, n, beta = 2, 1, 0.3
        f = RadialFunction(p, n, -2, (1.0, 0.5, 2.0))
        exact = hausdorff_apply(psi, beta, f, (-6, 4))
        cfg = SampleConfig(0, 20, N, 5)
        for l in (-1, 0):
            (e1, s1), (e2, s2) = (mc_hausdorff_point(psi, beta, f, random_point(p, n, l, seed=s), cfg)
                                  for s in (1, 2))
            assert abs(e1 - e2) <= 3 * (s1**2 + s2**2) ** 0.5 + 1e-12
            assert abs(e1 - exact.eval_shell(l)) <= 4 * s1 + 1e-12


class TestLipschitzSampling:
    @pytest.mark.parametrize("b,delta", [
        (RadialSymbol.power(0.5, 2, 1, (-4, 3)), 0.5),
        (RadialSymbol(3, 1, -1, (0.2, 1.0, -0.5), 0.4, 0.4, 0.0), 0.7),
        (RadialSymbol(2, 2, 0, (0.0, 3.0), 0.0, 0.0, 0.0), 1.0),
    ])
    def test_never_exceeds_and_approaches(self, b, delta):
        ratios = sample_lipschitz_ratios(b, delta, 2000, seed=1)
        closed = lipschitz_seminorm(b, delta)
        assert ratios.max() <= closed * (1 + 1e-12)
        assert ratios.max() >= 0.95 * closed
