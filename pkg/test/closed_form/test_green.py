import logging
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fracdiff.closed_form.green import (
    PointMass,
    asymptotic_case1,
    drift_mass,
    green_case1,
    green_case1_moment,
    green_case2,
    green_drift_power,
    green_laplace,
    moment_exponent,
    propagator_h_params,
    propagator_scale,
    solve_from_green,
)
from fracdiff.core.errors import AdmissibilityError, ConstraintError, DomainError, SingularPointError
from fracdiff.core.specfun import fox_h
from fracdiff.models.model_params import KernelKind, ModelParams
from fracdiff.oracle.laplace import bromwich_invert


class TestGaussianReduction:
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_heat_kernel(self, gaussian_params, heat_kernel, t):
        x = np.linspace(-6.0, 6.0, 41)
        assert_allclose(green_case1(x, t, gaussian_params).value, heat_kernel(x, t), rtol=1e-8, atol=1e-300)

    def test_origin(self, gaussian_params, heat_kernel):
        value, error = green_case1(0.0, 1.0, gaussian_params)
        assert value == pytest.approx(heat_kernel(0.0, 1.0), rel=1e-12)
        assert error >= 0.0

    def test_scalar_returns_float(self, gaussian_params):
        assert isinstance(green_case1(0.7, 1.0, gaussian_params).value, float)

    def test_diffusion_coefficient(self, heat_kernel):
        p = ModelParams(d_coeff=2.5)
        x = np.array([0.1, 1.0, 3.0])
        assert_allclose(green_case1(x, 0.8, p).value, heat_kernel(x, 0.8, d=2.5), rtol=1e-8)

    def test_even_in_x(self):
        p = ModelParams(gamma=0.6, theta=0.5)
        x = np.array([0.3, 1.2, 2.5])
        assert_allclose(green_case1(-x, 1.0, p).value, green_case1(x, 1.0, p).value, rtol=0)


class TestPropagatorErrors:
    def test_time(self, gaussian_params):
        with pytest.raises(DomainError):
            green_case1(1.0, 0.0, gaussian_params)

    def test_kernel_mismatch(self, gaussian_params):
        with pytest.raises(AdmissibilityError):
            green_case2(1.0, 1.0, gaussian_params)

    def test_nonlinear_model(self):
        with pytest.raises(AdmissibilityError):
            green_case1(1.0, 1.0, ModelParams(mu=1.5))

    def test_singular_origin(self):
        # the pole of the origin expansion at s = 1/2 is not cancelled for gamma < 1
        with pytest.raises(SingularPointError):
            green_case1(0.0, 1.0, ModelParams(n_dim=3, gamma=0.5))


class TestOrigin:
    def test_three_dimensional_heat_kernel(self):
        # 1/Gamma(a + s) cancels the pole at s = 1/2, leaving the finite value 1 / (4 sqrt(pi t^3))
        p = ModelParams(n_dim=3)
        at_origin = green_case1(0.0, 1.0, p).value
        assert at_origin == pytest.approx(1.0 / (4.0 * math.sqrt(math.pi)), rel=1e-12)
        assert at_origin == pytest.approx(green_case1(1e-4, 1.0, p).value, rel=1e-6)
        assert green_case1(0.0, 2.0, p).value == pytest.approx(at_origin / 2.0 ** 1.5, rel=1e-12)

    # (changes to the drift family, description)
    vanishing = [
        ({"n_dim": 2, "gamma": 0.7}, "double pole at -1/3"),
        ({"n_dim": 2, "gamma": 0.7, "k_drift": 2.0}, "lam = 1/3 below shift = 2/3"),
    ]

    @pytest.mark.parametrize("changes,description", vanishing)
    def test_drift_vanishes_at_origin(self, changes, description):
        p = ModelParams(**{**dict(theta=1.0, drift_exponent=-2.0, k_drift=1.0), **changes})
        x = np.array([0.0, 1e-6, 1e-3])
        value = green_drift_power(x, 1.0, p).value
        assert value[0] == 0.0, description
        assert 0.0 < value[1] < value[2]

    def test_simple_pole_at_origin(self):
        # shift = 0 and lam > 0: H(0) = Gamma(lam) / Gamma(a)
        p = ModelParams(gamma=0.6, theta=1.0, n_dim=2)
        assert green_case1(0.0, 1.0, p).value == pytest.approx(green_case1(1e-7, 1.0, p).value, rel=1e-5)


class TestMemoryKernel:
    # (gamma, alpha)
    cases = [(0.3, 0.4), (0.5, 0.5), (0.6, 0.2)]

    @pytest.mark.parametrize("gamma,alpha", cases)
    def test_matches_impulsive_with_summed_order(self, gamma, alpha):
        memory = ModelParams(gamma=gamma, alpha_mem=alpha, theta=0.5, kernel_kind=KernelKind.POWER_LAW)
        impulsive = ModelParams(gamma=gamma + alpha, theta=0.5)
        x = np.linspace(0.0, 4.0, 9)
        assert_allclose(green_case2(x, 1.3, memory).value, green_case1(x, 1.3, impulsive).value, rtol=1e-10)


class TestDrift:
    def drift_params(self, **changes):
        base = dict(gamma=1.0, theta=1.0, drift_exponent=-2.0, k_drift=1.0)
        base.update(changes)
        return ModelParams(**base)

    def test_zero_drift_is_case1(self):
        p = self.drift_params(k_drift=0.0, gamma=0.7)
        x = np.array([0.0, 0.5, 1.5, 3.0])
        assert_allclose(green_drift_power(x, 1.0, p).value, green_case1(x, 1.0, p).value, rtol=1e-12)

    @pytest.mark.parametrize("changes", [{"theta": 0.0, "drift_exponent": -1.0},
                                         {"drift_exponent": None},
                                         {"drift_exponent": -1.5}])
    def test_constraints(self, changes):
        with pytest.raises(ConstraintError):
            green_drift_power(1.0, 1.0, self.drift_params(**changes))

    def test_outward_drift_too_strong(self):
        with pytest.raises(AdmissibilityError):
            green_drift_power(1.0, 1.0, self.drift_params(k_drift=-2.0))

    def test_raw_mass(self):
        assert drift_mass(self.drift_params()) == pytest.approx(1.0)
        assert drift_mass(self.drift_params(n_dim=2)) == pytest.approx(1.0 / math.gamma(2.0 / 3.0))


class TestMoments:
    def test_gaussian_second_moment(self, gaussian_params):
        assert green_case1_moment(2.0, 1.5, gaussian_params) == pytest.approx(3.0)

    def test_zeroth_moment(self):
        assert green_case1_moment(0.0, 2.0, ModelParams(gamma=0.4, theta=0.3)) == pytest.approx(1.0)

    @pytest.mark.parametrize("gamma,theta", [(0.5, 0.0), (1.0, 1.0), (0.8, -0.5)])
    def test_scaling_law(self, gamma, theta):
        p = ModelParams(gamma=gamma, theta=theta)
        ratio = green_case1_moment(2.0, 8.0, p) / green_case1_moment(2.0, 1.0, p)
        assert math.log(ratio, 8.0) == pytest.approx(2.0 * gamma / (2.0 + theta))

    # (gamma, theta, exponent, regime)
    regimes = [
        (1.0, 0.0, 1.0, "normal"),
        (0.5, 0.0, 0.5, "sub"),
        (1.0, 1.0, 2.0 / 3.0, "sub"),
        (1.0, -1.0, 2.0, "super"),
        (0.75, -0.5, 1.0, "normal"),
    ]

    @pytest.mark.parametrize("gamma,theta,exponent,regime", regimes)
    def test_moment_exponent(self, gamma, theta, exponent, regime):
        kappa, label = moment_exponent(ModelParams(gamma=gamma, theta=theta))
        assert kappa == pytest.approx(exponent)
        assert label == regime


class TestAsymptotics:
    def test_exact_for_gaussian(self, gaussian_params, heat_kernel):
        estimate = asymptotic_case1(10.0, 1.0, gaussian_params)
        assert estimate.value == pytest.approx(heat_kernel(10.0, 1.0), rel=1e-10)
        assert estimate.argument == pytest.approx(25.0)
        assert estimate.in_regime

    @pytest.mark.parametrize("gamma", [0.5, 0.8])
    def test_deep_tail(self, gamma):
        p = ModelParams(gamma=gamma)
        x = math.sqrt(200.0 * 4.0)
        exact = green_case1(x, 1.0, p).value
        assert asymptotic_case1(x, 1.0, p).value == pytest.approx(exact, rel=0.05)

    @pytest.mark.parametrize("gamma,theta,n_dim", [(0.5, 0.5, 1), (0.8, 0.5, 1), (0.5, 0.5, 2), (0.8, 1.0, 2)])
    def test_deep_tail_families(self, gamma, theta, n_dim):
        p = ModelParams(gamma=gamma, theta=theta, n_dim=n_dim)
        width = 2.0 + theta
        x = (200.0 * width ** 2) ** (1.0 / width)
        exact = green_case1(x, 1.0, p).value
        estimate = asymptotic_case1(x, 1.0, p)
        assert estimate.argument == pytest.approx(200.0)
        assert estimate.value == pytest.approx(exact, rel=0.05)

    def test_warns_below_threshold(self, gaussian_params, caplog):
        with caplog.at_level(logging.WARNING, logger="fracdiff.closed_form.green"):
            estimate = asymptotic_case1(1.0, 1.0, gaussian_params)
        assert not estimate.in_regime
        assert "below" in caplog.text

    def test_origin(self, gaussian_params):
        with pytest.raises(DomainError):
            asymptotic_case1(0.0, 1.0, gaussian_params)


class TestSimilarityVariable:
    def test_fox_h_of_scaled_argument(self):
        p = ModelParams(gamma=0.6, theta=0.5, n_dim=2)
        x = np.array([0.4, 1.0, 2.0])
        scaled, factor = propagator_scale(x, 0.9, p)
        direct = fox_h(propagator_h_params(p), scaled).value
        assert_allclose(factor * green_case1(x, 0.9, p).value, direct, rtol=1e-9)


class TestLaplaceDomain:
    def test_heat_transform(self, gaussian_params):
        s, x = 2.0, 1.0
        exact = math.exp(-x * math.sqrt(s)) / (2.0 * math.sqrt(s))
        assert float(green_laplace(x, s, gaussian_params)) == pytest.approx(exact, rel=1e-12)

    def test_talbot_inversion(self):
        p = ModelParams(gamma=0.7, theta=0.4)
        inverted = bromwich_invert(lambda s: green_laplace(1.2, s, p), 1.0, 1e-8)
        assert inverted.value == pytest.approx(green_case1(1.2, 1.0, p).value, rel=1e-7)

    def test_origin(self, gaussian_params):
        with pytest.raises(SingularPointError):
            green_laplace(0.0, 1.0, gaussian_params)


class TestGeneralInitialData:
    def test_point_mass(self, gaussian_params, heat_kernel):
        green = lambda u, t: green_case1(u, t, gaussian_params)
        value, _ = solve_from_green(PointMass(position=0.5, weight=2.0), green, 1.5, 1.0)
        assert value == pytest.approx(2.0 * heat_kernel(1.0, 1.0), rel=1e-12)

    def test_gaussian_data_adds_times(self, gaussian_params, heat_kernel):
        green = lambda u, t: green_case1(u, t, gaussian_params)
        initial = lambda xp: float(heat_kernel(xp, 0.5))
        value, error = solve_from_green(initial, green, 0.8, 1.0, tol=1e-8)
        assert value == pytest.approx(float(heat_kernel(0.8, 1.5)), rel=1e-7)
        assert error < 1e-8

    def test_plain_number_kernel(self):
        value, error = solve_from_green(PointMass(), lambda u, t: 0.25, 0.0, 1.0)
        assert (value, error) == (0.25, 0.0)
