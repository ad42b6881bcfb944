import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import special

from fracdiff.core.errors import ContourError, InsufficientHistoryError, QuadratureError
from fracdiff.core.specfun import mittag_leffler
from fracdiff.oracle.fourier import fourier_invert_even
from fracdiff.oracle.grunwald import caputo_l1_derivative, gl_frac_derivative, gl_weights, l1_weights
from fracdiff.oracle.laplace import bromwich_invert
from fracdiff.oracle.quadrature import adaptive_quad


class TestGrunwald:
    def test_integer_order_weights(self):
        assert gl_weights(1.0, 4).tolist() == [1.0, -1.0, 0.0, 0.0]
        assert gl_weights(2.0, 4).tolist() == [1.0, -2.0, 1.0, 0.0]

    def test_half_derivative_of_identity(self):
        h = 1e-3
        x = h * np.arange(1001)
        deriv = gl_frac_derivative(x, 0.5, h)
        exact = x ** 0.5 / special.gamma(1.5)
        assert_allclose(deriv[500:], exact[500:], rtol=5e-3)

    def test_first_order_convergence(self):
        errors = []
        for h in (1e-2, 5e-3):
            x = h * np.arange(int(round(1.0 / h)) + 1)
            deriv = gl_frac_derivative(x ** 2, 0.3, h)
            errors.append(abs(deriv[-1] - 2.0 / special.gamma(2.7)))
        assert math.log2(errors[0] / errors[1]) == pytest.approx(1.0, abs=0.2)

    def test_negative_order_integrates(self):
        h = 1e-3
        ones = np.ones(1001)
        assert gl_frac_derivative(ones, -1.0, h)[-1] == pytest.approx(1.0, rel=2e-3)

    # (samples, order, h, error)
    invalid = [
        ([1.0], 0.5, 0.1, InsufficientHistoryError),
        ([[1.0, 2.0]], 0.5, 0.1, InsufficientHistoryError),
        ([1.0, 2.0], 0.0, 0.1, ValueError),
        ([1.0, 2.0], 0.5, 0.0, ValueError),
    ]

    @pytest.mark.parametrize("samples,order,h,error", invalid)
    def test_invalid(self, samples, order, h, error):
        with pytest.raises(error):
            gl_frac_derivative(samples, order, h)


class TestCaputoL1:
    def test_weights(self):
        assert_allclose(l1_weights(0.5, 3), [1.0, math.sqrt(2.0) - 1.0, math.sqrt(3.0) - math.sqrt(2.0)])

    @pytest.mark.parametrize("order", [0.3, 0.5, 0.8])
    def test_quadratic(self, order):
        h = 1e-3
        t = h * np.arange(1001)
        deriv = caputo_l1_derivative(t ** 2, order, h)
        exact = 2.0 * t ** (2.0 - order) / special.gamma(3.0 - order)
        assert deriv[0] == 0.0
        assert_allclose(deriv[100:], exact[100:], rtol=2e-3)

    def test_relaxation(self):
        # E_gamma(-t^gamma) solves D^gamma u = -u
        gamma, h = 0.6, 2e-3
        t = h * np.arange(501)
        u = np.array([mittag_leffler(gamma, 1.0, -v ** gamma).value for v in t])
        deriv = caputo_l1_derivative(u, gamma, h)
        assert_allclose(deriv[250:], -u[250:], atol=1e-2)

    @pytest.mark.parametrize("order", [0.0, 1.0, 1.5])
    def test_order_range(self, order):
        with pytest.raises(ValueError):
            caputo_l1_derivative([0.0, 1.0, 2.0], order, 0.1)

    def test_history(self):
        with pytest.raises(InsufficientHistoryError):
            caputo_l1_derivative([1.0], 0.5, 0.1)


class TestLaplaceInversion:
    @pytest.mark.parametrize("method", ["talbot", "dehoog"])
    @pytest.mark.parametrize("t", [0.5, 1.0, 3.0])
    def test_exponential(self, method, t):
        value, error = bromwich_invert(lambda s: 1 / (s + 1), t, method=method)
        assert value == pytest.approx(math.exp(-t), rel=1e-7)
        assert error <= 1e-7

    def test_ramp(self):
        assert bromwich_invert(lambda s: 1 / s ** 2, 2.0, method="dehoog").value == pytest.approx(2.0, rel=1e-7)

    def test_mittag_leffler_transform(self):
        # s^{gamma-1} / (s^gamma + 1) <-> E_gamma(-t^gamma)
        gamma = 0.5
        value, _ = bromwich_invert(lambda s: s ** (gamma - 1) / (s ** gamma + 1), 1.5)
        assert value == pytest.approx(mittag_leffler(gamma, 1.0, -1.5 ** gamma).value, rel=1e-8)

    def test_rows(self):
        value, error = bromwich_invert(lambda s: np.stack([1 / (s + 1), 1 / (s + 2)], axis=1), 1.0, method="dehoog")
        assert value.shape == (2,)
        assert_allclose(value, [math.exp(-1.0), math.exp(-2.0)], rtol=1e-7)

    def test_shifted_abscissa(self):
        value, _ = bromwich_invert(lambda s: 1 / (s - 2), 1.0, method="dehoog", abscissa=2.0)
        assert value == pytest.approx(math.exp(2.0), rel=1e-7)

    def test_invalid_method(self):
        with pytest.raises(ValueError):
            bromwich_invert(lambda s: 1 / s, 1.0, method="stehfest")

    def test_time(self):
        with pytest.raises(ValueError):
            bromwich_invert(lambda s: 1 / s, 0.0)

    def test_non_finite(self):
        with pytest.raises(ContourError):
            bromwich_invert(lambda s: np.full(np.shape(s), np.nan, dtype=complex), 1.0, method="dehoog")


class TestQuadrature:
    def test_smooth(self):
        value, error = adaptive_quad(np.exp, 0.0, 1.0)
        assert value == pytest.approx(math.e - 1.0, rel=1e-12)
        assert error <= 1e-10

    def test_infinite_interval(self):
        assert adaptive_quad(lambda x: math.exp(-x * x), -math.inf, math.inf).value == pytest.approx(math.sqrt(math.pi))

    def test_endpoint_exponents(self):
        value, _ = adaptive_quad(lambda x: 1.0, 0.0, 1.0, endpoint_exponents=(-0.5, 0.5))
        assert value == pytest.approx(math.pi / 2.0, rel=1e-10)

    def test_break_points(self):
        value, _ = adaptive_quad(lambda x: abs(x - 0.3), 0.0, 1.0, points=[0.3, 2.0])
        assert value == pytest.approx(0.045 + 0.245, rel=1e-12)

    def test_exponents_need_finite_interval(self):
        with pytest.raises(ValueError):
            adaptive_quad(lambda x: 1.0, 0.0, math.inf, endpoint_exponents=(0.0, 0.0))

    def test_reports_failure(self):
        with pytest.raises(QuadratureError) as info:
            adaptive_quad(lambda x: math.sin(200.0 * x), 0.0, 50.0, limit=2)
        assert info.value.error_estimate > 1e-10


class TestFourierInversion:
    def test_gaussian(self):
        x = np.array([0.0, 0.5, 2.0, 5.0])
        value, error = fourier_invert_even(lambda k: np.exp(-k ** 2), x, 12.0)
        assert_allclose(value, np.exp(-x ** 2 / 4.0) / (2.0 * math.sqrt(math.pi)), atol=1e-12)
        assert np.all(error < 1e-10)

    def test_cauchy(self):
        # e^{-|k|} is the transform of the Cauchy density
        value, _ = fourier_invert_even(lambda k: np.exp(-k), 1.0, 40.0)
        assert isinstance(value, float)
        assert value == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-10)
