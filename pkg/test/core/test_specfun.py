import math
import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import integrate, special

from fracdiff.core.errors import ContourError, DomainError, GammaPoleError
from fracdiff.core.specfun import (
    bessel_k_mod,
    fox_h,
    fox_h_decay,
    fox_h_strip,
    gamma_fn,
    mainardi,
    mittag_leffler,
    mp_context,
)
from fracdiff.models.h_params import HParams

EXP = HParams(m=1, n=0, lower=((0.0, 1.0),))


def bessel_params(lam):
    return HParams(m=2, n=0, lower=((0.5 * lam, 1.0), (-0.5 * lam, 1.0)))


class TestGamma:
    # (x, expected)
    cases = [
        (0.5, math.sqrt(math.pi)),
        (5.0, 24.0),
        (-0.5, -2.0 * math.sqrt(math.pi)),
        (-1.5, 4.0 * math.sqrt(math.pi) / 3.0),
        (1e-8, 1e8 - 0.5772156649015329),
    ]

    @pytest.mark.parametrize("x,expected", cases)
    def test_values(self, x, expected):
        value, error = gamma_fn(x)
        assert value == pytest.approx(expected, rel=1e-12)
        assert error >= 0.0

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -30.0])
    def test_poles(self, x):
        with pytest.raises(GammaPoleError):
            gamma_fn(x)

    @given(st.floats(min_value=0.01, max_value=0.99))
    def test_reflection(self, x):
        product = gamma_fn(x).value * gamma_fn(1.0 - x).value
        assert product == pytest.approx(math.pi / math.sin(math.pi * x), rel=1e-11)

    @given(st.floats(min_value=-20.0, max_value=20.0).filter(lambda v: abs(v - round(v)) > 1e-3))
    def test_recursion(self, x):
        assert gamma_fn(x + 1.0).value == pytest.approx(x * gamma_fn(x).value, rel=1e-10)


class TestBesselK:
    @pytest.mark.parametrize("x", [0.01, 0.5, 2.0, 30.0])
    def test_half_order(self, x):
        exact = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)
        assert bessel_k_mod(0.5, x).value == pytest.approx(exact, rel=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            bessel_k_mod(0.5, x)


class TestMittagLeffler:
    # (alpha, beta, z, expected)
    cases = [
        (1.0, 1.0, 1.5, math.exp(1.5)),
        (1.0, 1.0, -3.0, math.exp(-3.0)),
        (2.0, 1.0, -4.0, math.cos(2.0)),
        (0.5, 1.0, -0.5, float(special.erfcx(0.5))),
        (0.5, 1.0, -3.0, float(special.erfcx(3.0))),
        (0.5, 1.0, -8.0, float(special.erfcx(8.0))),
        (0.5, 1.0, -50.0, float(special.erfcx(50.0))),
        (1.0, 2.0, -2.0, (1.0 - math.exp(-2.0)) / 2.0),
        (0.7, 0.7, 0.0, 1.0 / math.gamma(0.7)),
    ]

    @pytest.mark.parametrize("alpha,beta,z,expected", cases)
    def test_closed_forms(self, alpha, beta, z, expected):
        value, error = mittag_leffler(alpha, beta, z)
        assert value == pytest.approx(expected, rel=1e-10, abs=1e-14)
        assert error < 1e-9 * max(1.0, abs(expected))

    @pytest.mark.parametrize("z", [-5.5, -7.0, -9.0])
    def test_branches_agree_across_switch(self, z):
        integral = mittag_leffler(0.6, 1.0, z, switch=5.0).value
        series = mittag_leffler(0.6, 1.0, z, switch=50.0).value
        assert integral == pytest.approx(series, rel=1e-10)

    @pytest.mark.parametrize("beta", [1.0, 1.5, 2.2])
    def test_negative_axis_is_monotone(self, beta):
        z = -np.geomspace(0.1, 100.0, 30)
        values = np.array([mittag_leffler(0.5, beta, v).value for v in z])
        assert np.all(np.diff(values) < 0.0)
        assert np.all(values > 0.0)

    def test_invalid_alpha(self):
        with pytest.raises(DomainError):
            mittag_leffler(0.0, 1.0, 1.0)

    def test_precision_hint(self):
        plain = mittag_leffler(0.8, 1.3, -4.0).value
        assert mittag_leffler(0.8, 1.3, -4.0, precision=30).value == pytest.approx(plain, rel=1e-13)
        with pytest.raises(DomainError, match="precision"):
            mittag_leffler(0.8, 1.3, -4.0, precision=-1)


class TestMainardi:
    def test_half_order_is_gaussian(self):
        u = np.array([0.1, 0.5, 1.0, 3.0, 6.0])
        value, error = mainardi(0.5, u)
        assert_allclose(value, np.exp(-u ** 2 / 4.0) / math.sqrt(math.pi), rtol=1e-8, atol=1e-11)
        assert np.all(error < 1e-9)

    @pytest.mark.parametrize("nu", [0.3, 0.5, 0.75])
    def test_value_at_origin(self, nu):
        assert mainardi(nu, 0.0).value == pytest.approx(1.0 / math.gamma(1.0 - nu))

    @pytest.mark.parametrize("nu,lam", [(0.3, 1.0), (0.6, 2.0), (0.75, 0.5)])
    def test_laplace_transform_is_mittag_leffler(self, nu, lam):
        # the density is negligible beyond u = 40 for these orders
        integral, _ = integrate.quad(lambda u: mainardi(nu, u).value * math.exp(-lam * u), 0.0, 40.0,
                                     limit=200, epsabs=1e-11)
        assert integral == pytest.approx(mittag_leffler(nu, 1.0, -lam).value, abs=1e-8)

    @pytest.mark.parametrize("nu,u", [(0.0, 1.0), (1.0, 1.0), (0.5, -1.0)])
    def test_domain(self, nu, u):
        with pytest.raises(DomainError):
            mainardi(nu, u)


class TestFoxH:
    def test_exponential(self):
        z = np.geomspace(0.01, 20.0, 25)
        assert_allclose(fox_h(EXP, z).value, np.exp(-z), rtol=1e-9)

    @pytest.mark.parametrize("lam", [0.0, 0.25, 0.5, 1.0])
    def test_bessel_identity(self, lam):
        z = np.linspace(0.1, 10.0, 12)
        assert_allclose(fox_h(bessel_params(lam), z ** 2 / 4.0).value, 2.0 * special.kv(lam, z), rtol=1e-8)

    def test_scalar_matches_array(self):
        z = np.array([0.3, 2.0, 7.0])
        array = fox_h(EXP, z).value
        for zz, expected in zip(z, array):
            value = fox_h(EXP, float(zz)).value
            assert isinstance(value, float)
            assert value == pytest.approx(expected, rel=1e-9)

    def test_shared_contour_absolute_accuracy(self):
        z = np.geomspace(0.05, 20.0, 30)
        assert_allclose(fox_h(EXP, z, contour="shared").value, np.exp(-z), atol=1e-10)

    def test_log_scale(self):
        plain = fox_h(EXP, 1.5).value
        scaled = fox_h(EXP, 1.5, log_scale=-3.0).value
        assert scaled == pytest.approx(plain * math.exp(-3.0), rel=1e-12)

    def test_strip_and_decay(self):
        params = HParams(m=2, n=0, upper=((0.75, 0.5),), lower=((0.0, 1.0), (0.5, 1.0)))
        assert fox_h_strip(params) == (0.0, math.inf)
        assert fox_h_decay(params) == pytest.approx(1.5)

    def test_overlapping_poles(self):
        params = HParams(m=1, n=1, upper=((0.0, 1.0),), lower=((-2.0, 1.0),))
        with pytest.raises(ContourError):
            fox_h(params, 1.0)

    def test_no_decay(self):
        params = HParams(m=1, n=0, upper=((0.0, 2.0),), lower=((0.0, 1.0),))
        with pytest.raises(ContourError):
            fox_h(params, 1.0)

    @pytest.mark.parametrize("z", [0.0, -1.0])
    def test_domain(self, z):
        with pytest.raises(DomainError):
            fox_h(EXP, z)

    def test_invalid_contour(self):
        with pytest.raises(ValueError):
            fox_h(EXP, 1.0, contour="bent")

    @settings(max_examples=20, deadline=None)
    @given(st.floats(min_value=0.05, max_value=0.95))
    def test_bessel_symmetric_in_order(self, lam):
        z = np.array([0.2, 1.0, 4.0])
        plus = fox_h(bessel_params(lam), z).value
        minus = fox_h(bessel_params(-lam), z).value
        assert_allclose(plus, minus, rtol=1e-9)


class TestMpContext:
    def test_per_thread(self):
        main = mp_context()
        assert mp_context() is main

        seen = []
        worker = threading.Thread(target=lambda: seen.append(mp_context()))
        worker.start()
        worker.join()
        assert seen[0] is not main
