import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fracdiff.closed_form.green import green_case1, green_case2
from fracdiff.core.errors import AdmissibilityError, ConstraintError, StabilityError
from fracdiff.models.grid_spec import GridSpec
from fracdiff.models.model_params import KernelKind, ModelParams
from fracdiff.models.profile import ProfileSource
from fracdiff.oracle.caputo import (
    RadialMesh,
    caputo_l1_solve,
    gaussian_point_source,
    mesh_mass,
    product_weights,
    richardson_width,
)
from fracdiff.oracle.charfn import charfn_ode_laplace, charfn_ode_solve

HALF_LINE = GridSpec(x_min=0.0, x_max=8.0, nx=400, t_max=1.0, nt=200)


def peak_relative_error(profile, exact):
    # cells next to the origin still carry the width of the point source
    rho = profile.values[16:]
    reference = exact(profile.x_grid[16:])
    return float(np.max(np.abs(rho - reference)) / np.max(reference))


class TestMesh:
    @pytest.mark.parametrize("n_dim", [1, 2, 3])
    def test_point_source_mass(self, n_dim):
        mesh = RadialMesh(6.0, 600, n_dim, 0.0)
        rho = gaussian_point_source(mesh.centers, 0.5, n_dim)
        assert mesh.mass(rho) == pytest.approx(1.0, rel=1e-4)

    def test_operator_conserves(self):
        mesh = RadialMesh(4.0, 64, 2, 0.5)
        column_sums = mesh.volumes @ mesh.operator().toarray()
        assert_allclose(column_sums, 0.0, atol=1e-12)

    def test_product_weights_sum(self):
        # the weights integrate (t_n - s)^{alpha-1} exactly for constant data
        n, alpha = 12, 0.4
        assert product_weights(n, alpha).sum() == pytest.approx(n ** alpha * (alpha + 1.0))

    def test_richardson(self):
        assert richardson_width(1.0 + 0.01, 1.0 + 0.04) == pytest.approx(1.0)

    def test_width(self):
        with pytest.raises(ValueError):
            gaussian_point_source([0.0], 0.0)


class TestCaputoSolver:
    def test_heat_equation(self, gaussian_params, heat_kernel):
        profile, = caputo_l1_solve(gaussian_params, HALF_LINE)
        assert profile.source is ProfileSource.ORACLE
        assert profile.t == pytest.approx(1.0)
        assert peak_relative_error(profile, lambda x: heat_kernel(x, 1.0)) < 0.02

    def test_mass_is_conserved(self):
        p = ModelParams(gamma=0.6, theta=0.5, n_dim=2)
        profiles = caputo_l1_solve(p, HALF_LINE, times=[0.25, 1.0])
        assert [pr.t for pr in profiles] == pytest.approx([0.25, 1.0])
        for profile in profiles:
            assert mesh_mass(profile) == pytest.approx(1.0, rel=1e-10)

    def test_mirrored_output(self, gaussian_params):
        grid = GridSpec(x_min=-4.0, x_max=4.0, nx=64, t_max=0.5, nt=16)
        profile, = caputo_l1_solve(gaussian_params, grid)
        assert profile.x_grid.size == 128
        assert_allclose(profile.values, profile.values[::-1], rtol=0)

    def test_callable_initial_data(self, gaussian_params, heat_kernel):
        grid = GridSpec(x_min=0.0, x_max=10.0, nx=400, t_max=1.0, nt=200)
        profile, = caputo_l1_solve(gaussian_params, grid, lambda r: heat_kernel(r, 1.0))
        reference = heat_kernel(profile.x_grid, 2.0)
        assert np.max(np.abs(profile.values - reference)) < 1e-3

    @pytest.mark.slow
    @pytest.mark.parametrize("gamma", [0.5, 0.8])
    def test_subdiffusion(self, gamma):
        p = ModelParams(gamma=gamma)
        grid = GridSpec(x_min=0.0, x_max=8.0, nx=2048, t_max=1.0, nt=512)
        profile, = caputo_l1_solve(p, grid)
        assert peak_relative_error(profile, lambda x: green_case1(x, 1.0, p).value) < 0.02

    @pytest.mark.slow
    def test_memory_kernel(self):
        p = ModelParams(gamma=0.4, alpha_mem=0.4, kernel_kind=KernelKind.POWER_LAW)
        grid = GridSpec(x_min=0.0, x_max=8.0, nx=1024, t_max=1.0, nt=512)
        profile, = caputo_l1_solve(p, grid)
        assert peak_relative_error(profile, lambda x: green_case2(x, 1.0, p).value) < 0.05

    def test_rejects_nonlinear(self):
        with pytest.raises(AdmissibilityError):
            caputo_l1_solve(ModelParams(mu=1.5), HALF_LINE)

    def test_rejects_singular_flux(self):
        with pytest.raises(AdmissibilityError):
            caputo_l1_solve(ModelParams(theta=2.5), HALF_LINE)

    @pytest.mark.parametrize("times", [[0.0], [1.5]])
    def test_rejects_times(self, gaussian_params, times):
        with pytest.raises(StabilityError):
            caputo_l1_solve(gaussian_params, HALF_LINE, times=times)

    @pytest.mark.parametrize("initial", [np.ones(10), -np.ones(400)])
    def test_rejects_initial_data(self, gaussian_params, initial):
        with pytest.raises(StabilityError):
            caputo_l1_solve(gaussian_params, HALF_LINE, initial)


class TestCharacteristicOde:
    ornstein_uhlenbeck = ModelParams(gamma=1.0, mu=2.0, k_drift=1.0, d_coeff=1.0)

    def test_laplace_at_zero_wavenumber(self):
        s = np.array([1.0, 2.0 + 1.0j])
        out = charfn_ode_laplace(np.array([0.0, 1.0]), s, self.ornstein_uhlenbeck)
        assert out.shape == (2, 2)
        assert_allclose(out[:, 0], 1.0 / s, rtol=1e-14)

    @pytest.mark.slow
    def test_ornstein_uhlenbeck(self):
        k = np.array([0.5, 1.0, 2.0])
        t = 0.8
        exact = np.exp(-k ** 2 / 2.0 * (1.0 - math.exp(-2.0 * t)))
        assert_allclose(charfn_ode_solve(k, t, self.ornstein_uhlenbeck).value, exact, atol=1e-6)

    def test_needs_drift(self):
        with pytest.raises(ConstraintError):
            charfn_ode_laplace(1.0, 1.0, self.ornstein_uhlenbeck.replace(k_drift=0.0))
