import math
import time

import numpy as np

from fracdiff.checks.base import VerificationCheck
from fracdiff.closed_form.similarity import phi_residual, scaled_profile, similarity_residual
from fracdiff.models.model_params import ModelParams
from fracdiff.models.scaled_spec import Region, ScaledSolutionSpec
from fracdiff.oracle.quadrature import adaptive_quad

# One admissible point per region; K = 1 keeps phi inside its domain up to t = 1.5
REGIONS = {
    Region.INFINITE_SUPPORT: ModelParams(mu=0.25, theta=0.0, k_drift=1.0),
    Region.BOUNDED_SUPPORT: ModelParams(mu=-2.0, theta=0.0, k_drift=1.0),
}
TIMES = (0.1, 0.5, 1.0, 1.5)
STEPS = (0.02, 0.01, 0.005)
POINTS = np.array([0.5, 1.0, 2.0])


def _spec(region: Region) -> tuple[ScaledSolutionSpec, ModelParams]:
    p = REGIONS[region]
    return ScaledSolutionSpec.from_region(p, region), p


def weighted_mass(spec: ScaledSolutionSpec) -> float:
    """int |z|^{N-1} rho_bar dz over the line; the part beyond z = 1 is mapped to w = 1/z."""
    n = spec.n_dim
    inner = adaptive_quad(lambda z: z ** (n - 1) * scaled_profile(z, spec), 0.0, 1.0, tol=1e-10).value
    outer = 0.0
    if spec.support > 1.0:
        outer = adaptive_quad(lambda w: w ** (-n - 1) * scaled_profile(1.0 / w, spec), 0.0, 1.0, tol=1e-10).value
    return 2.0 * (inner + outer)


class ScaleFunctionCheck(VerificationCheck):
    name = "similarity_phi"
    anchor = "ordinary differential equation for the scale function"

    def run(self):
        results = []
        for region in REGIONS:
            started = time.perf_counter()
            spec, p = _spec(region)
            worst = max(abs(phi_residual(t, spec, p)) for t in TIMES)
            results.append(self.result(region.value, worst, 0.0, 1e-6, started))
        return results


class SimilarityResidualCheck(VerificationCheck):
    """Residual of the reduced similarity equation.

    Infinite support: observed order of the Grunwald-Letnikov residual over three
    steps. Bounded support: residual with the closed-form derivative.
    """

    name = "similarity_residual"
    anchor = "similarity solution of the nonlinear equation"

    def run(self):
        results = []

        started = time.perf_counter()
        spec, p = _spec(Region.INFINITE_SUPPORT)
        errors = [float(np.max(np.abs(similarity_residual(POINTS, spec, p, h, method="gl")))) for h in STEPS]
        orders = [math.log2(errors[i] / errors[i + 1]) for i in range(len(errors) - 1)]
        results.append(self.result("gl order", float(np.mean(orders)), 1.0, 0.3, started))

        started = time.perf_counter()
        spec, p = _spec(Region.BOUNDED_SUPPORT)
        z = np.linspace(0.05, 0.95, 19)
        worst = float(np.max(np.abs(similarity_residual(z, spec, p, method="analytic"))))
        results.append(self.result("bounded analytic", worst, 0.0, 1e-10, started))
        return results


class SimilarityNormalizationCheck(VerificationCheck):
    name = "similarity_normalization"
    anchor = "normalization of the scaled profile"

    def run(self):
        results = []
        for region in REGIONS:
            started = time.perf_counter()
            spec, _ = _spec(region)
            results.append(self.result(region.value, weighted_mass(spec), 1.0, 1e-6, started))
        return results
