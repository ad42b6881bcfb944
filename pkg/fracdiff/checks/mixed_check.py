import time

import numpy as np

from fracdiff.analysis.moments import normalization_check
from fracdiff.checks.base import VerificationCheck
from fracdiff.closed_form.mixed import mixed_charfn, mixed_density
from fracdiff.models.model_params import KernelKind, ModelParams
from fracdiff.models.profile import Profile
from fracdiff.oracle.charfn import charfn_ode_solve

WAVENUMBERS = np.array([0.25, 0.5, 1.0, 2.0, 3.0])
TIMES = (0.5, 2.0)

KERNELS = {
    "impulsive": ModelParams(gamma=0.5, mu=1.5, k_drift=1.0, d_coeff=1.0),
    "power-law": ModelParams(gamma=0.5, mu=1.5, k_drift=1.0, d_coeff=1.0, alpha_mem=0.5,
                             kernel_kind=KernelKind.POWER_LAW),
}


class MixedCharfnCheck(VerificationCheck):
    """Characteristic function of both kernels against the characteristic ODE inverted numerically."""

    name = "mixed_charfn"
    anchor = "space-time fractional diffusion with a linear drift"
    suites = ("full",)

    def run(self):
        results = []
        for label, p in KERNELS.items():
            for t in TIMES:
                started = time.perf_counter()
                series = mixed_charfn(WAVENUMBERS, t, p).value
                ode = charfn_ode_solve(WAVENUMBERS, t, p).value
                worst = float(np.max(np.abs(series - ode)))
                results.append(self.result(f"{label} t={t:g}", worst, 0.0, 1e-5, started))
        return results


class MixedNormalizationCheck(VerificationCheck):
    """Mass of the density sampled on a geometric grid with a power-law tail."""

    name = "mixed_normalization"
    anchor = "space-time fractional diffusion with a linear drift"
    suites = ("full",)

    def run(self):
        results = []
        x = np.geomspace(1e-3, 1e3, 161)
        for label, p in KERNELS.items():
            started = time.perf_counter()
            rho = mixed_density(x, 1.0, p).value
            profile = Profile(x_grid=x, values=rho, t=1.0, params=p)
            _, deviation = normalization_check(profile, tol=1e-4)
            results.append(self.result(f"{label} t=1", deviation, 0.0, 1e-4, started))
        return results
