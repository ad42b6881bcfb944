import time

import numpy as np

from fracdiff.analysis.moments import tail_exponent_fit
from fracdiff.checks.base import VerificationCheck
from fracdiff.closed_form.similarity import scaled_solution, tsallis_tail_exponent
from fracdiff.models.model_params import ModelParams
from fracdiff.models.profile import Profile
from fracdiff.models.scaled_spec import Region, ScaledSolutionSpec


class TsallisTailCheck(VerificationCheck):
    """Heavy tail of the infinite-support solution against 2/(q-1)."""

    name = "tsallis_tail"
    anchor = "asymptotic behaviors 1/|x|^{2/(q-1)}"

    def run(self):
        started = time.perf_counter()
        p = ModelParams(mu=0.25, theta=0.0, k_drift=1.0)
        spec = ScaledSolutionSpec.from_region(p, Region.INFINITE_SUPPORT)
        x = np.geomspace(1.0, 1e4, 121)
        profile = Profile(x_grid=x, values=scaled_solution(x, 0.5, spec, p), t=0.5, params=p)
        slope = tail_exponent_fit(profile, (100.0, 1e4))
        expected = -tsallis_tail_exponent(p.mu, p.theta)
        return [self.result("mu=0.25 theta=0", slope, expected, 0.02, started, relative=True)]
