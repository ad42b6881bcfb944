import math

import numpy as np

from fracdiff.analysis.moments import profile_from_function
from fracdiff.closed_form.green import green_case1, green_case1_moment, green_case2, green_drift_power
from fracdiff.models.model_params import ModelParams
from fracdiff.models.profile import Profile

PROPAGATORS = {"case1": green_case1, "case2": green_case2, "drift": green_drift_power}


def radius_for(t: float, p: ModelParams, kind: str) -> float:
    """Radius beyond which the propagator tail is negligible: twelve standard deviations."""
    second = green_case1_moment(2.0, t, p, drift=kind == "drift")
    return 12.0 * math.sqrt(second)


def propagator_profile(t: float, p: ModelParams, kind: str, points: int = 201, *, exact: bool = True) -> Profile:
    """Propagator sampled on [0, radius]; exact=True keeps the closed form as evaluator."""
    green = PROPAGATORS[kind]
    x = np.linspace(0.0, radius_for(t, p, kind), points)
    profile = profile_from_function(lambda r: green(r, t, p), x, t, p)
    if exact:
        return profile
    return Profile(x_grid=profile.x_grid, values=profile.values, t=t, params=p,
                   source=profile.source, error_estimate=profile.error_estimate)
