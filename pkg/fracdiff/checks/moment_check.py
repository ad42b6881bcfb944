import time

import numpy as np

from fracdiff.analysis.moments import fit_power_law, second_moment_fit
from fracdiff.analysis.propagators import propagator_profile
from fracdiff.checks.base import VerificationCheck
from fracdiff.checks.families import FAMILIES
from fracdiff.closed_form.green import green_case1_moment, moment_exponent

LAW_FAMILIES = ["case1 gamma=1 theta=0", "case1 gamma=0.5 theta=0", "case1 gamma=1 theta=1"]
DRIFT_FAMILY = "drift gamma=1 theta=1"
TIMES = np.geomspace(0.5, 5.0, 5)


class MellinMomentCheck(VerificationCheck):
    """Slope of the exact Mellin second moments."""

    name = "moment_law_mellin"
    anchor = "The second moment is given by"

    def run(self):
        results = []
        for label in LAW_FAMILIES + [DRIFT_FAMILY]:
            started = time.perf_counter()
            p, kind = FAMILIES[label]
            moments = [green_case1_moment(2.0, t, p, drift=kind == "drift") for t in TIMES]
            slope = fit_power_law(TIMES, moments).slope
            expected, _ = moment_exponent(p)
            results.append(self.result(label, slope, expected, 1e-10, started))
        return results


class QuadratureMomentCheck(VerificationCheck):
    """Slope of second moments integrated from sampled propagators."""

    name = "moment_law_quadrature"
    anchor = "The second moment is given by"
    suites = ("full",)

    def run(self):
        results = []
        for label in LAW_FAMILIES + [DRIFT_FAMILY]:
            started = time.perf_counter()
            p, kind = FAMILIES[label]
            profiles = [propagator_profile(t, p, kind, points=801, exact=False) for t in TIMES]
            slope = second_moment_fit(profiles).slope
            expected, _ = moment_exponent(p)
            results.append(self.result(label, slope, expected, 0.02, started, relative=True))
        return results
