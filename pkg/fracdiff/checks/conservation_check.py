import time

from fracdiff.analysis.moments import normalization_check
from fracdiff.analysis.propagators import propagator_profile
from fracdiff.checks.base import VerificationCheck
from fracdiff.checks.families import FAMILIES

CORE_FAMILIES = ["case1 gamma=0.5 theta=1 N=2", "case1 gamma=0.5 theta=0"]
FULL_FAMILIES = ["case1 gamma=0.8 theta=0.5 N=2", "case2 gamma=0.5 alpha=0.3",
                 "drift gamma=1 theta=1", "drift gamma=0.7 theta=1 N=2"]
TIMES = (0.25, 1.0, 4.0)


class ConservationCheck(VerificationCheck):
    """Weighted mass of each propagator stays one."""

    name = "conservation"
    anchor = "is time independent"

    def run(self):
        families = CORE_FAMILIES + (FULL_FAMILIES if self.full else [])
        results = []
        for label in families:
            p, kind = FAMILIES[label]
            for t in TIMES:
                started = time.perf_counter()
                _, deviation = normalization_check(propagator_profile(t, p, kind, points=101))
                results.append(self.result(f"{label} t={t:g}", deviation, 0.0, 1e-6, started))
        return results
