import time

import numpy as np
from scipy import special

from fracdiff.checks.base import VerificationCheck
from fracdiff.core.specfun import fox_h
from fracdiff.models.h_params import HParams


class FoxReductionCheck(VerificationCheck):
    name = "fox_reduction"
    anchor = "H-function reduces to elementary and Bessel functions"

    def run(self):
        results = []

        started = time.perf_counter()
        z = np.geomspace(0.01, 20.0, 40)
        h = fox_h(HParams(m=1, n=0, lower=((0.0, 1.0),)), z).value
        results.append(self.result("exp", float(np.max(np.abs(h - np.exp(-z)))), 0.0, 1e-8, started))

        # H^{2,0}_{0,2}[z^2/4 | (lam/2, 1), (-lam/2, 1)] = 2 K_lam(z)
        z = np.linspace(0.1, 10.0, 34)
        for lam in (0.0, 0.25, 0.5, 1.0):
            started = time.perf_counter()
            params = HParams(m=2, n=0, lower=((0.5 * lam, 1.0), (-0.5 * lam, 1.0)))
            h = fox_h(params, z ** 2 / 4.0).value
            exact = 2.0 * special.kv(lam, z)
            worst = float(np.max(np.abs(h - exact) / exact))
            results.append(self.result(f"bessel_k lambda={lam:g}", worst, 0.0, 1e-8, started))
        return results
