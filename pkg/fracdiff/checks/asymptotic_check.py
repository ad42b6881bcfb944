import time

import numpy as np

from fracdiff.checks.base import VerificationCheck
from fracdiff.closed_form.green import asymptotic_case1, green_case1
from fracdiff.models.model_params import ModelParams

# H-arguments where the stretched exponential has taken over
ARGUMENTS = np.geomspace(30.0, 300.0, 7)

# (gamma, theta, N)
CASES = [
    (0.5, 0.0, 1),
    (0.5, 0.5, 1),
    (0.5, 1.0, 1),
    (0.8, 0.0, 1),
    (0.8, 0.5, 1),
    (0.8, 1.0, 1),
    (0.5, 0.5, 2),
    (0.8, 1.0, 2),
]


class AsymptoticTailCheck(VerificationCheck):
    name = "asymptotic_tail"
    anchor = "stretched exponential behavior for large |x|"

    def run(self):
        results = []
        for gamma, theta, n_dim in CASES:
            started = time.perf_counter()
            p = ModelParams(gamma=gamma, theta=theta, n_dim=n_dim)
            width = 2.0 + theta
            scale = width ** 2 * p.d_coeff
            x = (ARGUMENTS * scale) ** (1.0 / width)
            exact = green_case1(x, 1.0, p).value
            approx = np.array([asymptotic_case1(xx, 1.0, p).value for xx in x])
            worst = float(np.max(np.abs(exact / approx - 1.0)))
            results.append(self.result(f"gamma={gamma:g} theta={theta:g} N={n_dim}", worst, 0.0, 0.05, started))
        return results
