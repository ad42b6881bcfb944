import time

import numpy as np

from fracdiff.checks.base import VerificationCheck
from fracdiff.closed_form.green import green_case1
from fracdiff.models.model_params import ModelParams


class GaussianReductionCheck(VerificationCheck):
    """gamma = 1, theta = 0, N = 1 must give the heat kernel."""

    name = "gaussian_reduction"
    anchor = "reduces to the usual Gaussian"

    def run(self):
        p = ModelParams(gamma=1.0, theta=0.0, n_dim=1, d_coeff=1.0)
        results = []
        for t in (0.5, 1.0, 2.0):
            started = time.perf_counter()
            x = np.sqrt(4.0 * p.d_coeff * t * np.linspace(0.0, 25.0, 51))
            exact = np.exp(-x ** 2 / (4.0 * p.d_coeff * t)) / np.sqrt(4.0 * np.pi * p.d_coeff * t)
            got = green_case1(x, t, p).value
            worst = float(np.max(np.abs(got - exact) / exact))
            results.append(self.result(f"t={t:g}", worst, 0.0, 1e-8, started))
        return results
