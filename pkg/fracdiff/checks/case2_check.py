import time

import numpy as np

from fracdiff.checks.base import VerificationCheck
from fracdiff.closed_form.green import green_case1, green_case2
from fracdiff.models.model_params import KernelKind, ModelParams

PAIRS = [(0.3, 0.4), (0.5, 0.5), (0.6, 0.2)]


class MemoryKernelIdentityCheck(VerificationCheck):
    """A power-law kernel shifts the time order from gamma to gamma + alpha."""

    name = "case2_identity"
    anchor = "power-law memory kernel"

    def run(self):
        x = np.linspace(0.1, 4.0, 12)
        results = []
        for gamma, alpha in PAIRS:
            started = time.perf_counter()
            kernel = ModelParams(gamma=gamma, theta=0.5, alpha_mem=alpha, kernel_kind=KernelKind.POWER_LAW)
            local = ModelParams(gamma=gamma + alpha, theta=0.5)
            g2 = green_case2(x, 1.0, kernel).value
            g1 = green_case1(x, 1.0, local).value
            worst = float(np.max(np.abs(g2 - g1) / np.abs(g1)))
            results.append(self.result(f"gamma={gamma:g} alpha={alpha:g}", worst, 0.0, 1e-10, started))
        return results
