import time

import numpy as np

from fracdiff.checks.base import VerificationCheck
from fracdiff.closed_form.green import green_case1
from fracdiff.models.grid_spec import GridSpec
from fracdiff.models.model_params import ModelParams
from fracdiff.oracle.caputo import caputo_l1_solve

RADIUS = 8.0
CELLS = 2048
STEPS = 512
# cells next to the origin are skipped: the point source is smeared over them
SKIPPED_CELLS = 16


class FiniteVolumeOracleCheck(VerificationCheck):
    """L1 finite-volume solution against the closed-form propagator at t = 1.

    The error is the largest deviation relative to the peak of the propagator.
    """

    name = "oracle_case1"
    anchor = "fractional diffusion equation with a radial operator"
    suites = ("full",)

    def run(self):
        grid = GridSpec(x_min=0.0, x_max=RADIUS, nx=CELLS, t_max=1.0, nt=STEPS)
        results = []
        for n_dim in (1, 2):
            for gamma in (0.5, 0.8):
                for theta in (0.0, 0.5):
                    started = time.perf_counter()
                    p = ModelParams(gamma=gamma, theta=theta, n_dim=n_dim)
                    profile = caputo_l1_solve(p, grid)[-1]
                    x = profile.x_grid[SKIPPED_CELLS:]
                    exact = green_case1(x, profile.t, p).value
                    worst = float(np.max(np.abs(profile.values[SKIPPED_CELLS:] - exact)) / np.max(exact))
                    results.append(self.result(f"gamma={gamma:g} theta={theta:g} N={n_dim}", worst, 0.0, 0.02,
                                               started))
        return results
