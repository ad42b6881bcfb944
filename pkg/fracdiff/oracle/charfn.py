import logging
import math

import numpy as np
from scipy import integrate

from fracdiff.core.errors import ConstraintError, StiffnessError
from fracdiff.core.specfun import Estimate
from fracdiff.models.model_params import ModelParams
from fracdiff.oracle.laplace import bromwich_invert

logger = logging.getLogger(__name__)

# The characteristic function obeys, for fixed Laplace variable s,
#
#   K k d(rho^)/dk + (s^gamma + D~(s) |k|^mu) rho^ = s^{gamma-1}.
#
# It is integrated in u = ln k from a k0 small enough that the two-term expansion
# (1 - w0)/s + w0 s^{gamma-1}/(s^gamma + mu K) is exact to rounding, w0 = D~ k0^mu/(K mu).

START_WEIGHT = 1e-8


def charfn_ode_laplace(k_grid, s, p: ModelParams, *, rtol: float = 1e-10) -> np.ndarray:
    """rho^(k, s) on k_grid for each Laplace node s; result shape s.shape + k_grid.shape."""
    if not p.k_drift > 0.0:
        raise ConstraintError(f"characteristic ODE needs K > 0, got {p.k_drift}")
    kk = np.abs(np.asarray(k_grid, dtype=float))
    ss = np.atleast_1d(np.asarray(s, dtype=complex))
    out = np.empty(ss.shape + kk.shape, dtype=complex)
    for idx, sv in np.ndenumerate(ss):
        out[idx] = _solve_one(kk, complex(sv), p, rtol)
    return out if np.ndim(s) else out[0]


def _solve_one(kk: np.ndarray, s: complex, p: ModelParams, rtol: float) -> np.ndarray:
    K, mu, gamma = p.k_drift, p.mu, p.gamma
    dk = complex(p.diffusion_laplace(s))
    sg = s ** gamma
    forcing = s ** (gamma - 1.0) / K

    values = np.empty(kk.shape, dtype=complex)
    values[kk == 0.0] = 1.0 / s
    positive = np.unique(kk[kk > 0.0])
    if positive.size == 0:
        return values

    u0 = math.log(START_WEIGHT * K * mu / abs(dk)) / mu
    u_eval = np.log(positive)
    if u0 >= u_eval[0]:
        u0 = u_eval[0] - 1.0
    w0 = dk * math.exp(mu * u0) / (K * mu)
    y0 = (1.0 - w0) / s + w0 * s ** (gamma - 1.0) / (sg + mu * K)

    def rhs(u, y):
        q = (sg + dk * math.exp(mu * u)) / K
        return [forcing.real - (q.real * y[0] - q.imag * y[1]),
                forcing.imag - (q.real * y[1] + q.imag * y[0])]

    def jac(u, y):
        q = (sg + dk * math.exp(mu * u)) / K
        return [[-q.real, q.imag], [-q.imag, -q.real]]

    sol = integrate.solve_ivp(rhs, (u0, float(u_eval[-1])), [y0.real, y0.imag], method="Radau",
                              t_eval=u_eval, jac=jac, rtol=rtol, atol=1e-14 * abs(1.0 / s))
    if sol.status != 0 or sol.y.shape[1] != u_eval.size:
        reached = math.exp(sol.t[-1]) if sol.t.size else 0.0
        raise StiffnessError(f"characteristic ODE stopped at k={reached:.4g}: {sol.message}", achieved_k=reached)

    lookup = dict(zip(positive, sol.y[0] + 1j * sol.y[1]))
    for idx, v in np.ndenumerate(kk):
        if v > 0.0:
            values[idx] = lookup[v]
    return values


def charfn_ode_solve(k_grid, t: float, p: ModelParams, *, accuracy: float = 1e-7) -> Estimate:
    """Characteristic function at time t from the ODE solution and de Hoog inversion in s."""
    kk = np.atleast_1d(np.asarray(k_grid, dtype=float))
    result = bromwich_invert(lambda nodes: charfn_ode_laplace(kk, nodes, p), t, accuracy, method="dehoog")
    logger.debug(f"characteristic ODE at t={t:g}: {kk.size} wavenumbers, max error {float(np.max(result.error)):.2g}")
    if np.ndim(k_grid) == 0:
        return Estimate(float(result.value[0]), float(result.error[0]))
    return result
