import logging

import numpy as np
from scipy import integrate

from fracdiff.core.errors import QuadratureError
from fracdiff.core.specfun import Estimate

logger = logging.getLogger(__name__)


def adaptive_quad(f, a: float, b: float, tol: float = 1e-10, *, rtol: float = 1e-10,
                  endpoint_exponents: tuple[float, float] | None = None,
                  points=None, limit: int = 200) -> Estimate:
    """Integrate f over [a, b] with an error estimate.

    Infinite limits are mapped to a finite interval by the integrator. With
    *endpoint_exponents* = (ea, eb) the integrand is taken to be
    f(x) (x - a)^ea (b - x)^eb and the algebraic factors are integrated exactly,
    so f should be the smooth remainder.

    Raises QuadratureError when the achieved error is above tolerance.
    """
    kwargs = dict(epsabs=tol, epsrel=rtol, limit=limit, full_output=1)
    if endpoint_exponents is not None:
        if not (np.isfinite(a) and np.isfinite(b)):
            raise ValueError("endpoint exponents need a finite interval")
        kwargs.update(weight="alg", wvar=tuple(endpoint_exponents))
    elif points is not None and np.isfinite(a) and np.isfinite(b):
        inside = [p for p in points if a < p < b]
        if inside:
            kwargs["points"] = inside

    out = integrate.quad(f, a, b, **kwargs)
    value, error = float(out[0]), float(out[1])

    if not np.isfinite(value):
        raise QuadratureError(f"integral over [{a}, {b}] is not finite", value=value, error_estimate=error)
    if error > max(tol, rtol * abs(value)):
        reason = out[3] if len(out) > 3 else "error estimate above target"
        raise QuadratureError(f"integral over [{a}, {b}] did not reach tolerance: {reason}",
                              value=value, error_estimate=error)
    logger.debug(f"quad [{a}, {b}] -> {value:.12g} +- {error:.2g} ({out[2]['neval']} evaluations)")
    return Estimate(value, error)
