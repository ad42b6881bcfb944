#
# Numerical inversion of Laplace transforms
#
# "talbot" hands a scalar transform of an mpmath complex argument to mpmath's fixed
# Talbot rule. "dehoog" is the quotient-difference accelerated Fourier series of
# de Hoog, Knight and Stokes on a vertical line; it evaluates the transform once on
# a numpy array of nodes, so transforms may return one value per node or a whole
# row of values (one inversion per column).
#

import logging
import math

import numpy as np

from fracdiff.core.errors import ContourError, ConvergenceError
from fracdiff.core.specfun import Estimate, mp_context

logger = logging.getLogger(__name__)

VALID_METHODS = ["talbot", "dehoog"]

TALBOT_DEGREES = (24, 36)
DEHOOG_TERMS = (20, 28)


def bromwich_invert(transform, t: float, accuracy: float = 1e-7, *, method: str = "talbot",
                    abscissa: float = 0.0) -> Estimate:
    """f(t) from its Laplace transform F(s).

    *abscissa* is the largest real part of a singularity of F. The error estimate is
    the difference between two orders of the same rule.
    """
    if not t > 0.0:
        raise ValueError(f"t must be positive, got {t}")
    if method == "talbot":
        result = _talbot(transform, float(t))
    elif method == "dehoog":
        result = _dehoog(transform, float(t), abscissa)
    else:
        raise ValueError(f"Invalid method '{method}'. Must be one of: {', '.join(VALID_METHODS)}")

    value, error = result
    if not np.all(np.isfinite(value)):
        raise ContourError(f"{method} inversion at t={t:g} produced non-finite values")
    worst = float(np.max(error))
    if worst > accuracy * max(1.0, float(np.max(np.abs(value)))):
        raise ConvergenceError(f"{method} inversion at t={t:g} reached {worst:.3g}, target {accuracy:g}",
                               value=value, error_estimate=error)
    logger.debug(f"{method} inversion at t={t:g}: error {worst:.2g}")
    return result


def _talbot(transform, t: float) -> Estimate:
    ctx = mp_context()
    values = []
    with ctx.workdps(40):
        for degree in TALBOT_DEGREES:
            values.append(ctx.invertlaplace(transform, t, method="talbot", degree=degree))
    value = float(ctx.re(values[-1]))
    error = float(abs(values[-1] - values[0]))
    return Estimate(value, error)


def _dehoog(transform, t: float, abscissa: float) -> Estimate:
    period = 2.0 * t
    m_low, m_high = DEHOOG_TERMS
    # the contour shift makes the aliasing error of the Fourier series about 1e-9
    shift = abscissa - math.log(1e-9) / (2.0 * period)
    nodes = shift + 1j * math.pi * np.arange(2 * m_high + 1) / period
    fp = np.asarray(transform(nodes), dtype=np.complex128)
    if fp.shape[0] != nodes.size:
        raise ValueError(f"transform returned leading dimension {fp.shape[0]}, expected {nodes.size}")

    z = np.exp(1j * math.pi * t / period)
    low = _dehoog_sum(fp[: 2 * m_low + 1], m_low, z)
    high = _dehoog_sum(fp, m_high, z)
    scale = math.exp(shift * t) / period
    value = scale * high.real
    error = scale * np.abs(high.real - low.real)
    if np.ndim(value) == 0:
        return Estimate(float(value), float(error))
    return Estimate(value, error)


def _dehoog_sum(fp: np.ndarray, m: int, z: complex) -> np.ndarray:
    """Diagonal Pade value of the power series sum fp_j z^j (first term halved)."""
    n_terms = 2 * m + 1
    tail = fp.shape[1:]
    e = np.zeros((n_terms, m + 1) + tail, dtype=np.complex128)
    q = np.zeros((n_terms, m) + tail, dtype=np.complex128)

    with np.errstate(divide="ignore", invalid="ignore"):
        # quotient-difference table
        q[0, 0] = fp[1] / (fp[0] / 2.0)
        q[1: 2 * m, 0] = fp[2: 2 * m + 1] / fp[1: 2 * m]
        for r in range(1, m + 1):
            mr = 2 * (m - r)
            e[0: mr + 1, r] = q[1: mr + 2, r - 1] - q[0: mr + 1, r - 1] + e[1: mr + 2, r - 1]
            if r < m:
                mq = 2 * (m - r - 1) + 1
                q[0: mq + 1, r] = q[1: mq + 2, r - 1] * e[1: mq + 2, r] / e[0: mq + 1, r]

        d = np.empty((n_terms,) + tail, dtype=np.complex128)
        d[0] = fp[0] / 2.0
        for r in range(1, m + 1):
            d[2 * r - 1] = -q[0, r - 1]
            d[2 * r] = -e[0, r]

        # continued fraction by forward recurrence
        a_prev, a_cur = np.zeros(tail, dtype=np.complex128), d[0]
        b_prev, b_cur = np.ones(tail, dtype=np.complex128), np.ones(tail, dtype=np.complex128)
        for i in range(1, 2 * m):
            a_prev, a_cur = a_cur, a_cur + d[i] * a_prev * z
            b_prev, b_cur = b_cur, b_cur + d[i] * b_prev * z

        # improved remainder
        brem = (1.0 + (d[2 * m - 1] - d[2 * m]) * z) / 2.0
        rem = -brem * (1.0 - np.sqrt(1.0 + d[2 * m] * z / brem ** 2))
        a_last = a_cur + rem * a_prev
        b_last = b_cur + rem * b_prev
    return a_last / b_last
