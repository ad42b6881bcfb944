import logging
import math

import numpy as np

from fracdiff.core.specfun import Estimate

logger = logging.getLogger(__name__)


def _panel_rule(k_max: float, panel: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    count = max(1, math.ceil(k_max / panel))
    edges = np.linspace(0.0, k_max, count + 1)
    u, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    k = (mid[:, None] + half[:, None] * u[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return k, weights


def fourier_invert_even(charfn, x, k_max: float, nodes: int = 16) -> Estimate:
    """rho(x) = (1/pi) int_0^k_max phi(k) cos(k x) dk for an even characteristic function.

    *charfn* takes an array of k and returns an array of values. Panels are short
    enough to resolve cos(k x) at the largest |x|; the error estimate compares the
    Gauss-Legendre rule with *nodes* and with nodes + 8 points per panel and does
    not include the truncation at k_max.
    """
    xx = np.atleast_1d(np.asarray(x, dtype=float))
    panel = min(1.0, math.pi / (2.0 * max(1.0, float(np.max(np.abs(xx))))))

    results = []
    for n in (nodes, nodes + 8):
        k, w = _panel_rule(k_max, panel, n)
        phi = np.asarray(charfn(k), dtype=float)
        results.append((np.cos(np.outer(xx, k)) * (w * phi)).sum(axis=1) / math.pi)

    value = results[1]
    error = np.abs(results[1] - results[0])
    logger.debug(f"cosine inversion on [0, {k_max:g}]: max rule difference {float(error.max()):.2g}")
    if np.ndim(x) == 0:
        return Estimate(float(value[0]), float(error[0]))
    return Estimate(value, error)
