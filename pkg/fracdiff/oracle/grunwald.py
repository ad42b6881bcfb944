import logging

import numpy as np
from scipy import special

from fracdiff.core.errors import InsufficientHistoryError

logger = logging.getLogger(__name__)

# Fractional differences on uniform grids starting at the lower terminal of the derivative.


def gl_weights(order: float, count: int) -> np.ndarray:
    """Grunwald-Letnikov weights (-1)^k binom(order, k) by their ratio recurrence."""
    k = np.arange(1, count)
    return np.concatenate([[1.0], np.cumprod(1.0 - (order + 1.0) / k)])


def gl_frac_derivative(samples, order: float, h: float) -> np.ndarray:
    """Riemann-Liouville derivative of the given order at every sample point.

    The samples are f(x_0 + i h) with x_0 the lower terminal. Negative orders give the
    fractional integral. The sum is first-order accurate in h.
    """
    f = np.asarray(samples, dtype=float)
    if f.ndim != 1 or f.size < 2:
        raise InsufficientHistoryError(f"need at least 2 samples on a uniform grid, got shape {f.shape}")
    if order == 0.0:
        raise ValueError("order must be nonzero")
    if not h > 0.0:
        raise ValueError(f"step must be positive, got {h}")

    w = gl_weights(order, f.size)
    return h ** (-order) * np.convolve(w, f)[: f.size]


def l1_weights(order: float, count: int) -> np.ndarray:
    """b_j = (j+1)^{1-order} - j^{1-order} of the L1 scheme."""
    j = np.arange(count, dtype=float)
    return (j + 1.0) ** (1.0 - order) - j ** (1.0 - order)


def caputo_l1_derivative(samples, order: float, h: float) -> np.ndarray:
    """Caputo derivative of order 0 < order < 1 by the L1 formula; zero at the first sample.

    Accuracy is O(h^{2-order}) for smooth data.
    """
    f = np.asarray(samples, dtype=float)
    if f.ndim != 1 or f.size < 2:
        raise InsufficientHistoryError(f"need at least 2 samples on a uniform grid, got shape {f.shape}")
    if not 0.0 < order < 1.0:
        raise ValueError(f"L1 formula needs 0 < order < 1, got {order}")

    steps = np.diff(f)
    b = l1_weights(order, steps.size)
    out = np.zeros_like(f)
    out[1:] = np.convolve(b, steps)[: steps.size] * h ** (-order) / special.gamma(2.0 - order)
    return out
