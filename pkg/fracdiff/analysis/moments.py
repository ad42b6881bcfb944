import logging
import math
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import interpolate, stats

from fracdiff.core.errors import DomainError, FitWindowError, InsufficientCoverageError
from fracdiff.models.model_params import ModelParams
from fracdiff.models.profile import Profile, ProfileSource
from fracdiff.oracle.quadrature import adaptive_quad

logger = logging.getLogger(__name__)

# Share of the outermost samples used to extrapolate the tail beyond the grid
TAIL_FRACTION = 0.1


class PowerLawFit(NamedTuple):
    slope: float
    intercept: float
    r_squared: float


# ----------------------------------------------------------------------
# Weighted integrals over the half-line
# ----------------------------------------------------------------------

def _tail_mass(x: np.ndarray, y: np.ndarray) -> float:
    """Integral beyond the grid of an exponential or power-law fit to the last samples.

    A profile that ends at exactly zero has no mass beyond the grid. Otherwise the fit uses
    the trailing run of positive samples, which must hold at least four points.
    """
    count = max(4, int(TAIL_FRACTION * x.size))
    xs, ys = x[-count:], y[-count:]
    if ys[-1] == 0.0:
        return 0.0
    positive = ys > 0.0
    run = count if positive.all() else int(np.argmin(positive[::-1]))
    if run < 4:
        raise InsufficientCoverageError(f"profile is not positive over its last samples beyond x={xs[-run - 1]:g}; "
                                        "the tail cannot be extrapolated")
    xs, ys = xs[-run:], ys[-run:]
    log_y = np.log(ys)

    candidates = []
    rate, c_exp = np.polyfit(xs, log_y, 1)
    if rate < 0.0:
        resid = float(np.sum((np.polyval([rate, c_exp], xs) - log_y) ** 2))
        candidates.append((resid, ys[-1] / -rate))
    power, c_pow = np.polyfit(np.log(xs), log_y, 1)
    if power < -1.0 and xs[0] > 0.0:
        resid = float(np.sum((np.polyval([power, c_pow], np.log(xs)) - log_y) ** 2))
        candidates.append((resid, ys[-1] * xs[-1] / (-power - 1.0)))
    if not candidates:
        return math.inf
    return min(candidates)[1]


def _half_line_integral(profile: Profile, order: float) -> tuple[float, float]:
    """(inside, tail) of int_0^inf x^{N-1+order} rho dx for a profile."""
    x, rho = profile.half_line()
    if x.size < 4:
        raise InsufficientCoverageError("profile has fewer than 4 samples on x >= 0")
    power = profile.params.n_dim - 1.0 + order
    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.where(x > 0.0, x ** power, 0.0 if power > 0.0 else 1.0) * rho
    radius = float(x[-1])

    if profile.evaluator is not None:
        inside = adaptive_quad(lambda r: r ** power * profile.evaluator(r), 0.0, radius, tol=1e-9, rtol=1e-9).value
    else:
        inside = float(interpolate.CubicSpline(x, y).integrate(x[0], radius))
        if x[0] > 0.0:
            # gap at the origin by linear extrapolation of the first two samples
            slope = (y[1] - y[0]) / (x[1] - x[0])
            inside += x[0] * (y[0] - 0.5 * slope * x[0])
    return inside, _tail_mass(x, y)


def normalization_check(profile: Profile, tol: float = 1e-6) -> tuple[float, float]:
    """Weighted mass int |x|^{N-1} rho dx over the line and its deviation from one."""
    inside, tail = _half_line_integral(profile, 0.0)
    if not tail <= tol:
        raise InsufficientCoverageError(f"estimated mass beyond x={profile.x_grid[-1]:g} is {tail:.3g}, above {tol:g}",
                                        tail_mass=tail)
    mass = 2.0 * (inside + tail)
    logger.debug(f"normalization at t={profile.t:g}: mass {mass:.12g} (tail {2.0 * tail:.2g})")
    return mass, mass - 1.0


def weighted_moment(profile: Profile, order: float = 2.0) -> float:
    """<|x|^order> in the weighted measure, normalized by the mass."""
    mass_inside, mass_tail = _half_line_integral(profile, 0.0)
    mom_inside, mom_tail = _half_line_integral(profile, order)
    if not (np.isfinite(mom_tail) and np.isfinite(mass_tail)):
        raise InsufficientCoverageError("profile tail is too heavy to extrapolate its moments")
    return (mom_inside + mom_tail) / (mass_inside + mass_tail)


# ----------------------------------------------------------------------
# Fits
# ----------------------------------------------------------------------

def fit_power_law(t, values) -> PowerLawFit:
    """Least-squares line through (log t, log values)."""
    tt = np.asarray(t, dtype=float)
    vv = np.asarray(values, dtype=float)
    if np.any(tt <= 0.0) or np.any(vv <= 0.0):
        raise DomainError("power-law fit needs positive abscissae and values")
    res = stats.linregress(np.log(tt), np.log(vv))
    return PowerLawFit(float(res.slope), float(res.intercept), float(res.rvalue ** 2))


def second_moment_fit(profiles: Sequence[Profile]) -> PowerLawFit:
    """Log-log slope of the weighted second moment against time."""
    if len(profiles) < 5:
        raise FitWindowError(f"second-moment fit needs at least 5 times, got {len(profiles)}")
    times = np.array([pr.t for pr in profiles])
    if times.min() <= 0.0 or times.max() / times.min() < 10.0 * (1.0 - 1e-12):
        raise FitWindowError(f"times must span a decade, got {times.min():g} .. {times.max():g}")
    moments = np.array([weighted_moment(pr, 2.0) for pr in profiles])
    if np.any(moments <= 0.0):
        raise DomainError("second moment is not positive")
    return fit_power_law(times, moments)


def tail_exponent_fit(profile: Profile, window: tuple[float, float]) -> float:
    """Slope of log rho against log |x| for window[0] <= x <= window[1]."""
    lo, hi = window
    if not 0.0 < lo < hi:
        raise FitWindowError(f"fit window must satisfy 0 < lo < hi, got {window}")
    keep = (profile.x_grid >= lo) & (profile.x_grid <= hi)
    x, rho = profile.x_grid[keep], profile.values[keep]
    if x.size < 20:
        raise FitWindowError(f"fit window {window} holds {x.size} samples, need at least 20")
    if np.any(rho <= 0.0):
        raise FitWindowError(f"fit window {window} extends outside the support of the profile")
    slope, _ = np.polyfit(np.log(x), np.log(rho), 1)
    return float(slope)


# ----------------------------------------------------------------------
# Profiles from closed forms
# ----------------------------------------------------------------------

def profile_from_function(fn: Callable, x_grid, t: float, params: ModelParams,
                          source: ProfileSource = ProfileSource.CLOSED_FORM) -> Profile:
    """Sample fn(x) on x_grid; fn may return an Estimate or plain values.

    The resulting profile keeps fn as its evaluator so integrals avoid interpolation.
    """
    x = np.asarray(x_grid, dtype=float)
    out = fn(x)
    if isinstance(out, tuple):
        values, error = out
    else:
        values, error = out, 0.0

    def evaluator(r):
        v = fn(r)
        return float(v[0] if isinstance(v, tuple) else v)

    return Profile(x_grid=x, values=np.broadcast_to(values, x.shape), t=t, params=params, source=source,
                   error_estimate=error, evaluator=evaluator)
