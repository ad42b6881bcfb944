#
# Special functions behind every closed-form solution: Gamma, modified Bessel K,
# Mittag-Leffler, Fox H and the Mainardi function.
#
# Every function returns an Estimate (value, error) so that callers can carry the
# accuracy of each ingredient forward.
#

import functools
import logging
import math
import threading
from typing import NamedTuple

import numpy as np
from mpmath.ctx_mp import MPContext
from scipy import integrate, optimize, special

from fracdiff.core.errors import (
    ContourError,
    ConvergenceError,
    DomainError,
    GammaPoleError,
)
from fracdiff.models.h_params import HParams

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps

# Mittag-Leffler: switch from the power series to the integral representation at |z| = ML_SWITCH
ML_SWITCH = 5.0
# Largest |z|^(1/alpha) for which the power series is attempted
ML_SERIES_LIMIT = 500.0

# Mellin-Barnes integrand is cut where it drops this far (natural log) below its peak
MB_LOG_CUTOFF = 40.0
MB_MAX_HALVINGS = 10
MB_MAX_NODES = 4_000_000
# arguments per contour quadrature call
MB_CHUNK = 64

# Coarse grid along the contour used to pick the abscissa and the cut-off
_COARSE_Y = np.concatenate([np.linspace(0.0, 4.0, 33), np.geomspace(4.25, 4096.0, 200)])
_COARSE_W = np.gradient(_COARSE_Y)


class Estimate(NamedTuple):
    value: float
    error: float


# ----------------------------------------------------------------------
# mpmath contexts
# ----------------------------------------------------------------------

_local = threading.local()


def mp_context() -> MPContext:
    """Return an mpmath context private to the calling thread."""
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = MPContext()
        _local.ctx = ctx
    return ctx


# ----------------------------------------------------------------------
# Gamma and Bessel K
# ----------------------------------------------------------------------

def gamma_fn(x: float) -> Estimate:
    """Gamma function on the real line, by reflection for negative arguments."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise GammaPoleError(f"Gamma has a pole at {x:g}")

    if x > 0.0:
        value = float(special.gamma(x))
    else:
        # Gamma(x) = pi / (sin(pi x) Gamma(1 - x)), with sin(pi x) taken from the distance to the nearest integer
        k = round(x)
        r = x - k
        sin_pix = math.sin(math.pi * r) * (-1.0 if k % 2 else 1.0)
        value = math.pi / (sin_pix * float(special.gamma(1.0 - x)))

    if not np.isfinite(value):
        raise ConvergenceError(f"Gamma({x:g}) overflows double precision", value=value)
    return Estimate(value, 4.0 * EPS * abs(value))


def bessel_k_mod(order: float, x: float) -> Estimate:
    """Modified Bessel function of the second kind K_order(x) for x > 0."""
    if not x > 0.0:
        raise DomainError(f"bessel_k_mod needs x > 0, got {x}")
    value = float(special.kv(order, x))
    if not np.isfinite(value):
        raise ConvergenceError(f"K_{order:g}({x:g}) overflows double precision", value=value)
    return Estimate(value, 1e-14 * abs(value))


# ----------------------------------------------------------------------
# Mittag-Leffler
# ----------------------------------------------------------------------

def mittag_leffler(alpha: float, beta: float, z: float, *, switch: float = ML_SWITCH,
                   precision: int = 0) -> Estimate:
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for real z.

    Small |z| uses the power series summed in raised precision. Negative z with
    0 < alpha < 1 and |z| above *switch* uses the integral representation along
    the positive axis, which has no cancellation. *precision* adds working digits
    to the series. Results are cached per argument tuple; the cache never
    changes a result.
    """
    if not alpha > 0.0:
        raise DomainError(f"mittag_leffler needs alpha > 0, got {alpha}")
    if precision < 0:
        raise DomainError(f"mittag_leffler precision is a count of extra digits, got {precision}")
    return _mittag_leffler(float(alpha), float(beta), float(z), float(switch), int(precision))


@functools.lru_cache(maxsize=1 << 17)
def _mittag_leffler(alpha: float, beta: float, z: float, switch: float, precision: int = 0) -> Estimate:
    if z == 0.0:
        return Estimate(float(special.rgamma(beta)), 0.0)
    if alpha == 1.0 and beta == 1.0:
        value = math.exp(z) if z < 700.0 else math.inf
        if not np.isfinite(value):
            raise ConvergenceError(f"E_1(z) overflows at z={z:g}", value=value)
        return Estimate(value, 2.0 * EPS * value)

    integral_ok = z < 0.0 and alpha < 1.0
    series_ok = abs(z) ** (1.0 / alpha) <= ML_SERIES_LIMIT

    if integral_ok and (abs(z) > switch or not series_ok):
        return _ml_negative_axis(alpha, beta, z)
    if series_ok:
        return _ml_series(alpha, beta, z, precision)
    raise ConvergenceError(
        f"E_{{{alpha:g},{beta:g}}}({z:g}) lies outside the implemented accuracy envelope")


def _ml_series(alpha: float, beta: float, z: float, precision: int = 0) -> Estimate:
    """Power series in raised precision; working digits follow the largest term."""
    az = abs(z)
    n_cap = int(10 + 3.0 * (az ** (1.0 / alpha) + 1.0) / alpha + 80.0 / alpha)
    n = np.arange(n_cap + 1)
    with np.errstate(divide="ignore"):
        log_terms = n * math.log(az) - special.gammaln(alpha * n + beta)
    finite = np.isfinite(log_terms)
    log_max = float(np.max(log_terms[finite], initial=0.0))
    k_peak = int(np.argmax(np.where(finite, log_terms, -np.inf)))

    ctx = mp_context()
    ctx.dps = 20 + precision + max(0, int(log_max / math.log(10.0)) + 1)
    zz = ctx.mpf(z)
    total = ctx.mpf(0)
    power = ctx.mpf(1)
    small = 0
    last = ctx.mpf(0)
    cutoff = ctx.mpf(10) ** (-25)
    for k in range(n_cap + 1):
        term = power * ctx.rgamma(alpha * k + beta)
        total += term
        last = abs(term)
        # stop once past the peak and three consecutive terms are negligible
        if k > max(2, k_peak) and last <= cutoff * max(abs(total), 1):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        power *= zz
    else:
        raise ConvergenceError(f"E_{{{alpha:g},{beta:g}}}({z:g}) series did not settle in {n_cap} terms",
                               value=float(total), error_estimate=float(last))

    value = float(total)
    if not np.isfinite(value):
        raise ConvergenceError(f"E_{{{alpha:g},{beta:g}}}({z:g}) overflows double precision", value=value)
    return Estimate(value, 2.0 * EPS * abs(value) + float(last))


def _ml_negative_axis(alpha: float, beta: float, z: float) -> Estimate:
    """Integral representation for z < 0 and 0 < alpha < 1.

    Valid for beta < 1 + alpha; larger beta is brought into range with
    E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z.
    """
    if beta >= 1.0 + alpha:
        inner = _ml_negative_axis(alpha, beta - alpha, z)
        shift = float(special.rgamma(beta - alpha))
        return Estimate((inner.value - shift) / z, inner.error / abs(z))

    s1 = math.sin(math.pi * (1.0 - beta))
    s2 = math.sin(math.pi * (1.0 - beta + alpha))
    c = math.cos(alpha * math.pi)
    expo = (1.0 - beta) / alpha

    def kernel(chi):
        return (chi ** expo * math.exp(-chi ** (1.0 / alpha))
                * (chi * s1 - z * s2) / (chi * chi - 2.0 * chi * z * c + z * z)) / (alpha * math.pi)

    chi_max = 750.0 ** alpha
    pieces = [(0.0, min(abs(z), chi_max))]
    if abs(z) < chi_max:
        pieces.append((abs(z), chi_max))

    value, error = 0.0, 0.0
    for a, b in pieces:
        v, e, *rest = integrate.quad(kernel, a, b, epsabs=1e-14, epsrel=1e-12, limit=400, full_output=1)
        value += v
        error += e
        if len(rest) > 1 and e > 1e-10:
            raise ConvergenceError(
                f"E_{{{alpha:g},{beta:g}}}({z:g}) integral did not converge: {rest[1]}",
                value=value, error_estimate=error)
    return Estimate(value, error + 2.0 * EPS * abs(value))


# ----------------------------------------------------------------------
# Fox H
# ----------------------------------------------------------------------

def fox_h_strip(params: HParams) -> tuple[float, float]:
    return params.strip()


def fox_h_decay(params: HParams) -> float:
    return params.decay


def _log_theta(params: HParams, s: np.ndarray) -> np.ndarray:
    """log Theta(s) of the Mellin-Barnes integrand, principal branch per factor."""
    out = np.zeros(np.shape(s), dtype=complex)
    for b, B in params.lower[: params.m]:
        out += special.loggamma(b + B * s)
    for a, A in params.upper[: params.n]:
        out += special.loggamma(1.0 - a - A * s)
    for b, B in params.lower[params.m:]:
        out -= _denominator(special.loggamma(1.0 - b - B * s))
    for a, A in params.upper[params.n:]:
        out -= _denominator(special.loggamma(a + A * s))
    return out


def _denominator(lg: np.ndarray) -> np.ndarray:
    # a Gamma pole in the denominator makes Theta vanish
    bad = ~np.isfinite(lg)
    if np.any(bad):
        lg = np.where(bad, np.inf + 0j, lg)
    return lg


def _pole_distance(params: HParams, c: float) -> float:
    lo, hi = params.strip()
    return min(c - lo, hi - c)


def _choose_abscissa(params: HParams, log_z: float) -> float:
    """Abscissa minimizing the L1 norm of the integrand along the vertical line."""
    lo, hi = params.strip()
    decay = params.decay
    reach = 2.0 + 2.0 * math.exp(max(log_z, 0.0) / max(decay, 0.5))
    upper = min(hi, lo + min(reach, 500.0)) if np.isfinite(lo) else hi
    lower = lo if np.isfinite(lo) else upper - min(reach, 500.0)
    if not np.isfinite(upper):
        upper = lower + min(reach, 500.0)
    margin = 1e-3 * (upper - lower)

    def l1(c):
        lt = _log_theta(params, c + 1j * _COARSE_Y).real
        return float(special.logsumexp(lt - c * log_z, b=_COARSE_W))

    res = optimize.minimize_scalar(l1, bounds=(lower + margin, upper - margin), method="bounded",
                                   options={"xatol": 1e-3})
    return float(res.x)


def _shared_abscissae(params: HParams) -> tuple[float, float]:
    """Abscissae for arguments below and above one with z^-c bounded by one on each side."""
    lo, hi = params.strip()
    width = hi - lo
    margin = min(0.5, width / 4.0)
    if np.isfinite(lo):
        c_small = lo + margin
    else:
        c_small = min(-0.5, hi - margin)
    c_large = max(c_small, min(hi - margin, 1.0))
    return c_small, c_large


def _cutoff(params: HParams, c: float) -> float:
    lt = _log_theta(params, c + 1j * _COARSE_Y).real
    keep = np.nonzero(lt > lt.max() - MB_LOG_CUTOFF)[0]
    last = int(keep[-1])
    if last >= len(_COARSE_Y) - 1:
        raise ContourError(f"{params}: integrand does not decay along Re s = {c:g}")
    return float(_COARSE_Y[last + 1])


def _line_integral(params: HParams, c: float, log_z: np.ndarray, rtol: float, log_scale: float):
    """Trapezoid rule on Re s = c, halving the step until successive sums agree."""
    y_max = _cutoff(params, c)
    d = _pole_distance(params, c)
    span = float(np.max(np.abs(log_z))) if log_z.size else 0.0
    h = min(0.5, d / 4.0, 1.0 / max(1.0, span))

    y = np.arange(0.0, y_max + h, h)
    lt = _log_theta(params, c + 1j * y)
    peak = float(np.max(lt.real))

    def block(y_nodes, lt_nodes):
        amp = np.exp(lt_nodes - peak)
        phase = np.exp(-1j * np.outer(log_z, y_nodes))
        return (phase * amp).real.sum(axis=1), np.abs(amp).sum()

    s_all, a_all = block(y, lt)
    f0, _ = block(y[:1], lt[:1])
    total = h * (s_all - 0.5 * f0)
    l1 = h * (a_all - 0.5 * float(np.abs(np.exp(lt[0] - peak))))

    err = np.full_like(total, np.inf)
    for _ in range(MB_MAX_HALVINGS):
        mid = y + 0.5 * h
        if log_z.size * mid.size > MB_MAX_NODES:
            break
        s_mid, a_mid = block(mid, _log_theta(params, c + 1j * mid))
        refined = 0.5 * total + 0.5 * h * s_mid
        l1 = 0.5 * l1 + 0.5 * h * a_mid
        err = np.abs(refined - total)
        total = refined
        h *= 0.5
        y = np.sort(np.concatenate([y, mid]))
        if np.all(err <= rtol * np.abs(total) + 1e-15 * l1):
            break

    expo = peak - c * log_z + log_scale
    if np.any(expo > 700.0):
        raise ConvergenceError(f"{params}: value overflows double precision")
    scale = np.exp(expo) / np.pi
    value = total * scale
    error = (err + 1e-15 * l1) * scale
    if np.any(err > max(rtol, 1e-6) * np.abs(total) + 1e-12 * l1):
        raise ConvergenceError(f"{params}: contour quadrature did not converge on Re s = {c:g}",
                               value=value, error_estimate=error)
    return value, error


def _chunked(params: HParams, c: float, log_z: np.ndarray, rtol: float, log_scale: float):
    """_line_integral over sorted chunks of arguments so the node budget holds per chunk."""
    order = np.argsort(log_z)
    value = np.empty_like(log_z)
    error = np.empty_like(log_z)
    for start in range(0, order.size, MB_CHUNK):
        part = order[start:start + MB_CHUNK]
        value[part], error[part] = _line_integral(params, c, log_z[part], rtol, log_scale)
    return value, error


def fox_h(params: HParams, z, *, contour: str = "saddle", rtol: float = 1e-10, log_scale: float = 0.0) -> Estimate:
    """Fox H-function for real positive arguments.

    *z* may be a scalar or an array. contour="saddle" picks one contour per
    half-decade of arguments and gives relative accuracy; contour="shared" uses
    one contour for z <= 1 and one for z > 1 and gives absolute accuracy, which
    is what long series of H-functions need. The result is multiplied by
    exp(log_scale) before leaving log space.
    """
    lo, hi = params.strip()
    if not lo < hi:
        raise ContourError(f"{params}: pole families overlap (strip {lo:g} .. {hi:g})")
    if params.decay <= 0.0:
        raise ContourError(f"{params}: decay parameter {params.decay:g} is not positive")

    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(~(zz > 0.0)):
        raise DomainError("fox_h needs z > 0")

    log_z = np.log(zz)
    value = np.empty_like(zz)
    error = np.empty_like(zz)

    if contour == "saddle":
        buckets = np.floor(2.0 * log_z / math.log(10.0)).astype(int)
        for key in np.unique(buckets):
            idx = np.nonzero(buckets == key)[0]
            center = (key + 0.5) * math.log(10.0) / 2.0
            c = _choose_abscissa(params, center)
            value[idx], error[idx] = _chunked(params, c, log_z[idx], rtol, log_scale)
    elif contour == "shared":
        c_small, c_large = _shared_abscissae(params)
        for mask, c in ((log_z <= 0.0, c_small), (log_z > 0.0, c_large)):
            idx = np.nonzero(mask)[0]
            if idx.size:
                value[idx], error[idx] = _chunked(params, c, log_z[idx], rtol, log_scale)
    else:
        raise ValueError(f"Invalid contour mode '{contour}'. Must be one of: saddle, shared")

    if scalar:
        return Estimate(float(value[0]), float(error[0]))
    return Estimate(value, error)


# ----------------------------------------------------------------------
# Mainardi function
# ----------------------------------------------------------------------

def mainardi(nu: float, u) -> Estimate:
    """Mainardi function M_nu(u) = sum_j (-u)^j / (j! Gamma(1 - nu - nu j)) for u >= 0.

    M_nu is a probability density on u > 0 with E_nu(-lam) = int_0^inf M_nu(u) e^{-lam u} du,
    which turns Mittag-Leffler relaxations into exponentials under an integral. It is the
    H-function H^{1,0}_{1,1}[u | (1 - nu, nu); (0, 1)], evaluated with absolute accuracy.
    M_{1/2}(u) = exp(-u^2/4) / sqrt(pi).
    """
    if not 0.0 < nu < 1.0:
        raise DomainError(f"mainardi needs 0 < nu < 1, got {nu}")
    uu = np.asarray(u, dtype=float)
    if np.any(~(uu >= 0.0)):
        raise DomainError("mainardi needs u >= 0")

    value = np.full(uu.shape, float(special.rgamma(1.0 - nu)))
    error = np.zeros(uu.shape)
    positive = uu > 0.0
    if np.any(positive):
        params = HParams(m=1, n=0, upper=((1.0 - nu, nu),), lower=((0.0, 1.0),))
        h = fox_h(params, uu[positive], contour="shared")
        value[positive], error[positive] = h.value, h.error
    if uu.ndim == 0:
        return Estimate(float(value), float(error))
    return Estimate(value, error)
