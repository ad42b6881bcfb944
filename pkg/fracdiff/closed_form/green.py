#
# Propagators of the radial equation with mu = 2, nu = 1
#
#   d^gamma rho/dt^gamma = int_0^t D(t - t') x^{1-N} d/dx (x^{N-1-theta} d rho(t')/dx) dt'
#
# expressed through H^{2,0}_{1,2} of the similarity variable |x|^{2+theta} / ((2+theta)^2 D t^kappa),
# where kappa is gamma for an impulsive kernel and gamma + alpha for a power-law kernel.
#

import logging
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from fracdiff.core.errors import (
    AdmissibilityError,
    ConstraintError,
    DomainError,
    SingularPointError,
)
from fracdiff.core.specfun import Estimate, fox_h, gamma_fn, mp_context
from fracdiff.models.green_params import LaplaceGreenParams
from fracdiff.models.h_params import HParams
from fracdiff.models.model_params import KernelKind, ModelParams
from fracdiff.oracle.quadrature import adaptive_quad

logger = logging.getLogger(__name__)

# Below this H-argument the stretched-exponential tail is not yet a good approximation
ASYMPTOTIC_THRESHOLD = 10.0


class AsymptoticEstimate(NamedTuple):
    value: float
    argument: float
    in_regime: bool


@dataclass(frozen=True)
class PointMass:
    """Initial datum weight * |x|^{1-N} delta(x - position), kept symbolic."""

    position: float = 0.0
    weight: float = 1.0


# ----------------------------------------------------------------------
# Parameter checks
# ----------------------------------------------------------------------

def _require_radial(p: ModelParams, kernel: KernelKind | None):
    if p.mu != 2.0 or p.nu != 1.0:
        raise AdmissibilityError(f"propagator needs mu = 2 and nu = 1, got mu={p.mu}, nu={p.nu}")
    if kernel is not None and p.kernel_kind is not kernel:
        raise AdmissibilityError(f"propagator needs a {kernel.value} kernel, got {p.kernel_kind.value}")
    if 2.0 + p.theta <= 0.0:
        raise AdmissibilityError(f"2 + theta must be positive, got {2.0 + p.theta}")


def _check_time(t: float):
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t}")


def _scale(t: float, p: ModelParams, order: float) -> float:
    return (2.0 + p.theta) ** 2 * p.d_coeff * t ** order


def _h_params(p: ModelParams, order: float, shift: float = 0.0) -> HParams:
    width = 2.0 + p.theta
    if order >= 2.0:
        raise AdmissibilityError(f"time order {order:g} must stay below 2 for the H-function to converge")
    return HParams(m=2, n=0,
                   upper=((1.0 - p.n_dim * order / width, order),),
                   lower=((shift, 1.0), ((width - p.n_dim) / width, 1.0)))


def _evaluate(x, t: float, p: ModelParams, order: float, params: HParams, log_norm: float) -> Estimate:
    """log_norm + log H(|x|^{2+theta}/S) - N/(2+theta) log S, returned linearly."""
    width = 2.0 + p.theta
    scale = _scale(t, p, order)
    log_pref = log_norm - p.n_dim / width * math.log(scale)

    ax = np.abs(np.asarray(x, dtype=float))
    scalar = ax.ndim == 0
    ax = np.atleast_1d(ax)
    value = np.empty_like(ax)
    error = np.empty_like(ax)

    at_origin = ax == 0.0
    if np.any(at_origin):
        value[at_origin], error[at_origin] = _origin_value(params, log_pref)
    rest = ~at_origin
    if np.any(rest):
        arg = ax[rest] ** width / scale
        h = fox_h(params, arg, log_scale=log_pref)
        value[rest], error[rest] = h.value, h.error

    if scalar:
        return Estimate(float(value[0]), float(error[0]))
    return Estimate(value, error)


def _is_gamma_pole(v: float) -> bool:
    return v <= 1e-12 and abs(v - round(v)) <= 1e-12


def _origin_value(params: HParams, log_pref: float) -> tuple[float, float]:
    """Limit z -> 0 of exp(log_pref) H(z), read off the rightmost pole that survives.

    Theta(s) = Gamma(shift + s) Gamma(lam + s) / Gamma(a + kappa s). A pole of the
    numerator where 1/Gamma(a + kappa s) vanishes cancels; H then follows the next one.
    """
    (shift, _), (lam, _) = params.lower
    (a, kappa), = params.upper
    depth = math.ceil(max(0.0, -shift, -lam)) + 2
    poles = sorted({-shift - j for j in range(depth)} | {-lam - j for j in range(depth)}, reverse=True)
    for s in poles:
        if s < -1e-12:
            # H vanishes like z^-s (times powers of log z)
            return 0.0, 0.0
        hits = [b for b in (shift, lam) if _is_gamma_pole(b + s)]
        cancelled = _is_gamma_pole(a + kappa * s)
        order = len(hits) - cancelled
        if order <= 0:
            continue
        if s > 1e-12 or order > 1:
            raise SingularPointError("propagator diverges at x = 0 for these parameters")
        # simple pole at s = 0: leading Laurent coefficients of each Gamma factor
        residue = math.prod((-1) ** round(-b) / math.factorial(round(-b)) for b in hits)
        if len(hits) == 1:
            residue *= gamma_fn(lam if _is_gamma_pole(shift) else shift).value
        if cancelled:
            j = round(-a)
            residue *= (-1) ** j * math.factorial(j) * kappa
        else:
            residue /= gamma_fn(a).value
        value = residue * math.exp(log_pref)
        return value, 1e-14 * abs(value)
    return 0.0, 0.0


# ----------------------------------------------------------------------
# Propagators
# ----------------------------------------------------------------------

def green_case1(x, t: float, p: ModelParams) -> Estimate:
    """Propagator for an impulsive kernel; x may be a scalar or an array."""
    _require_radial(p, KernelKind.IMPULSIVE)
    _check_time(t)
    return _green(x, t, p, p.gamma)


def green_case2(x, t: float, p: ModelParams) -> Estimate:
    """Propagator for the power-law kernel D t^{alpha-1}/Gamma(alpha).

    Identical to the impulsive case with the time order gamma replaced by gamma + alpha.
    """
    _require_radial(p, KernelKind.POWER_LAW)
    _check_time(t)
    return _green(x, t, p, p.gamma + p.alpha_mem)


def propagator_h_params(p: ModelParams) -> HParams:
    """H-function of the propagator, in the variable |x|^{2+theta} / ((2+theta)^2 D t^kappa)."""
    _require_radial(p, None)
    return _h_params(p, p.effective_order)


def propagator_scale(x, t: float, p: ModelParams):
    """Similarity variable |x|^{2+theta} / ((2+theta)^2 D t^kappa) and the factor C with C G = H of it."""
    _check_time(t)
    width = 2.0 + p.theta
    scale = _scale(t, p, p.effective_order)
    factor = 2.0 * gamma_fn(p.n_dim / width).value / width * scale ** (p.n_dim / width)
    return np.abs(np.asarray(x, dtype=float)) ** width / scale, factor


def _green(x, t: float, p: ModelParams, order: float) -> Estimate:
    width = 2.0 + p.theta
    log_norm = math.log(width / 2.0) - math.log(gamma_fn(p.n_dim / width).value)
    return _evaluate(x, t, p, order, _h_params(p, order), log_norm)


def green_drift_power(x, t: float, p: ModelParams) -> Estimate:
    """Propagator with the drift F(x) = K x |x|^{a-1}, solvable when a + theta + 1 = 0.

    The Gamma prefactor leaves a weighted mass 1/Gamma((3+theta-N)/(2+theta)), which
    is one only for N = 1; the value is divided by it so every N is normalized.
    """
    _require_radial(p, KernelKind.IMPULSIVE)
    _check_time(t)
    if p.theta == 0.0:
        raise ConstraintError("drift solution needs theta != 0")
    if p.drift_exponent is None:
        raise ConstraintError("drift solution needs drift_exponent = -theta - 1, got none")
    if abs(p.drift_exponent + p.theta + 1.0) > 1e-12:
        raise ConstraintError(f"drift_exponent + theta + 1 must vanish, got {p.drift_exponent + p.theta + 1.0:g}")

    width = 2.0 + p.theta
    shift = p.k_drift / (width * p.d_coeff)
    first = (p.n_dim + p.k_drift / p.d_coeff) / width
    if first <= 0.0:
        raise AdmissibilityError(f"(N + K/D)/(2+theta) must be positive, got {first:g}")

    log_norm = math.log(width / 2.0) - math.log(gamma_fn(first).value)
    params = _h_params(p, p.gamma, shift=shift)
    logger.debug(f"drift propagator {params}, raw mass {drift_mass(p):.12g}")
    return _evaluate(x, t, p, p.gamma, params, log_norm)


def drift_mass(p: ModelParams) -> float:
    """Weighted mass of the drift solution before normalization."""
    second = (3.0 + p.theta - p.n_dim) / (2.0 + p.theta)
    if second <= 0.0 and second == math.floor(second):
        return 0.0
    return 1.0 / gamma_fn(second).value


def green_case1_moment(order: float, t: float, p: ModelParams, drift: bool = False) -> float:
    """Exact normalized weighted moment <|x|^order> of a propagator.

    From the Mellin transform of the H-function: int v^{s-1} H(v) dv = Theta(s).
    """
    _check_time(t)
    width = 2.0 + p.theta
    kappa = p.effective_order
    r = order / width
    nu = p.n_dim / width
    first = (p.n_dim + p.k_drift / p.d_coeff) / width if drift else nu
    ratio = (math.lgamma(first + r) - math.lgamma(first)
             + math.lgamma(1.0 + r) - math.lgamma(1.0 + kappa * r))
    return _scale(t, p, kappa) ** r * math.exp(ratio)


# ----------------------------------------------------------------------
# Asymptotics and derived quantities
# ----------------------------------------------------------------------

def asymptotic_case1(x: float, t: float, p: ModelParams) -> AsymptoticEstimate:
    """Stretched-exponential large-|x| form of the propagator."""
    _require_radial(p, None)
    _check_time(t)
    ax = abs(float(x))
    if ax == 0.0:
        raise DomainError("asymptotic form is not defined at x = 0")

    width = 2.0 + p.theta
    kappa = p.effective_order
    n = p.n_dim
    scale = _scale(t, p, kappa)
    arg = ax ** width / scale
    g = 2.0 - kappa

    log_value = (math.log(width / 2.0) - math.lgamma(n / width)
                 - 0.5 * math.log(g)
                 + (n * kappa / (width * g) - 0.5) * math.log(kappa)
                 - n / (width * g) * math.log(scale)
                 + n * (kappa - 1.0) / g * math.log(ax)
                 - g * kappa ** (kappa / g) * arg ** (1.0 / g))

    in_regime = arg >= ASYMPTOTIC_THRESHOLD
    if not in_regime:
        logger.warning(f"asymptotic form used at H-argument {arg:.3g} below {ASYMPTOTIC_THRESHOLD:g}")
    return AsymptoticEstimate(math.exp(log_value), arg, in_regime)


def moment_exponent(p: ModelParams) -> tuple[float, str]:
    """Second-moment exponent 2 gamma/(2+theta) and the diffusion regime it implies."""
    width = 2.0 + p.theta
    if width <= 0.0:
        raise AdmissibilityError(f"2 + theta must be positive, got {width}")
    kappa = 2.0 * p.gamma / width
    if abs(kappa - 1.0) <= 1e-12:
        return kappa, "normal"
    return kappa, "sub" if kappa < 1.0 else "super"


# ----------------------------------------------------------------------
# Laplace domain and general initial data
# ----------------------------------------------------------------------

def green_laplace(x: float, s, p: ModelParams):
    """Laplace transform in t of the propagator, evaluated in mpmath."""
    _require_radial(p, None)
    lp = LaplaceGreenParams.from_params(p)
    ctx = mp_context()
    ax = ctx.mpf(abs(float(x)))
    if ax == 0:
        raise SingularPointError("Laplace-domain propagator is evaluated at x != 0 only")
    a = lp.a_of_s(s)
    return lp.c_of_s(s) * ax ** (lp.delta * lp.v) * ctx.besselk(lp.lambda_, 2 * a * ax ** lp.v)


def solve_from_green(initial, green: Callable, x: float, t: float, *, n_dim: int = 1,
                     support: tuple[float, float] = (-np.inf, np.inf), tol: float = 1e-10) -> Estimate:
    """Solution for general initial data: int |x'|^{N-1} rho0(x') G(x - x', t) dx'.

    *initial* is a PointMass or a callable density. *green* is called as
    green(x, t) and may return an Estimate or a plain number.
    """
    if isinstance(initial, PointMass):
        g = green(x - initial.position, t)
        value, error = g if isinstance(g, tuple) else (float(g), 0.0)
        return Estimate(initial.weight * value, abs(initial.weight) * error)

    def kernel_value(u):
        g = green(u, t)
        return g[0] if isinstance(g, tuple) else g

    def integrand(xp):
        return abs(xp) ** (n_dim - 1) * initial(xp) * kernel_value(x - xp)

    a, b = support
    value, error = 0.0, 0.0
    # split at the kernel's cusp
    for lo, hi in ((a, min(b, x)), (max(a, x), b)):
        if lo < hi:
            part = adaptive_quad(integrand, lo, hi, tol=tol)
            value += part.value
            error += part.error
    return Estimate(value, error)
