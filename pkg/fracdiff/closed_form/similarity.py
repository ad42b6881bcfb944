#
# Self-similar solutions of the nonlinear fractional equation
#
#   rho(x, t) = phi(t)^-N rho_bar(|x| / phi(t)),   rho_bar(z) = A z^p (1 + b z)^-q
#
# with p = (mu+theta)(1+mu+theta)/(1-2mu-theta) and q = (1-mu)(1+mu+theta)/(1-2mu-theta).
# Region "bounded-support" (b = -1) lives on |z| <= 1, region "infinite-support" (b = +1)
# on the whole line with a power-law tail |z|^-(1+mu+theta).
#

import logging
import math

import numpy as np
from scipy import special

from fracdiff.core.errors import (
    DegenerateDenominatorError,
    DomainError,
    RegionError,
)
from fracdiff.core.specfun import gamma_fn
from fracdiff.models.model_params import ModelParams
from fracdiff.models.scaled_spec import Region, ScaledSolutionSpec

logger = logging.getLogger(__name__)


def _denominators(mu: float, theta: float) -> tuple[float, float]:
    den = 1.0 - 2.0 * mu - theta
    tail = 1.0 + mu + theta
    if den == 0.0:
        raise DegenerateDenominatorError(f"1 - 2 mu - theta vanishes at mu={mu}, theta={theta}")
    if tail == 0.0:
        raise DegenerateDenominatorError(f"1 + mu + theta vanishes at mu={mu}, theta={theta}")
    return den, tail


def scaled_exponents(mu: float, theta: float) -> tuple[float, float, float]:
    """(alpha_s, beta_s, nu_s) of the similarity ansatz; all three vanish at mu = 2."""
    den, tail = _denominators(mu, theta)
    alpha_s = (2.0 - mu) * (mu + theta) / den
    beta_s = -(mu - 1.0) * (mu - 2.0) / den
    nu_s = (2.0 - mu) / tail
    # mu = 2 would otherwise report -0.0
    return alpha_s + 0.0, beta_s + 0.0, nu_s + 0.0


def profile_powers(mu: float, theta: float) -> tuple[float, float]:
    """Powers (p, q) of rho_bar(z) = A z^p (1 + b z)^-q."""
    den, tail = _denominators(mu, theta)
    return (mu + theta) * tail / den, (1.0 - mu) * tail / den


def check_region(mu: float, theta: float, region: Region | str, n_dim: int = 1) -> Region:
    region = Region(region)
    if region is Region.BOUNDED_SUPPORT:
        if not (mu < -1.0 - theta and theta >= 0.0):
            raise RegionError(f"bounded-support region needs mu < -1 - theta and theta >= 0, "
                              f"got mu={mu}, theta={theta}")
    else:
        if not (0.0 < mu < 0.5 and 0.0 <= theta < 0.5 - mu):
            raise RegionError(f"infinite-support region needs 0 < mu < 1/2 and 0 <= theta < 1/2 - mu, "
                              f"got mu={mu}, theta={theta}")
        if n_dim >= 1.0 + mu + theta:
            raise RegionError(f"infinite-support solution is not normalizable for N={n_dim} "
                              f"(needs N < 1 + mu + theta = {1.0 + mu + theta:g})")
    return region


def norm_amplitude(mu: float, theta: float, region: Region | str, n_dim: int = 1) -> float:
    """Amplitude A making the weighted integral of rho_bar over the line equal to one.

    Both regions reduce to Beta integrals: 2 A B(p+N, 1-q) on the unit interval and
    2 A B(p+N, q-p-N) on the half-line.
    """
    region = check_region(mu, theta, region, n_dim)
    p, q = profile_powers(mu, theta)
    if region is Region.BOUNDED_SUPPORT:
        first, second = p + n_dim, 1.0 - q
    else:
        first, second = p + n_dim, q - p - n_dim
    return math.exp(-math.log(2.0) - float(special.betaln(first, second)))


def similarity_constant(alpha_s: float, beta_s: float, nu_s: float, amplitude: float) -> float:
    """k fixed by the amplitude: A^{nu-1} = -k Gamma(-beta)/Gamma(alpha+1)."""
    return -amplitude ** (nu_s - 1.0) * gamma_fn(alpha_s + 1.0).value / gamma_fn(-beta_s).value


def _check_model(spec: ScaledSolutionSpec, p: ModelParams):
    if (p.mu, p.theta, p.n_dim) != (spec.mu, spec.theta, spec.n_dim):
        raise RegionError(f"model (mu={p.mu}, theta={p.theta}, N={p.n_dim}) does not match the similarity "
                          f"solution (mu={spec.mu}, theta={spec.theta}, N={spec.n_dim})")


# ----------------------------------------------------------------------
# Scale function
# ----------------------------------------------------------------------

def phi_scale(t, spec: ScaledSolutionSpec, p: ModelParams):
    """phi(t) solving phi'/phi + K = k D phi^-xi with phi(0) = phi0.

    u = phi^xi obeys the linear equation u' = -xi K u + xi k D, so
    u(t) = phi0^xi e^{-xi K t} + (k D / K)(1 - e^{-xi K t}).
    """
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0.0):
        raise DomainError("phi_scale needs t >= 0")
    xi = spec.xi
    kd = spec.k_const * p.d_coeff
    u0 = spec.phi0 ** xi
    if p.k_drift == 0.0:
        u = u0 + xi * kd * tt
    else:
        decay = -xi * p.k_drift * tt
        u = u0 * np.exp(decay) - kd / p.k_drift * np.expm1(decay)
    if np.any(u <= 0.0):
        raise DomainError(f"scale function leaves its domain: phi^xi reaches {float(np.min(u)):.3g} <= 0")
    phi = u ** (1.0 / xi)
    return float(phi) if phi.ndim == 0 else phi


def phi_residual(t: float, spec: ScaledSolutionSpec, p: ModelParams, h: float = 1e-4) -> float:
    """Residual phi' + K phi - k D phi^{1-xi} with phi' from central differences."""
    phi = phi_scale(t, spec, p)
    lo = max(t - h, 0.0)
    slope = (phi_scale(t + h, spec, p) - phi_scale(lo, spec, p)) / (t + h - lo)
    return slope + p.k_drift * phi - spec.k_const * p.d_coeff * phi ** (1.0 - spec.xi)


# ----------------------------------------------------------------------
# Profiles
# ----------------------------------------------------------------------

def scaled_profile(z, spec: ScaledSolutionSpec):
    """rho_bar(|z|), zero outside the support."""
    zz = np.abs(np.asarray(z, dtype=float))
    pw, qw = profile_powers(spec.mu, spec.theta)
    base = 1.0 + spec.b_sign * zz
    inside = zz < spec.support
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.where(inside, spec.amplitude * zz ** pw * np.where(inside, base, 1.0) ** (-qw), 0.0)
    return float(value) if value.ndim == 0 else value


def scaled_solution(x, t: float, spec: ScaledSolutionSpec, p: ModelParams):
    """phi(t)^-N rho_bar(|x|/phi(t)); x may be a scalar or an array."""
    _check_model(spec, p)
    phi = phi_scale(t, spec, p)
    z = np.abs(np.asarray(x, dtype=float)) / phi
    return scaled_profile(z, spec) / phi ** spec.n_dim


def power_law_derivative(x, alpha: float, beta: float, a: float, b: float):
    """Riemann-Liouville derivative of order alpha + beta + 1 of x^alpha (a + b x)^beta.

    Closed form a^d Gamma(alpha+1)/Gamma(-beta) x^{alpha-d} (a + b x)^{beta-d}, d = alpha + beta + 1.
    """
    order = alpha + beta + 1.0
    xx = np.asarray(x, dtype=float)
    coeff = a ** order * gamma_fn(alpha + 1.0).value / gamma_fn(-beta).value
    return coeff * xx ** (alpha - order) * (a + b * xx) ** (beta - order)


def similarity_residual(z, spec: ScaledSolutionSpec, p: ModelParams, h: float = 1e-3, *,
                        method: str = "auto"):
    """Residual z^{N-1-theta} D^{mu-1}[rho_bar^nu](z) + k z^N rho_bar(z) at the points z.

    method="gl" takes the derivative from the Grunwald-Letnikov sum on a grid of step h
    starting at 0; "analytic" uses the closed-form power-law derivative. "auto" picks gl
    for the infinite-support region and analytic for the bounded one, where the integral
    of rho_bar^nu from 0 diverges.
    """
    from fracdiff.oracle.grunwald import gl_frac_derivative

    _check_model(spec, p)
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(zz <= 0.0) or np.any(zz >= spec.support):
        raise DomainError("similarity residual is evaluated inside the support, away from z = 0")
    if method == "auto":
        method = "gl" if spec.b_sign > 0 else "analytic"

    scale = spec.amplitude ** spec.nu_s
    if method == "analytic":
        deriv = scale * power_law_derivative(zz, spec.alpha_s, spec.beta_s, 1.0, float(spec.b_sign))
    elif method == "gl":
        if spec.b_sign < 0:
            raise DomainError("Grunwald-Letnikov residual needs the infinite-support region")
        grid = h * np.arange(int(math.ceil(zz.max() / h)) + 2)
        with np.errstate(divide="ignore", invalid="ignore"):
            samples = scale * grid ** spec.alpha_s * (1.0 + grid) ** spec.beta_s
        samples[0] = 0.0 if spec.alpha_s > 0.0 else samples[1]
        deriv = np.interp(zz, grid, gl_frac_derivative(samples, spec.mu - 1.0, h))
    else:
        raise ValueError(f"Invalid method '{method}'. Must be one of: auto, gl, analytic")

    residual = zz ** (spec.n_dim - 1.0 - spec.theta) * deriv + spec.k_const * zz ** spec.n_dim * scaled_profile(zz, spec)
    logger.debug(f"similarity residual ({method}, h={h:g}): max {float(np.max(np.abs(residual))):.3g}")
    return residual


# ----------------------------------------------------------------------
# Tsallis mapping
# ----------------------------------------------------------------------

def tsallis_q(mu: float, theta: float) -> float:
    """Entropic index q = (3+mu+theta)/(1+mu+theta) with the same power-law tail."""
    tail = 1.0 + mu + theta
    if tail == 0.0:
        raise DegenerateDenominatorError(f"1 + mu + theta vanishes at mu={mu}, theta={theta}")
    return (3.0 + mu + theta) / tail


def tsallis_tail_exponent(mu: float, theta: float) -> float:
    """Tail exponent 2/(q - 1), which equals 1 + mu + theta."""
    return 2.0 / (tsallis_q(mu, theta) - 1.0)
