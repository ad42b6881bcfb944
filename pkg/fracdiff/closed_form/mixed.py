#
# Space-time fractional case with linear drift F(x) = -K x (N = 1, theta = 0, nu = 1)
#
#   rho^(k, s) = sum_n P_n(w(s)) s^{gamma-1} / (s^gamma + n mu K),   w(s) = D~(s) |k|^mu / (K mu)
#
# with Poisson weights P_n(w) = e^-w w^n / n!. For the impulsive kernel w does not depend on s
# and each term inverts to P_n(w) E_gamma(-n mu K t^gamma).
#
# Writing E_gamma(-lam) = int_0^inf M_gamma(u) e^{-lam u} du with the Mainardi function sums the
# series in closed form under the u integral. With c = D |k|^mu / (K mu) and q(tau) = exp(-mu K tau^gamma u),
#
#   impulsive   rho^ = int du M(u) exp(-c (1 - q(t)))
#   power law   rho^ = 1 + int du M(u) int_0^t dt'/t' W(c t'^alpha (1 - q(t - t')))
#
# where W(z) = sum_{j>=1} (-z)^j / (j! Gamma(alpha j)). Inverting in k under the integrals leaves
# the stable density of exp(-|k|^mu) and its analogue for W(|k|^mu), both H(Z) / (mu sqrt(pi) |x|)
# with Z = (|x|/2) a^{-1/mu}. W and the two kernels are tabulated once per parameter set.
#

import functools
import logging
import math

import numpy as np
from scipy import interpolate, special

from fracdiff.core.errors import AdmissibilityError, ConstraintError, SingularPointError, TruncationError
from fracdiff.core.specfun import Estimate, fox_h, mainardi, mittag_leffler
from fracdiff.models.h_params import HParams
from fracdiff.models.model_params import KernelKind, ModelParams

logger = logging.getLogger(__name__)

MIXED_MAX_TERMS = 200
# series stops after two consecutive terms below this fraction of the running sum
SERIES_RTOL = 1e-12

# Gauss-Legendre panels, two rules for the error estimate
_RULES = (16, 24)
_PANEL = 4.0
_LOG_SPAN = 40.0
# u panels on [0, cut-off of M_gamma], plus breakpoints at these multiples of 1 / (mu K t^gamma)
_U_PANELS = 8
_U_REFINE = (0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0)

# density kernels: spline between Z_LOW and Z^-mu = KERNEL_TAIL, expansions outside
_Z_LOW = 1e-5
_KERNEL_TAIL = 1e-3
_MAX_DECADES = 14.0
_TABLE_DENSITY = 200
_LEFT_TERMS = 3
_RIGHT_TERMS = 6

# W: polynomial up to z = 1, spline in w = z^{1/(1+alpha)} until the envelope is below e^-30
_W_TERMS = 30
_W_STEP = 1.0 / 32.0
_W_CUT = 30.0


def _require_mixed(p: ModelParams):
    if p.n_dim != 1 or p.nu != 1.0 or p.theta != 0.0:
        raise AdmissibilityError(f"mixed case needs N = 1, nu = 1, theta = 0, got N={p.n_dim}, "
                                 f"nu={p.nu}, theta={p.theta}")
    if not p.k_drift > 0.0:
        raise ConstraintError(f"mixed case needs a restoring drift K > 0, got {p.k_drift}")
    if not 0.0 < p.mu <= 2.0:
        raise AdmissibilityError(f"mixed case needs 0 < mu <= 2, got {p.mu}")
    if p.kernel_kind is KernelKind.POWER_LAW and not p.alpha_mem < 1.0:
        raise AdmissibilityError(f"power-law kernel needs alpha < 1 for the time-domain series, got {p.alpha_mem}")


def _check_time(t: float):
    if not t > 0.0:
        raise ValueError(f"t must be positive, got {t}")


def _report(est: Estimate, tol: float, label: str) -> Estimate:
    worst = float(np.max(est.error))
    if worst > tol:
        logger.warning(f"{label}: achieved error {worst:.3g} is above {tol:g}")
    return est


# ----------------------------------------------------------------------
# Quadrature nodes
# ----------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _legendre(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(nodes)


def _uniform(a: float, b: float, width: float) -> np.ndarray:
    return np.linspace(a, b, max(1, math.ceil((b - a) / width)) + 1)


def _panels(edges: np.ndarray, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    u, w = _legendre(nodes)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    return (mid[:, None] + half[:, None] * u).ravel(), (half[:, None] * w).ravel()


def _mainardi_cutoff(gamma: float) -> float:
    # M_gamma(u) ~ exp(-b u^{1/(1-gamma)}) for large u
    b = (1.0 - gamma) * gamma ** (gamma / (1.0 - gamma))
    return (_LOG_SPAN / b) ** (1.0 - gamma)


@functools.lru_cache(maxsize=256)
def _subordinator(gamma: float, rate: float, nodes: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Nodes u, weights M_gamma(u) du and the summed error of M; one unit node for gamma = 1.

    rate is the largest mu K tau^gamma that multiplies u in the integrand.
    """
    if gamma == 1.0:
        return np.ones(1), np.ones(1), 0.0
    top = _mainardi_cutoff(gamma)
    extra = [r / rate for r in _U_REFINE if r / rate < top]
    u, w = _panels(np.union1d(np.linspace(0.0, top, _U_PANELS + 1), extra), nodes)
    m = mainardi(gamma, u)
    return u, w * m.value, float(np.sum(w * m.error))


def _time_nodes(t: float, strength: float, p: ModelParams, nodes: int):
    """Nodes t', lags t - t' and weights of dt'/t' on (0, t).

    The integrand grows like strength t'^alpha from t' = 0 and vanishes like
    (t - t')^gamma at t' = t. On (0, t/2] the variable is ln t', cut e^-40 below the
    point where strength t'^alpha = 1. On [t/2, t) it is ln((t/2)/(t - t')), cut e^-40
    below the lag where strength t^alpha mu K lag^gamma = 1.
    """
    alpha, gamma = p.alpha_mem, p.gamma
    half = math.log(0.5 * t)
    low = min(half, -math.log(strength) / alpha) - _LOG_SPAN / alpha
    ua, wa = _panels(_uniform(low, half, _PANEL), nodes)
    head = np.exp(ua)

    crossing = -(math.log(strength * p.mu * p.k_drift) + alpha * math.log(t)) / gamma
    reach = max(0.0, half - crossing) + _LOG_SPAN / gamma
    vb, wb = _panels(_uniform(0.0, reach, _PANEL), nodes)
    lag = 0.5 * t * np.exp(-vb)
    tail = t - lag
    return (np.concatenate([head, tail]), np.concatenate([t - head, lag]),
            np.concatenate([wa, wb * lag / tail]))


def _gap(rate: float, u: np.ndarray, lag, gamma: float) -> np.ndarray:
    """1 - exp(-rate lag^gamma u) on the grid u x lag."""
    return -np.expm1(-rate * np.multiply.outer(u, np.asarray(lag) ** gamma))


# ----------------------------------------------------------------------
# Tabulated kernels
# ----------------------------------------------------------------------

def _power_sum(terms, z: np.ndarray) -> np.ndarray:
    out = np.zeros_like(z)
    for coef, power in terms:
        out += coef * z ** power
    return out


class _DensityKernel:
    """H(Z) of a density kernel from a cubic spline of H / n(Z), n(Z) = Z / (1 + Z^{1+mu}).

    Below Z_LOW and above the table H is its pole expansion in Z^{1+2j} and Z^{-j mu}.
    """

    def __init__(self, params: HParams, mu: float, left, right):
        self.params, self.mu, self.left, self.right = params, mu, left, right
        self.low = math.log(_Z_LOW)
        self.high = min(-math.log10(_KERNEL_TAIL) / mu, _MAX_DECADES) * math.log(10.0)
        count = math.ceil((self.high - self.low) / math.log(10.0) * _TABLE_DENSITY) + 1
        v = np.linspace(self.low, self.high, count)
        h = fox_h(params, np.exp(v), contour="shared")
        self.spline = interpolate.CubicSpline(v, h.value / self._norm(v))

        mid = 0.5 * (v[:-1:16] + v[1::16])
        check = fox_h(params, np.exp(mid), contour="shared")
        ends = np.exp([self.low, self.high])
        seams = np.abs(self.spline([self.low, self.high]) * self._norm(np.log(ends))
                       - [_power_sum(left, ends[:1])[0], _power_sum(right, ends[1:])[0]])
        self.error = float(np.max(np.abs(self.spline(mid) * self._norm(mid) - check.value))
                           + np.max(h.error) + np.max(seams))
        logger.debug(f"density kernel {params}: {count} nodes, error {self.error:.2g}")

    def _norm(self, v):
        return np.exp(v) / (1.0 + np.exp((1.0 + self.mu) * v))

    def tabulated(self, z) -> np.ndarray:
        """1.0 where Z falls inside the spline table, 0.0 elsewhere."""
        with np.errstate(divide="ignore"):
            v = np.log(np.asarray(z, dtype=float))
        return ((v >= self.low) & (v <= self.high)).astype(float)

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        with np.errstate(divide="ignore"):
            v = np.log(z)
        out = np.empty_like(z)
        inner = (v >= self.low) & (v <= self.high)
        out[inner] = self.spline(v[inner]) * self._norm(v[inner])
        below, above = v < self.low, v > self.high
        out[below] = _power_sum(self.left, z[below])
        out[above] = _power_sum(self.right, z[above])
        return out


def _density_params(mu: float, alpha: float | None) -> HParams:
    upper = [(1.0, 1.0 / mu)]
    if alpha is not None:
        upper.append((0.0, alpha / mu))
    return HParams(m=1, n=1, upper=tuple(upper), lower=((0.5, 0.5), (1.0, 0.5)))


@functools.lru_cache(maxsize=32)
def _density_kernel(mu: float, alpha: float | None) -> _DensityKernel:
    """Kernel with Mellin transform Gamma(1/2 + s/2) Gamma(-s/mu) / (Gamma(-s/2) [Gamma(alpha s/mu)])."""
    params = _density_params(mu, alpha)

    def rest(sigma):
        return 1.0 if alpha is None else float(special.rgamma(alpha * sigma / mu))

    # residues at s = -1 - 2j and s = j mu
    left = [(2.0 * (-1) ** j / math.factorial(j) * special.gamma((1 + 2 * j) / mu)
             * special.rgamma((1 + 2 * j) / 2.0) * rest(-1.0 - 2 * j), 1.0 + 2 * j)
            for j in range(_LEFT_TERMS)]
    right = [((-1) ** j * mu / math.factorial(j) * special.gamma(0.5 + 0.5 * j * mu)
              * special.rgamma(-0.5 * j * mu) * rest(j * mu), -j * mu)
             for j in range(1, _RIGHT_TERMS + 1)]
    return _DensityKernel(params, mu, left, right)


def _kernel_for(p: ModelParams) -> _DensityKernel:
    return _density_kernel(p.mu, p.alpha_mem if p.kernel_kind is KernelKind.POWER_LAW else None)


class _WrightKernel:
    """W(z) = sum_{j>=1} (-z)^j / (j! Gamma(alpha j)) for z >= 0.

    W oscillates under an envelope exp(-sigma w), w = z^{1/(1+alpha)}, and is set to zero
    where the envelope is below e^-30.
    """

    def __init__(self, alpha: float):
        self.alpha = alpha
        j = np.arange(1, _W_TERMS + 1)
        self.coef = np.concatenate([[0.0], (-1.0) ** j * np.exp(-special.gammaln(j + 1)) * special.rgamma(alpha * j)])
        sigma = -math.cos(math.pi / (1.0 + alpha)) * (1.0 + alpha) * alpha ** (alpha / (1.0 + alpha))
        self.w_top = _W_CUT / sigma
        w = np.arange(1.0, self.w_top + _W_STEP, _W_STEP)
        params = HParams(m=1, n=0, upper=((0.0, -alpha),), lower=((0.0, 1.0),))
        h = fox_h(params, w ** (1.0 + alpha), contour="shared")
        self.spline = interpolate.CubicSpline(w, h.value)

        mid = 0.5 * (w[:-1:16] + w[1::16])
        check = fox_h(params, mid ** (1.0 + alpha), contour="shared")
        self.error = float(np.max(np.abs(self.spline(mid) - check.value)) + np.max(h.error))
        logger.debug(f"W table for alpha={alpha:g}: {w.size} nodes up to z={self.w_top ** (1.0 + alpha):.3g}, "
                     f"error {self.error:.2g}")

    def __call__(self, z: np.ndarray) -> np.ndarray:
        out = np.zeros_like(z)
        small = z <= 1.0
        out[small] = np.polynomial.polynomial.polyval(z[small], self.coef)
        w = z[~small] ** (1.0 / (1.0 + self.alpha))
        out[~small] = np.where(w <= self.w_top, self.spline(np.minimum(w, self.w_top)), 0.0)
        return out


@functools.lru_cache(maxsize=16)
def _wright_kernel(alpha: float) -> _WrightKernel:
    return _WrightKernel(alpha)


# ----------------------------------------------------------------------
# Series driver
# ----------------------------------------------------------------------

def _sum_series(term, n_min: int, n_max: int, tol: float, label: str) -> Estimate:
    """Sum term(n) until two consecutive terms are negligible; terms may be arrays."""
    total, error, last, small = 0.0, 0.0, math.inf, 0
    for n in range(n_max + 1):
        value, err = term(n)
        total = total + value
        error = error + err
        last = np.abs(value)
        if n >= n_min and np.all(last <= np.maximum(SERIES_RTOL * np.abs(total), 1e-300)):
            small += 1
            if small >= 2:
                logger.debug(f"{label}: {n + 1} terms")
                return Estimate(total, error + last)
        else:
            small = 0
    worst = float(np.max(last))
    if worst > tol:
        raise TruncationError(f"{label}: last of {n_max + 1} terms is {worst:.3g}, above {tol:g}", achieved_bound=worst)
    logger.warning(f"{label}: term budget {n_max + 1} used up, last term {worst:.3g}")
    return Estimate(total, error + last)


def _map(fn, values) -> Estimate:
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        return fn(float(arr))
    out = [fn(float(v)) for v in arr.ravel()]
    return Estimate(np.array([o.value for o in out]).reshape(arr.shape),
                    np.array([o.error for o in out]).reshape(arr.shape))


# ----------------------------------------------------------------------
# Characteristic function
# ----------------------------------------------------------------------

def mixed_charfn(k, t: float, p: ModelParams, *, n_max: int = MIXED_MAX_TERMS, tol: float = 1e-8) -> Estimate:
    """Characteristic function rho^(k, t) for the point source at the origin.

    k may be a scalar or an array. The value at k = 0 is exactly one. The impulsive kernel
    sums the Poisson series and raises TruncationError only when *n_max* terms are used up
    with the last term above *tol*. The power-law kernel integrates the summed series; an
    error estimate above *tol* is logged and returned.
    """
    _require_mixed(p)
    _check_time(t)

    def one(kk: float) -> Estimate:
        c = p.d_coeff * abs(kk) ** p.mu / (p.k_drift * p.mu)
        if c == 0.0:
            return Estimate(1.0, 0.0)
        if p.kernel_kind is KernelKind.IMPULSIVE:
            return _charfn_impulsive(c, t, p, n_max, tol)
        return _report(_charfn_power_law(c, t, p), tol, f"power-law charfn (c={c:.3g})")

    return _map(one, k)


def _charfn_impulsive(w: float, t: float, p: ModelParams, n_max: int, tol: float) -> Estimate:
    log_w = math.log(w)

    def term(n):
        weight = math.exp(n * log_w - w - math.lgamma(n + 1))
        relax = mittag_leffler(p.gamma, 1.0, -n * p.mu * p.k_drift * t ** p.gamma)
        return weight * relax.value, weight * relax.error

    return _sum_series(term, math.ceil(w) + 2, n_max, tol, f"impulsive charfn (w={w:.3g})")


def _charfn_power_law(c: float, t: float, p: ModelParams) -> Estimate:
    kernel = _wright_kernel(p.alpha_mem)
    rate = p.mu * p.k_drift
    sums, error = [], 0.0
    for nodes in _RULES:
        u, wu, m_error = _subordinator(p.gamma, rate * t ** p.gamma, nodes)
        tp, lag, wt = _time_nodes(t, c, p, nodes)
        z = c * _gap(rate, u, lag, p.gamma) * tp ** p.alpha_mem
        inner = kernel(z) @ wt
        sums.append(1.0 + float(wu @ inner))
        error = m_error * float(np.max(np.abs(inner))) + kernel.error * float(wu @ (z > 1.0).astype(float) @ wt)
    return Estimate(sums[1], abs(sums[1] - sums[0]) + error)


def mixed_charfn_laplace(k, s, p: ModelParams, *, n_max: int = 400):
    """Laplace transform in t of the characteristic function.

    s may be an array of complex nodes; the result has shape s.shape + k.shape.
    """
    _require_mixed(p)
    ss = np.asarray(s, dtype=complex)
    kk = np.abs(np.asarray(k, dtype=float))
    w = np.multiply.outer(np.asarray(p.diffusion_laplace(ss), dtype=complex), kk ** p.mu) / (p.k_drift * p.mu)
    sg = np.multiply.outer(ss ** p.gamma, np.ones_like(kk))
    base = np.multiply.outer(ss ** (p.gamma - 1.0), np.ones_like(kk))

    zero = w == 0.0
    log_w = np.log(np.where(zero, 1.0, w))
    total = np.zeros(w.shape, dtype=complex)
    w_max = float(np.max(np.abs(w), initial=0.0))
    for n in range(n_max + 1):
        weight = np.exp(n * log_w - w - special.gammaln(n + 1))
        if n > 0:
            weight = np.where(zero, 0.0, weight)
        term = weight * base / (sg + n * p.mu * p.k_drift)
        total += term
        if n > w_max + 10 and np.max(np.abs(term)) <= 1e-16 * np.max(np.abs(total)):
            break
    else:
        logger.warning(f"Laplace-domain series used all {n_max + 1} terms")
    return total


# ----------------------------------------------------------------------
# Density
# ----------------------------------------------------------------------

def mixed_density(x, t: float, p: ModelParams, *, tol: float = 1e-8) -> Estimate:
    """Density rho(x, t) for x != 0 as a mixture of the kernel H(Z) / (mu sqrt(pi) |x|).

    x = 0 is excluded because of the 1/|x| factor. An error estimate above *tol*
    is logged and returned.
    """
    _require_mixed(p)
    _check_time(t)
    xx = np.asarray(x, dtype=float)
    if np.any(xx == 0.0):
        raise SingularPointError("mixed-case density carries 1/|x| and is not evaluated at x = 0")
    ax = np.abs(xx)
    # Z = base a^{-1/mu} with a = (1 - q) for the impulsive kernel and (1 - q) t'^alpha for the power law
    base = 0.5 * ax * (p.k_drift * p.mu / p.d_coeff) ** (1.0 / p.mu)
    pref = 1.0 / (p.mu * math.sqrt(math.pi) * ax)

    if p.kernel_kind is KernelKind.IMPULSIVE:
        est = _density_impulsive(base, t, p)
    else:
        est = _map(lambda b: _density_power_law(b, t, p), base)
    return _report(Estimate(pref * est.value, pref * est.error), tol, f"mixed density ({xx.size} points)")


def _density_impulsive(base, t: float, p: ModelParams) -> Estimate:
    rate = p.mu * p.k_drift * t ** p.gamma
    if p.gamma == 1.0:
        # a single stable density; direct evaluation keeps relative accuracy
        return fox_h(_density_params(p.mu, None), base * (-math.expm1(-rate)) ** (-1.0 / p.mu))

    kernel = _kernel_for(p)
    sums, error = [], 0.0
    for nodes in _RULES:
        u, wu, m_error = _subordinator(p.gamma, rate, nodes)
        with np.errstate(divide="ignore"):
            spread = (-np.expm1(-rate * u)) ** (-1.0 / p.mu)
        z = np.multiply.outer(base, spread)
        h = kernel(z)
        sums.append(h @ wu)
        error = m_error * np.max(np.abs(h), axis=-1) + kernel.error * (kernel.tabulated(z) @ wu)
    return Estimate(sums[1], np.abs(sums[1] - sums[0]) + error)


def _density_power_law(base: float, t: float, p: ModelParams) -> Estimate:
    kernel = _kernel_for(p)
    rate = p.mu * p.k_drift
    # the integrand turns over where Z = 1, that is (1 - q) t'^alpha = base^mu
    strength = base ** -p.mu
    sums, error = [], 0.0
    for nodes in _RULES:
        u, wu, m_error = _subordinator(p.gamma, rate * t ** p.gamma, nodes)
        tp, lag, wt = _time_nodes(t, strength, p, nodes)
        with np.errstate(divide="ignore"):
            z = base * (_gap(rate, u, lag, p.gamma) * tp ** p.alpha_mem) ** (-1.0 / p.mu)
        inner = kernel(z) @ wt
        sums.append(float(wu @ inner))
        error = m_error * float(np.max(np.abs(inner))) + kernel.error * float(wu @ kernel.tabulated(z) @ wt)
    return Estimate(sums[1], abs(sums[1] - sums[0]) + error)


def stationary_charfn(k, p: ModelParams):
    """Large-time limit exp(-D |k|^mu / (K mu)) of the impulsive-kernel characteristic function."""
    _require_mixed(p)
    return np.exp(-p.d_coeff * np.abs(np.asarray(k, dtype=float)) ** p.mu / (p.k_drift * p.mu))
