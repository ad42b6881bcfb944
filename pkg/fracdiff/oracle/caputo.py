#
# Implicit L1 finite-volume solver for the radial time-fractional equation
#
#   d^gamma rho/dt^gamma = int_0^t D(t - t') x^{1-N} d/dx (x^{N-1-theta} d rho(t')/dx) dt'
#
# on [0, R] with zero flux at both ends. Cells are centered, so x^-theta is never
# evaluated at the origin, and the discrete weighted mass is conserved exactly.
#

import logging
from typing import Callable

import numpy as np
from scipy import sparse, special
from scipy.sparse import linalg

from fracdiff.core.errors import AdmissibilityError, StabilityError
from fracdiff.models.grid_spec import GridSpec
from fracdiff.models.model_params import KernelKind, ModelParams
from fracdiff.models.profile import Profile, ProfileSource
from fracdiff.oracle.grunwald import l1_weights

logger = logging.getLogger(__name__)

# Width of the Gaussian stand-in for a point source, in cells
POINT_SOURCE_CELLS = 3.0


def gaussian_point_source(x, width: float, n_dim: int = 1):
    """Gaussian of the given width normalized in the weighted measure |x|^{N-1} dx over the line."""
    if not width > 0.0:
        raise ValueError(f"width must be positive, got {width}")
    norm = (2.0 * width ** 2) ** (n_dim / 2.0) * special.gamma(n_dim / 2.0)
    return np.exp(-np.asarray(x, dtype=float) ** 2 / (2.0 * width ** 2)) / norm


def richardson_width(narrow, wide, ratio: float = 2.0, power: float = 2.0):
    """Extrapolate results at widths w and ratio*w to zero width, error ~ w^power."""
    factor = ratio ** power
    return (factor * np.asarray(narrow) - np.asarray(wide)) / (factor - 1.0)


class RadialMesh:
    """Cell-centered mesh on [0, R] with the radial operator in flux form."""

    def __init__(self, radius: float, cells: int, n_dim: int, theta: float):
        self.h = radius / cells
        self.faces = self.h * np.arange(cells + 1)
        self.centers = self.faces[:-1] + 0.5 * self.h
        self.volumes = np.diff(self.faces ** n_dim) / n_dim
        inner = self.faces[1:-1]
        self.conductance = inner ** (n_dim - 1.0 - theta) / self.h

    def operator(self) -> sparse.csc_matrix:
        """A with (A rho)_i = (flux_{i+1/2} - flux_{i-1/2}) / V_i and zero boundary flux."""
        g = self.conductance
        main = -(np.concatenate([g, [0.0]]) + np.concatenate([[0.0], g]))
        a = sparse.diags([g, main, g], [-1, 0, 1], format="csc")
        return sparse.diags(1.0 / self.volumes, format="csc") @ a

    def mass(self, rho: np.ndarray) -> float:
        """Weighted mass over the whole line."""
        return 2.0 * float(self.volumes @ rho)


def _initial_values(initial, mesh: RadialMesh, n_dim: int) -> np.ndarray:
    if initial is None:
        rho = gaussian_point_source(mesh.centers, POINT_SOURCE_CELLS * mesh.h, n_dim)
        return rho / mesh.mass(rho)
    if callable(initial):
        rho = np.asarray(initial(mesh.centers), dtype=float)
    else:
        rho = np.array(initial, dtype=float)
    if rho.shape != mesh.centers.shape:
        raise StabilityError(f"initial data has shape {rho.shape}, mesh has {mesh.centers.shape} cells")
    if np.any(rho < 0.0) or not np.all(np.isfinite(rho)):
        raise StabilityError("initial data must be finite and nonnegative")
    return rho


def product_weights(n: int, alpha: float) -> np.ndarray:
    """Weights a_{j,n}, j = 0..n, of the product trapezoid rule for the kernel (t_n - s)^{alpha-1}."""
    j = np.arange(n + 1, dtype=float)
    m = n - j
    a = (m + 1.0) ** (alpha + 1.0) + np.abs(m - 1.0) ** (alpha + 1.0) - 2.0 * m ** (alpha + 1.0)
    a[0] = (n - 1.0) ** (alpha + 1.0) - (n - 1.0 - alpha) * n ** alpha
    a[n] = 1.0
    return a


def caputo_l1_solve(p: ModelParams, grid: GridSpec, initial: np.ndarray | Callable | None = None, *,
                    times=None, kernel: KernelKind | str | None = None) -> list[Profile]:
    """Profiles of the radial equation at the requested times (default: grid.t_max).

    *initial* is None for a point source (narrow Gaussian of width three cells), a
    callable of the radius or samples at the cell centers.
    """
    if p.mu != 2.0 or p.nu != 1.0:
        raise AdmissibilityError(f"finite-volume oracle needs mu = 2 and nu = 1, got mu={p.mu}, nu={p.nu}")
    if p.theta >= p.n_dim + 1.0:
        raise AdmissibilityError(f"theta={p.theta} >= N + 1 makes the origin flux singular")
    kernel = KernelKind(kernel) if kernel is not None else p.kernel_kind

    mesh = RadialMesh(grid.radius, grid.nx, p.n_dim, p.theta)
    rho = _initial_values(initial, mesh, p.n_dim)
    mass0 = mesh.mass(rho)

    dt = grid.dt
    nt = grid.nt
    requested = [grid.t_max] if times is None else sorted(float(t) for t in times)
    steps = {}
    for t in requested:
        if not 0.0 < t <= grid.t_max * (1.0 + 1e-12):
            raise StabilityError(f"requested time {t} outside (0, {grid.t_max}]")
        steps.setdefault(min(nt, max(1, round(t / dt))), t)
    last_step = max(steps)

    gamma = p.gamma
    c0 = special.gamma(2.0 - gamma) * dt ** gamma
    b = l1_weights(gamma, last_step + 1)
    a_op = mesh.operator()

    if kernel is KernelKind.POWER_LAW:
        kappa = dt ** p.alpha_mem / special.gamma(p.alpha_mem + 2.0)
        coeff = c0 * p.d_coeff * kappa
    else:
        coeff = c0 * p.d_coeff
    lu = linalg.splu(sparse.identity(mesh.centers.size, format="csc") - coeff * a_op)
    logger.debug(f"L1 solve: {grid.nx} cells, {last_step} steps, kernel {kernel.value}, step coefficient {coeff:.3g}")

    # history of increments d^m = rho^m - rho^{m-1}, and of the states for the memory kernel
    increments = np.zeros((last_step + 1, rho.size))
    states = np.zeros((last_step + 1, rho.size)) if kernel is KernelKind.POWER_LAW else None
    if states is not None:
        states[0] = rho

    profiles = []
    current = rho
    for n in range(1, last_step + 1):
        rhs = current.copy()
        if n > 1:
            rhs -= b[n - 1:0:-1] @ increments[1:n]
        if states is not None:
            weights = product_weights(n, p.alpha_mem)
            rhs += coeff * (a_op @ (weights[:n] @ states[:n]))
        new = lu.solve(rhs)
        increments[n] = new - current
        if states is not None:
            states[n] = new
        current = new
        if n in steps:
            profiles.append(_profile(mesh, current, n * dt, p, grid))

    drift = abs(mesh.mass(current) - mass0)
    logger.debug(f"L1 solve: weighted mass drift {drift:.2e}")
    return profiles


def _profile(mesh: RadialMesh, rho: np.ndarray, t: float, p: ModelParams, grid: GridSpec) -> Profile:
    x, values = mesh.centers, rho
    if grid.x_min < 0.0:
        x = np.concatenate([-x[::-1], x])
        values = np.concatenate([rho[::-1], rho])
    return Profile(x_grid=x, values=values, t=t, params=p, source=ProfileSource.ORACLE,
                   error_estimate=0.0, evaluator=None)


def mesh_mass(profile: Profile) -> float:
    """Weighted mass of an oracle profile using the solver's own cell volumes."""
    x, rho = profile.half_line()
    h = x[1] - x[0]
    faces = np.concatenate([x - 0.5 * h, [x[-1] + 0.5 * h]])
    n = profile.params.n_dim
    volumes = np.diff(np.maximum(faces, 0.0) ** n) / n
    return 2.0 * float(volumes @ rho)
