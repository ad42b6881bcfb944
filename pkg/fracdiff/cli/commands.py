import logging
import platform

import mpmath
import numpy as np
import scipy

import fracdiff
from fracdiff.analysis.moments import second_moment_fit, weighted_moment
from fracdiff.analysis.propagators import PROPAGATORS, propagator_profile
from fracdiff.analysis.report import VerificationReport, build_report
from fracdiff.checks.base import VerificationCheck
from fracdiff.cli.config import RunConfig
from fracdiff.cli.output import Table, write_outputs
from fracdiff.closed_form.green import (
    asymptotic_case1,
    green_case1,
    green_case2,
    propagator_h_params,
    propagator_scale,
)
from fracdiff.closed_form.mixed import mixed_density
from fracdiff.closed_form.similarity import phi_residual, phi_scale, scaled_solution
from fracdiff.core.errors import ConfigError
from fracdiff.core.specfun import bessel_k_mod, fox_h, gamma_fn, mittag_leffler
from fracdiff.models.model_params import KernelKind
from fracdiff.models.scaled_spec import Region, ScaledSolutionSpec
from fracdiff.oracle.caputo import caputo_l1_solve

logger = logging.getLogger(__name__)

# samples per propagator profile behind the second-moment quadrature
MOMENT_POINTS = 801

FIGURE_REGIONS = {"compact": Region.BOUNDED_SUPPORT, "heavy-tail": Region.INFINITE_SUPPORT}


def _points(cfg: RunConfig, single: float | None, keep=None) -> np.ndarray:
    """The single requested point, or the grid points accepted by *keep*."""
    if single is not None:
        return np.array([float(single)])
    x = cfg.grid.points()
    return x[keep(x)] if keep is not None else x


def _nonzero(x):
    return x != 0.0


def _positive(x):
    return x > 0.0


def _not_gamma_pole(x):
    return ~((x <= 0.0) & (x == np.floor(x)))


def _column(estimates) -> tuple[np.ndarray, np.ndarray]:
    return np.array([e.value for e in estimates]), np.array([e.error for e in estimates])


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def special_table(cfg: RunConfig) -> Table:
    opts = cfg.run
    if opts.function == "gamma":
        z = _points(cfg, opts.z, _not_gamma_pole)
        values, errors = _column(gamma_fn(v) for v in z)
    elif opts.function == "bessel_k":
        z = _points(cfg, opts.z, _positive)
        values, errors = _column(bessel_k_mod(opts.order, v) for v in z)
    elif opts.function == "mittag_leffler":
        z = _points(cfg, opts.z)
        values, errors = _column(mittag_leffler(opts.order, opts.beta, v) for v in z)
    else:
        z = _points(cfg, opts.z, _positive)
        values, errors = fox_h(propagator_h_params(cfg.model), z)
    return Table(("z", "value", "error_estimate"), np.column_stack([z, values, errors]))


def profile_table(cfg: RunConfig) -> Table:
    opts, p, t = cfg.run, cfg.model, cfg.run.t

    if opts.case == "oracle":
        profile = caputo_l1_solve(p, cfg.grid, times=[t])[-1]
        x, rho = profile.x_grid, profile.values
        err = np.broadcast_to(profile.error_estimate, x.shape)
        return Table(("x", "rho", "error_estimate"), np.column_stack([x, rho, err]))

    if opts.case in ("case1", "case2", "drift"):
        x = _points(cfg, opts.x0)
        rho, err = PROPAGATORS[opts.case](x, t, p)
    elif opts.case == "asymptotic":
        x = _points(cfg, opts.x0, _nonzero)
        rho = np.array([asymptotic_case1(v, t, p).value for v in x])
        err = np.full_like(rho, np.nan)
    elif opts.case == "mixed":
        x = _points(cfg, opts.x0, _nonzero)
        rho, err = mixed_density(x, t, p, tol=opts.tol)
    else:
        x = _points(cfg, opts.x0)
        spec = ScaledSolutionSpec.from_region(p, opts.region, phi0=opts.phi0)
        rho = scaled_solution(x, t, spec, p)
        err = np.zeros_like(x)
    return Table(("x", "rho", "error_estimate"), np.column_stack([x, rho, err]))


def moments_table(cfg: RunConfig) -> Table:
    """Second moments of a propagator family and the fitted log-log slope."""
    case = cfg.run.case
    if case not in PROPAGATORS:
        raise ConfigError(f"moments needs one of the cases {', '.join(PROPAGATORS)}, got '{case}'", key="run.case")
    profiles = [propagator_profile(t, cfg.model, case, points=MOMENT_POINTS, exact=False) for t in cfg.run.times]
    fit = second_moment_fit(profiles)
    moments = [weighted_moment(pr, 2.0) for pr in profiles]
    logger.debug(f"second-moment fit: slope {fit.slope:.6g}, r^2 {fit.r_squared:.6g}")
    return Table(("t", "second_moment"), np.column_stack([cfg.run.times, moments]), trailer=("slope", fit.slope))


def scaled_table(cfg: RunConfig) -> Table:
    """Scale function of the similarity solution and its ODE residual over the run times."""
    spec = ScaledSolutionSpec.from_region(cfg.model, cfg.run.region, phi0=cfg.run.phi0)
    times = np.array(cfg.run.times)
    phi = phi_scale(times, spec, cfg.model)
    residual = [phi_residual(t, spec, cfg.model) for t in times]
    return Table(("t", "phi", "phi_residual"), np.column_stack([times, phi, residual]))


def figure_table(cfg: RunConfig) -> Table:
    opts, p, t = cfg.run, cfg.model, cfg.run.t
    x = _points(cfg, None, lambda v: v >= 0.0)

    if opts.which == "propagator":
        green = green_case2 if p.kernel_kind is KernelKind.POWER_LAW else green_case1
        scaled_x, factor = propagator_scale(x, t, p)
        scaled_rho = factor * green(x, t, p).value
    else:
        spec = ScaledSolutionSpec.from_region(p, FIGURE_REGIONS[opts.which], phi0=opts.phi0)
        phi = phi_scale(t, spec, p)
        scaled_x = x / phi
        scaled_rho = phi ** p.n_dim * scaled_solution(x, t, spec, p)
    return Table(("scaled_x", "scaled_rho"), np.column_stack([scaled_x, scaled_rho]))


def environment(cfg: RunConfig) -> dict:
    return {
        "suite": cfg.run.suite,
        "timings": cfg.run.timings,
        "fracdiff": fracdiff.__version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "mpmath": mpmath.__version__,
    }


def verify_report(cfg: RunConfig, app=None) -> VerificationReport:
    results = []
    for check in VerificationCheck.load_plugins(cfg.run.suite, cfg.run.timings):
        if app is not None:
            app.debug_log(f"Running check {check.name}")
        results.extend(check.execute())
    report = build_report(results, environment(cfg))
    if app is not None:
        for name in report.failures:
            app.debug_log(f"Check failed: {name}", 2)
    return report


TABLES = {
    "special": special_table,
    "profile": profile_table,
    "moments": moments_table,
    "scaled": scaled_table,
    "figures": figure_table,
}


def run_command(cfg: RunConfig, app=None) -> int:
    """Run the configured subcommand, write its output and return the exit status."""
    if cfg.command == "verify":
        report = verify_report(cfg, app)
        write_outputs(report, cfg.output)
        return 0 if report.passed else 1

    table = TABLES[cfg.command](cfg)
    if not np.all(np.isfinite(table.rows[:, :2])):
        logger.warning(f"{cfg.command} output holds non-finite values")
    write_outputs(table, cfg.output)
    return 0
