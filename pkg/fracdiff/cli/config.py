import argparse
import dataclasses
import logging
import tomllib
from dataclasses import dataclass, field
from importlib import resources
from importlib.resources.abc import Traversable
from pathlib import Path
from typing import Any, Sequence

from fracdiff.checks.base import VALID_SUITES
from fracdiff.core.errors import ConfigError, FracDiffError
from fracdiff.models.grid_spec import GridSpec
from fracdiff.models.model_params import ModelParams
from fracdiff.models.scaled_spec import Region

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = resources.files("fracdiff") / "config" / "default_run.toml"

VALID_COMMANDS = ["special", "profile", "verify", "moments", "scaled", "figures"]
VALID_CASES = ["case1", "case2", "drift", "asymptotic", "mixed", "scaled", "oracle"]
VALID_FIGURES = ["propagator", "compact", "heavy-tail"]
# figure numbers of the three families
FIGURE_ALIASES = {"fig1": "propagator", "fig2": "compact", "fig3": "heavy-tail"}
VALID_FUNCTIONS = ["gamma", "bessel_k", "mittag_leffler", "fox_h"]


@dataclass(frozen=True)
class RunOptions:
    """The [run] table: what a command computes and how accurately."""

    case: str = "case1"
    t: float = 1.0
    times: tuple[float, ...] = (0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0)
    suite: str = "core"
    which: str = "propagator"
    function: str = "gamma"
    order: float = 0.5
    beta: float = 1.0
    z: float | None = None
    x0: float | None = None
    region: str = "infinite-support"
    phi0: float = 1.0
    tol: float = 1e-8
    timings: bool = True

    def __post_init__(self):
        object.__setattr__(self, "which", FIGURE_ALIASES.get(self.which, self.which))
        for name, valid in (("case", VALID_CASES), ("suite", VALID_SUITES), ("which", VALID_FIGURES),
                            ("function", VALID_FUNCTIONS), ("region", [r.value for r in Region])):
            if getattr(self, name) not in valid:
                raise ConfigError(f"Invalid {name} '{getattr(self, name)}'. Must be one of: {', '.join(valid)}",
                                  key=f"run.{name}")
        times = tuple(float(t) for t in self.times)
        if not times or any(not t > 0.0 for t in times):
            raise ConfigError(f"times must be a nonempty list of positive values, got {self.times}", key="run.times")
        object.__setattr__(self, "times", times)
        for name in ("t", "phi0", "tol"):
            if not float(getattr(self, name)) > 0.0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}", key=f"run.{name}")
        if not isinstance(self.timings, bool):
            raise ConfigError(f"timings must be true or false, got {self.timings}", key="run.timings")


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: ModelParams
    grid: GridSpec
    run: RunOptions = field(default_factory=RunOptions)
    output: str | None = None
    debug: bool = False


TABLES = {
    "model": {f.name for f in dataclasses.fields(ModelParams)},
    "grid": {f.name for f in dataclasses.fields(GridSpec)},
    "run": {f.name for f in dataclasses.fields(RunOptions)},
}


def _times(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid time list: '{text}'")


# flag, table, key, type, help
FLAGS = [
    ("--gamma", "model", "gamma", float, "order of the time derivative, 0 < gamma <= 1"),
    ("--mu", "model", "mu", float, "order of the spatial operator"),
    ("--nu", "model", "nu", float, "nonlinearity exponent"),
    ("--theta", "model", "theta", float, "radial index of the diffusion coefficient"),
    ("--ndim", "model", "n_dim", int, "spatial dimension N"),
    ("--d-coeff", "model", "d_coeff", float, "diffusion coefficient D"),
    ("--k-drift", "model", "k_drift", float, "drift strength K"),
    ("--alpha", "model", "alpha_mem", float, "exponent of the power-law memory kernel"),
    ("--kernel", "model", "kernel_kind", str, "memory kernel: impulsive or power-law"),
    ("--drift-exponent", "model", "drift_exponent", float, "exponent of the power-law drift"),
    ("--x-min", "grid", "x_min", float, "left end of the output grid"),
    ("--x-max", "grid", "x_max", float, "right end of the output grid"),
    ("--nx", "grid", "nx", int, "number of grid points"),
    ("--t-max", "grid", "t_max", float, "final time of the finite-volume oracle"),
    ("--nt", "grid", "nt", int, "time steps of the finite-volume oracle"),
    ("--case", "run", "case", str, f"profile case: {', '.join(VALID_CASES)}"),
    ("--t", "run", "t", float, "evaluation time"),
    ("--times", "run", "times", _times, "comma-separated times for moments and scaled"),
    ("--suite", "run", "suite", str, f"verification suite: {', '.join(VALID_SUITES)}"),
    ("--which", "run", "which", str,
     "figure family: " + ", ".join(f"{name} ({alias})" for alias, name in FIGURE_ALIASES.items())),
    ("--function", "run", "function", str, f"special function: {', '.join(VALID_FUNCTIONS)}"),
    ("--order", "run", "order", float, "Bessel order or Mittag-Leffler alpha"),
    ("--beta", "run", "beta", float, "Mittag-Leffler beta"),
    ("--z", "run", "z", float, "single argument for special instead of the grid"),
    ("--x0", "run", "x0", float, "single point for profile instead of the grid"),
    ("--region", "run", "region", str, "similarity region: bounded-support or infinite-support"),
    ("--phi0", "run", "phi0", float, "initial value of the scale function"),
    ("--tol", "run", "tol", float, "error tolerance of series and quadratures"),
]


class ConfigArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports problems as ConfigError instead of exiting."""

    def error(self, message):
        raise ConfigError(message)


def build_parser() -> ConfigArgumentParser:
    common = ConfigArgumentParser(add_help=False)
    for flag, table, key, kind, text in FLAGS:
        common.add_argument(flag, dest=f"{table}.{key}", type=kind, default=argparse.SUPPRESS, help=text)
    common.add_argument("--timings", dest="run.timings", action=argparse.BooleanOptionalAction,
                        default=argparse.SUPPRESS, help="record wall-clock runtimes in reports")
    common.add_argument("--config", default=argparse.SUPPRESS, help="TOML file with [model], [grid], [run] tables")
    common.add_argument("--output", default=argparse.SUPPRESS, help="output file (default: stdout)")
    common.add_argument("--debug", action="store_true", default=argparse.SUPPRESS, help="Enable debug mode")

    parser = ConfigArgumentParser(prog="fracdiff",
                                  description="fracdiff - propagators of fractional diffusion equations")
    parser.add_argument("--version", action="store_true", help="Print version and exit")
    sub = parser.add_subparsers(dest="command", parser_class=ConfigArgumentParser)
    for command in VALID_COMMANDS:
        sub.add_parser(command, parents=[common])
    return parser


def read_config_file(path: Path | Traversable | str) -> dict[str, dict[str, Any]]:
    """Tables of a TOML run configuration, with unknown tables and keys rejected."""
    if isinstance(path, str):
        path = Path(path)
    try:
        with path.open("rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Error parsing TOML in {path}: {e}")
    except OSError as e:
        raise ConfigError(f"Cannot read {path}: {e.strerror or e}")

    for table, values in data.items():
        if table not in TABLES:
            raise ConfigError(f"{path}: unknown table [{table}]", key=table)
        if not isinstance(values, dict):
            raise ConfigError(f"{path}: '{table}' must be a table", key=table)
        for key in values:
            if key not in TABLES[table]:
                raise ConfigError(f"{path}: unknown key '{key}' in [{table}]", key=f"{table}.{key}")
    return data


def _merge(target: dict[str, dict[str, Any]], source: dict[str, dict[str, Any]]):
    for table, values in source.items():
        target.setdefault(table, {}).update(values)


def _build(table: str, cls, values: dict[str, Any]):
    try:
        return cls(**values)
    except ConfigError:
        raise
    except (FracDiffError, TypeError, ValueError) as e:
        raise ConfigError(f"[{table}] {e}", key=table)


def parse_config(argv: Sequence[str] | None = None,
                 default_path: Path | Traversable | str = DEFAULT_CONFIG) -> RunConfig | None:
    """RunConfig from flags, an optional --config file and the shipped defaults.

    Flags override the file, which overrides the defaults. Returns None for --version.
    """
    args = vars(build_parser().parse_args(argv))
    if args.pop("version", False):
        return None
    command = args.pop("command", None)
    if command is None:
        raise ConfigError(f"a subcommand is required: {', '.join(VALID_COMMANDS)}")

    tables: dict[str, dict[str, Any]] = {"model": {}, "grid": {}, "run": {}}
    _merge(tables, read_config_file(default_path))
    config_path = args.pop("config", None)
    if config_path is not None:
        logger.debug(f"reading run configuration from {config_path}")
        _merge(tables, read_config_file(config_path))

    output = args.pop("output", None)
    debug = bool(args.pop("debug", False))
    for dest, value in args.items():
        table, key = dest.split(".", 1)
        tables[table][key] = value

    return RunConfig(command=command,
                     model=_build("model", ModelParams, tables["model"]),
                     grid=_build("grid", GridSpec, tables["grid"]),
                     run=_build("run", RunOptions, tables["run"]),
                     output=output, debug=debug)
