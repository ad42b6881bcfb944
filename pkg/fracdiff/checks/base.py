import importlib
import inspect
import logging
import time
from pathlib import Path

import numpy as np

from fracdiff.analysis.report import CheckResult
from fracdiff.core.errors import FracDiffError

logger = logging.getLogger(__name__)

VALID_SUITES = ["core", "full"]


class VerificationCheck:
    """Base class for verification checks discovered from *_check.py files."""

    name: str = ""
    anchor: str = ""
    # suites the check belongs to; "full" always includes "core"
    suites: tuple[str, ...] = ("core", "full")

    # Discovered check classes (instances created per run).
    _plugin_classes: list[type] | None = None

    def __init__(self, suite: str = "core", timings: bool = True):
        self.suite = suite
        self.timings = timings

    # ---------------------------------------------------------------------
    # Dynamic plugin discovery / loading
    # ---------------------------------------------------------------------
    @classmethod
    def load_plugins(cls, suite: str = "core", timings: bool = True) -> list["VerificationCheck"]:
        """Return fresh instances of every check in *suite*, ordered by name."""
        if suite not in VALID_SUITES:
            raise ValueError(f"Invalid suite '{suite}'. Must be one of: {', '.join(VALID_SUITES)}")

        if cls._plugin_classes is None:
            cls._plugin_classes = []
            checks_dir = Path(__file__).parent

            for file_path in sorted(checks_dir.glob("*_check.py")):
                module_name = f"fracdiff.checks.{file_path.stem}"
                try:
                    module = importlib.import_module(module_name)
                    for _, obj in inspect.getmembers(module, inspect.isclass):
                        if issubclass(obj, cls) and obj is not cls and obj.__module__ == module_name:
                            cls._plugin_classes.append(obj)
                except ImportError as e:
                    logger.warning(f"Could not import {module_name}: {e}")

        checks = [c(suite, timings) for c in cls._plugin_classes if suite in c.suites]
        logger.debug(f"Loaded checks for suite {suite}: {', '.join(c.name for c in checks)}")
        return sorted(checks, key=lambda c: c.name)

    # ------------------------------------------------------------------
    # Interface each concrete check must implement
    # ------------------------------------------------------------------
    def run(self) -> list[CheckResult]:
        """Compute the check and return one result per sub-case."""
        raise NotImplementedError

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------
    @property
    def full(self) -> bool:
        return self.suite == "full"

    def result(self, label: str, measured: float, expected: float, tolerance: float,
               started: float, *, relative: bool = False) -> CheckResult:
        """CheckResult for |measured - expected| <= tolerance (times |expected| if relative)."""
        bound = tolerance * abs(expected) if relative else tolerance
        passed = bool(np.isfinite(measured) and abs(measured - expected) <= bound)
        runtime = time.perf_counter() - started if self.timings else 0.0
        name = f"{self.name}[{label}]" if label else self.name
        return CheckResult(name=name, anchor=self.anchor, measured=float(measured), expected=float(expected),
                           tolerance=float(tolerance), passed=passed, runtime_s=runtime)

    def execute(self) -> list[CheckResult]:
        """Run the check; numerical failures become a failed result instead of an exception."""
        started = time.perf_counter()
        try:
            return self.run()
        except FracDiffError as e:
            logger.warning(f"check {self.name} raised {type(e).__name__}: {e}")
            return [self.result("error", float("nan"), 0.0, 0.0, started)]
