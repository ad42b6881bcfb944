import math
import time

import pytest

from fracdiff.checks.asymptotic_check import AsymptoticTailCheck
from fracdiff.checks.base import VerificationCheck
from fracdiff.checks.families import FAMILIES
from fracdiff.core.errors import ContourError
from fracdiff.models.model_params import ModelParams

FULL_ONLY = {"moment_law_quadrature", "oracle_case1", "mixed_charfn", "mixed_normalization"}


class FailingCheck(VerificationCheck):
    name = "failing"
    anchor = "raises"

    def run(self):
        raise ContourError("no strip")


class TestPluginLoading:
    """Test cases for discovering *_check.py files."""

    def test_core_suite(self):
        checks = VerificationCheck.load_plugins("core")
        names = [c.name for c in checks]
        assert names == sorted(names)
        assert "gaussian_reduction" in names
        assert "fox_reduction" in names
        assert not FULL_ONLY & set(names)
        assert all(c.suite == "core" and not c.full for c in checks)

    def test_full_suite_includes_core(self):
        core = {c.name for c in VerificationCheck.load_plugins("core")}
        full = {c.name for c in VerificationCheck.load_plugins("full")}
        assert core < full
        assert full - core == FULL_ONLY

    def test_fresh_instances(self):
        first = VerificationCheck.load_plugins("core", timings=False)
        second = VerificationCheck.load_plugins("core", timings=False)
        assert all(a is not b for a, b in zip(first, second))
        assert not any(c.timings for c in first)

    def test_invalid_suite(self):
        with pytest.raises(ValueError, match="Invalid suite"):
            VerificationCheck.load_plugins("nightly")

    def test_every_check_is_named(self):
        for check in VerificationCheck.load_plugins("full"):
            assert check.name and check.anchor, type(check).__name__


class TestResults:
    def test_absolute(self):
        check = FailingCheck(timings=False)
        ok = check.result("a", 1e-9, 0.0, 1e-8, time.perf_counter())
        assert ok.passed
        assert ok.name == "failing[a]"
        assert ok.runtime_s == 0.0
        assert not check.result("a", 1e-7, 0.0, 1e-8, time.perf_counter()).passed

    def test_relative(self):
        check = FailingCheck()
        assert check.result("", 1.0005, 1.0, 1e-3, time.perf_counter(), relative=True).passed
        assert not check.result("", 10.5, 10.0, 1e-2, time.perf_counter(), relative=True).passed
        assert check.result("", 1.0, 1.0, 0.0, time.perf_counter()).name == "failing"

    def test_nan_fails(self):
        check = FailingCheck()
        assert not check.result("a", math.nan, 0.0, math.inf, time.perf_counter()).passed

    def test_error_becomes_failed_result(self, caplog):
        result, = FailingCheck().execute()
        assert result.name == "failing[error]"
        assert not result.passed
        assert math.isnan(result.measured)
        assert "ContourError" in caplog.text


class TestFamilies:
    @pytest.mark.parametrize("label", list(FAMILIES))
    def test_family(self, label):
        params, kind = FAMILIES[label]
        assert isinstance(params, ModelParams)
        assert kind in ("case1", "case2", "drift")
        assert label.startswith(kind)



class TestAsymptoticTail:
    def test_covers_dimension_and_theta(self):
        results = AsymptoticTailCheck(timings=False).run()
        names = [r.name for r in results]
        assert "asymptotic_tail[gamma=0.5 theta=0.5 N=1]" in names
        assert "asymptotic_tail[gamma=0.8 theta=1 N=2]" in names
        assert all(r.passed for r in results), [r.name for r in results if not r.passed]

@pytest.mark.slow
@pytest.mark.parametrize("suite", ["core", "full"])
def test_checks_pass(suite):
    failures = []
    for check in VerificationCheck.load_plugins(suite, timings=False):
        failures += [r.name for r in check.execute() if not r.passed]
    assert failures == []
