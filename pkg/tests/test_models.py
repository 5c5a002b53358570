"""Tests for report, file-schema and grid-point models."""

import pytest
from pydantic import ValidationError

from src.exceptions import AlphaWindowExceededError
from src.models import (
    AlgebraFile,
    CheckResult,
    Flavor,
    RepConfig,
    ReportFile,
    RMatrixSystem,
    VerificationReport,
)


def _result(check_id, passed, informational=False):
    return CheckResult(
        check_id=check_id,
        passed=passed,
        counterexample=None if passed else [0],
        informational=informational,
    )


class TestCheckResult:
    """Test individual check records."""

    def test_failure_requires_counterexample(self):
        """Test that a failing record must carry a counterexample."""
        with pytest.raises(ValidationError):
            CheckResult(check_id="algebra.left_unit", passed=False)

    def test_status(self):
        """Test the displayed status."""
        assert _result("a", True).status == "PASS"
        assert _result("a", False).status == "FAIL"
        assert _result("a", False, informational=True).status == "INFO"


class TestVerificationReport:
    """Test report aggregation."""

    def test_totals_exclude_informational(self):
        """Test that informational records do not count towards totals."""
        report = VerificationReport(subject="demo")
        report.add(_result("a", True)).add(_result("b", False)).add(_result("c", False, informational=True))
        assert report.total == 2
        assert report.passed == 1
        assert report.failed == 1
        assert not report.ok
        assert [c.check_id for c in report.failures()] == ["b"]

    def test_extend_with_prefix(self):
        """Test merging reports with a check-id prefix."""
        inner = VerificationReport(checks=[_result("pentagon", True)])
        outer = VerificationReport().extend(inner, prefix="monoidal(0,0):")
        assert outer.checks[0].check_id == "monoidal(0,0):pentagon"
        assert inner.checks[0].check_id == "pentagon"

    def test_as_informational(self):
        """Test that a failing report can be demoted to informational."""
        report = VerificationReport(checks=[_result("flavor.left_counit", False)])
        demoted = report.as_informational()
        assert demoted.ok
        assert not report.ok

    def test_get(self):
        """Test lookup by check id."""
        report = VerificationReport(checks=[_result("a", True)])
        assert report.get("a").passed
        assert report.get("missing") is None


class TestReportFile:
    """Test the machine-readable report file."""

    def test_from_report(self):
        """Test building a report file from a verification report."""
        report = VerificationReport(subject="z2")
        report.add(_result("a", True)).add(_result("b", False, informational=True))
        report.checks[0] = report.checks[0].model_copy(update={"duration_ms": 1.5})
        file = ReportFile.from_report("verify", report, {"suite": "all"}, include_timing=False)
        assert file.ok
        assert file.totals.total == 1
        assert file.totals.informational == 1
        assert file.records[0].duration_ms is None
        assert file.parameters == {"suite": "all"}

    def test_totals_must_match(self):
        """Test that inconsistent totals are rejected."""
        with pytest.raises(ValidationError):
            ReportFile(
                command="verify",
                subject="x",
                records=[_result("a", True).model_dump()],
                totals={"total": 1, "passed": 0, "failed": 1},
            )


class TestAlgebraFile:
    """Test the algebra file schema."""

    def _minimal(self, **overrides):
        data = {
            "dim": 1,
            "basis": ["1"],
            "flavor": "plain",
            "mult": [[0, 0, 0, 1, 1]],
            "comult": [[0, 0, 0, 1, 1]],
            "unit": [[0, 1, 1]],
            "counit": [[0, 1, 1]],
            "alpha": [[0, 0, 1, 1]],
        }
        data.update(overrides)
        return data

    def test_minimal_file(self):
        """Test the one-dimensional ground field."""
        model = AlgebraFile.model_validate(self._minimal())
        assert model.flavor is Flavor.PLAIN
        assert model.antipode is None

    @pytest.mark.parametrize(
        "overrides",
        [
            {"mult": [[0, 0, 1, 1, 1]]},
            {"unit": [[0, 1, 0]]},
            {"basis": ["1", "g"]},
            {"alpha": [[0, 0, 1, 0]]},
            {"extra_field": 1},
            {"twists": {"t": {"coeffs": [[0, 2, 1, 1]]}}},
            {"rmatrices": {"R": {"system": "braided", "coeffs": []}}},
        ],
    )
    def test_invalid_files(self, overrides):
        """Test out-of-range indices, zero denominators and unknown fields."""
        with pytest.raises(ValidationError):
            AlgebraFile.model_validate(self._minimal(**overrides))

    def test_rmatrix_system_flavor(self):
        """Test the flavor of each R-matrix axiom system."""
        assert RMatrixSystem.MONOIDAL_Q.flavor is Flavor.MONOIDAL
        assert RMatrixSystem.PLAIN_Q.flavor is Flavor.PLAIN
        assert RMatrixSystem.for_flavor("plain") is RMatrixSystem.PLAIN_Q


class TestRepConfig:
    """Test grid points of the Rep^{i,j} family."""

    def test_shifts_by_flavor(self):
        """Test the exponent offsets of each flavor."""
        monoidal = RepConfig(i=2, j=-1, flavor=Flavor.MONOIDAL)
        plain = RepConfig(i=2, j=-1, flavor=Flavor.PLAIN)
        assert (monoidal.left_shift, monoidal.right_shift) == (1, -2)
        assert (plain.left_shift, plain.right_shift) == (3, 0)

    def test_window_enforced(self):
        """Test that grid points outside the α window are rejected."""
        with pytest.raises(AlphaWindowExceededError):
            RepConfig(i=9, j=0, window=8)

    def test_shifted(self):
        """Test moving a grid point."""
        cfg = RepConfig(i=0, j=0, window=8).shifted(3, 3, Flavor.PLAIN)
        assert (cfg.i, cfg.j, cfg.flavor) == (3, 3, Flavor.PLAIN)
        assert cfg.label() == "plain(3,3)"

    def test_frozen(self):
        """Test that grid points are hashable values."""
        a = RepConfig(i=1, j=1, window=8)
        b = RepConfig(i=1, j=1, window=8)
        assert a == b
        assert hash(a) == hash(b)
