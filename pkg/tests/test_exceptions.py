"""Tests for custom exception hierarchy."""

import pytest

from src.exceptions import (
    AlphaWindowExceededError,
    ConfigurationError,
    DimensionMismatchError,
    FlavorMismatchError,
    HomAlgebraException,
    LeftRightMismatchError,
    MissingStructureError,
    NonUniqueSolutionError,
    NoSolutionError,
    ParseError,
    PreconditionError,
    TheoremCheckFailed,
    UnknownInstanceError,
)
from src.models import CheckResult, VerificationReport


class TestHomAlgebraException:
    """Test the base exception."""

    def test_base_exception_creation(self):
        """Test creating base exception."""
        error = HomAlgebraException("Test error")
        assert str(error) == "Test error"
        assert error.message == "Test error"
        assert error.error_code == "HomAlgebraException"

    def test_base_exception_with_code(self):
        """Test creating base exception with custom error code."""
        error = HomAlgebraException("Test error", "CUSTOM_CODE")
        assert error.error_code == "CUSTOM_CODE"

    def test_exception_inheritance(self):
        """Test that all exceptions inherit from HomAlgebraException."""
        exceptions = [
            ConfigurationError,
            DimensionMismatchError,
            NoSolutionError,
            NonUniqueSolutionError,
            LeftRightMismatchError,
            MissingStructureError,
            PreconditionError,
            FlavorMismatchError,
            TheoremCheckFailed,
            ParseError,
            UnknownInstanceError,
        ]

        for exc_class in exceptions:
            error = exc_class("Test message")
            assert isinstance(error, HomAlgebraException)
            assert error.error_code == exc_class.__name__


class TestPreconditionErrors:
    """Test precondition failures and their payloads."""

    def test_offending_value_is_kept(self):
        """Test that the offending value travels with the error."""
        error = PreconditionError("alpha is singular", offending="alpha")
        assert error.offending == "alpha"

    def test_flavor_mismatch_is_a_precondition(self):
        """Test that flavor mismatches are handled as preconditions."""
        with pytest.raises(PreconditionError):
            raise FlavorMismatchError("expected monoidal", offending="plain")

    def test_alpha_window_message(self):
        """Test the window error names the power and the window."""
        error = AlphaWindowExceededError(9, 8)
        assert error.power == 9
        assert error.window == 8
        assert "-8..8" in error.message
        assert isinstance(error, PreconditionError)


class TestDataCarryingErrors:
    """Test errors that carry diagnostics."""

    def test_dimension_mismatch(self):
        """Test expected/actual dimensions are recorded."""
        error = DimensionMismatchError("bad shape", expected=4, actual=2)
        assert (error.expected, error.actual) == (4, 2)

    def test_non_unique_solution_kernel(self):
        """Test the kernel dimension is recorded."""
        error = NonUniqueSolutionError("underdetermined", kernel_dimension=2)
        assert error.kernel_dimension == 2

    def test_theorem_failure_carries_report(self):
        """Test that a failing report travels with TheoremCheckFailed."""
        report = VerificationReport(subject="demo")
        report.add(CheckResult(check_id="x.y", passed=False, counterexample=[0]))
        error = TheoremCheckFailed("construction failed", report)
        assert error.report.failures()[0].check_id == "x.y"

    def test_parse_error_location(self):
        """Test path and location of parse errors."""
        error = ParseError("bad file", path="a.json", location="mult.0")
        assert error.path == "a.json"
        assert error.location == "mult.0"
