"""Tests for input validation utilities."""

import pytest

from src.validators import MODULE_KINDS, InputValidator


class TestGridRange:
    """Test grid range parsing."""

    def test_validate_grid_range_valid(self):
        """Test validation of valid grid ranges."""
        cases = {
            "-2..2": (-2, 2),
            "0..0": (0, 0),
            "3": (3, 3),
            " -1 .. 4 ": (-1, 4),
            "-9..-3": (-9, -3),
        }
        for value, expected in cases.items():
            is_valid, message, parsed = InputValidator.validate_grid_range(value)
            assert is_valid, f"Range {value} should be valid: {message}"
            assert parsed == expected

    def test_validate_grid_range_invalid(self):
        """Test validation of invalid grid ranges."""
        invalid = ["", None, "2..-2", "a..b", "1...2", "1,2", "..3"]
        for value in invalid:
            is_valid, message, parsed = InputValidator.validate_grid_range(value)
            assert not is_valid, f"Range {value!r} should be invalid"
            assert parsed is None


class TestModuleSet:
    """Test module set parsing."""

    def test_validate_module_set_valid(self):
        """Test that every known kind is accepted in any order."""
        is_valid, _, kinds = InputValidator.validate_module_set("random, trivial")
        assert is_valid
        assert kinds == ["random", "trivial"]

        is_valid, _, kinds = InputValidator.validate_module_set(",".join(MODULE_KINDS))
        assert is_valid
        assert kinds == list(MODULE_KINDS)

    @pytest.mark.parametrize("spec", ["", "adjoint", "trivial,trivial", "regular,dual"])
    def test_validate_module_set_invalid(self, spec):
        """Test rejection of unknown or repeated kinds."""
        is_valid, message, kinds = InputValidator.validate_module_set(spec)
        assert not is_valid
        assert kinds == []


class TestNamesAndPaths:
    """Test name and path validation."""

    def test_validate_name_valid(self):
        """Test validation of valid names."""
        for name in ["z2", "sigma_beta", "R0", "x-twist", "a" * 64]:
            is_valid, message = InputValidator.validate_name(name)
            assert is_valid, f"Name {name} should be valid: {message}"

    def test_validate_name_invalid(self):
        """Test validation of invalid names."""
        for name in ["", None, "two words", "σ", "a/b", "a" * 65]:
            is_valid, _ = InputValidator.validate_name(name)
            assert not is_valid, f"Name {name!r} should be invalid"

    def test_validate_name_mentions_what(self):
        """Test that the message names the validated thing."""
        _, message = InputValidator.validate_name("", "Twist name")
        assert message.startswith("Twist name")

    def test_validate_output_path(self, tmp_path):
        """Test output path validation."""
        assert InputValidator.validate_output_path(tmp_path / "new" / "file.json")[0]
        assert not InputValidator.validate_output_path("")[0]
        assert not InputValidator.validate_output_path("../escape.json")[0]
        assert not InputValidator.validate_output_path(tmp_path)[0]

    def test_output_path_below_a_file(self, tmp_path):
        """Test that a parent which is a regular file is rejected."""
        blocker = tmp_path / "blocker"
        blocker.write_text("x")
        is_valid, message = InputValidator.validate_output_path(blocker / "out.json")
        assert not is_valid
        assert "not a directory" in message


class TestSuiteAndSeed:
    """Test suite and seed validation."""

    def test_validate_suite(self):
        """Test that the known suites validate."""
        for suite in ["algebra", "coalgebra", "bialgebra", "hopf", "module", "all"]:
            assert InputValidator.validate_suite(suite)[0]
        assert not InputValidator.validate_suite("everything")[0]

    def test_validate_seed(self):
        """Test seed validation."""
        assert InputValidator.validate_seed("12") == (True, "Valid seed", 12)
        assert not InputValidator.validate_seed(-1)[0]
        assert not InputValidator.validate_seed("abc")[0]
