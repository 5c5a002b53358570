"""Input validation for command-line arguments."""

import re
from pathlib import Path
from typing import List, Optional, Tuple, Union

from .models import Suite

MODULE_KINDS = ("trivial", "regular", "random")


class InputValidator:
    """Validation of user-supplied command arguments."""

    # "-2..2" or a single integer "3"
    GRID_RANGE_PATTERN = re.compile(r'^\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?$')

    # instance and element names (letters, digits, underscores, hyphens)
    NAME_PATTERN = re.compile(r'^[A-Za-z0-9_-]+$')

    @staticmethod
    def validate_grid_range(value: str) -> Tuple[bool, str, Optional[Tuple[int, int]]]:
        """Validate a grid range such as "-2..2"."""
        if not value or not isinstance(value, str):
            return False, "Grid range cannot be empty", None

        match = InputValidator.GRID_RANGE_PATTERN.match(value)
        if not match:
            return False, f"Invalid grid range {value!r} (expected LOW..HIGH)", None

        low = int(match.group(1))
        high = int(match.group(2)) if match.group(2) is not None else low
        if high < low:
            return False, f"Grid range {value!r} is empty", None

        return True, "Valid grid range", (low, high)

    @staticmethod
    def validate_module_set(spec: str) -> Tuple[bool, str, List[str]]:
        """Validate a comma-separated module set such as "trivial,regular,random"."""
        if not spec:
            return False, "Module set cannot be empty", []

        kinds = [part.strip() for part in spec.split(",") if part.strip()]
        unknown = [kind for kind in kinds if kind not in MODULE_KINDS]
        if unknown:
            return False, f"Unknown module kinds: {', '.join(unknown)} (allowed: {', '.join(MODULE_KINDS)})", []

        if len(set(kinds)) != len(kinds):
            return False, "Module set lists a kind twice", []

        return True, "Valid module set", kinds

    @staticmethod
    def validate_name(name: str, what: str = "Name") -> Tuple[bool, str]:
        """Validate an instance, twist or R-matrix name."""
        if not name:
            return False, f"{what} cannot be empty"

        if len(name) > 64:
            return False, f"{what} is too long (max 64 characters)"

        if not InputValidator.NAME_PATTERN.match(name):
            return False, f"{what} contains invalid characters (only alphanumeric, hyphens, and underscores allowed)"

        return True, f"Valid {what.lower()}"

    @staticmethod
    def validate_output_path(path: Union[str, Path]) -> Tuple[bool, str]:
        """Validate an output file path: no traversal, and the parent is a directory or can be created."""
        if not path:
            return False, "Output path cannot be empty"

        path_obj = Path(path)
        if ".." in path_obj.parts:
            return False, "Path traversal detected in output path"

        if path_obj.exists() and path_obj.is_dir():
            return False, "Output path is a directory"

        parent = path_obj.parent
        while not parent.exists():
            if parent == parent.parent:
                break
            parent = parent.parent
        if parent.exists() and not parent.is_dir():
            return False, f"{parent} is not a directory"

        return True, "Valid output path"

    @staticmethod
    def validate_suite(suite: str) -> Tuple[bool, str]:
        allowed = [s.value for s in Suite]
        if suite not in allowed:
            return False, f"Unknown suite {suite!r} (allowed: {', '.join(allowed)})"
        return True, "Valid suite"

    @staticmethod
    def validate_seed(seed: Union[int, str]) -> Tuple[bool, str, int]:
        try:
            seed_int = int(seed)
        except (ValueError, TypeError):
            return False, "Seed must be a valid integer", 0

        if seed_int < 0:
            return False, "Seed must be non-negative", 0

        return True, "Valid seed", seed_int
