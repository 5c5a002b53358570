"""Pydantic models for verification reports, configuration records and file schemas."""

from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from .config_manager import default_alpha_window
from .exceptions import AlphaWindowExceededError


class Flavor(str, Enum):
    """Axiom system of a Hom-bialgebra."""

    MONOIDAL = "monoidal"
    PLAIN = "plain"


class RMatrixSystem(str, Enum):
    """Axiom system an R-matrix targets."""

    MONOIDAL_Q = "monoidal_Q"
    PLAIN_Q = "plain_q"

    @property
    def flavor(self) -> Flavor:
        return Flavor.MONOIDAL if self is RMatrixSystem.MONOIDAL_Q else Flavor.PLAIN

    @classmethod
    def for_flavor(cls, flavor: Flavor) -> "RMatrixSystem":
        return cls.MONOIDAL_Q if Flavor(flavor) is Flavor.MONOIDAL else cls.PLAIN_Q


class Suite(str, Enum):
    """Check suites selectable from the command line."""

    ALGEBRA = "algebra"
    COALGEBRA = "coalgebra"
    BIALGEBRA = "bialgebra"
    HOPF = "hopf"
    MODULE = "module"
    ALL = "all"


class CheckResult(BaseModel):
    """One verified identity."""

    check_id: str = Field(..., description="Stable identifier, e.g. algebra.hom_associativity")
    anchor: str = Field("", description="The identity being checked, as a formula")
    passed: bool
    counterexample: Optional[List[Any]] = Field(
        None, description="First failing basis tuple (basis names or indices)"
    )
    detail: Optional[str] = Field(None, description="Extra diagnostic text")
    informational: bool = Field(False, description="Reported but excluded from pass/fail totals")
    duration_ms: Optional[float] = Field(None, ge=0)

    @model_validator(mode="after")
    def failures_carry_counterexample(self):
        if not self.passed and self.counterexample is None:
            raise ValueError(f"failing check {self.check_id} has no counterexample")
        return self

    @property
    def status(self) -> str:
        if self.passed:
            return "PASS"
        return "INFO" if self.informational else "FAIL"


class VerificationReport(BaseModel):
    """Ordered list of check results for one subject."""

    subject: str = ""
    checks: List[CheckResult] = Field(default_factory=list)

    @computed_field
    @property
    def total(self) -> int:
        return len(self.required)

    @computed_field
    @property
    def failed(self) -> int:
        return sum(1 for c in self.required if not c.passed)

    @computed_field
    @property
    def passed(self) -> int:
        return self.total - self.failed

    @property
    def required(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.informational]

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def failures(self) -> List[CheckResult]:
        return [c for c in self.required if not c.passed]

    def get(self, check_id: str) -> Optional[CheckResult]:
        return next((c for c in self.checks if c.check_id == check_id), None)

    def add(self, result: CheckResult) -> "VerificationReport":
        self.checks.append(result)
        return self

    def extend(self, other: "VerificationReport", prefix: str = "") -> "VerificationReport":
        for check in other.checks:
            if prefix:
                check = check.model_copy(update={"check_id": f"{prefix}{check.check_id}"})
            self.checks.append(check)
        return self

    def as_informational(self) -> "VerificationReport":
        return VerificationReport(
            subject=self.subject,
            checks=[c.model_copy(update={"informational": True}) for c in self.checks],
        )


class ReportTotals(BaseModel):
    total: int = Field(..., ge=0)
    passed: int = Field(..., ge=0)
    failed: int = Field(..., ge=0)
    informational: int = Field(0, ge=0)


class ReportFile(BaseModel):
    """Machine-readable report written by every command."""

    format_version: Literal[1] = 1
    command: str
    subject: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    records: List[CheckResult] = Field(default_factory=list)
    totals: ReportTotals

    @model_validator(mode="after")
    def totals_match_records(self):
        required = [r for r in self.records if not r.informational]
        failed = sum(1 for r in required if not r.passed)
        expected = (len(required), len(required) - failed, failed, len(self.records) - len(required))
        actual = (self.totals.total, self.totals.passed, self.totals.failed, self.totals.informational)
        if expected != actual:
            raise ValueError(f"report totals {actual} do not match records {expected}")
        return self

    @classmethod
    def from_report(
        cls,
        command: str,
        report: VerificationReport,
        parameters: Optional[Dict[str, Any]] = None,
        include_timing: bool = True,
    ) -> "ReportFile":
        records = [
            r if include_timing else r.model_copy(update={"duration_ms": None}) for r in report.checks
        ]
        info = sum(1 for r in records if r.informational)
        return cls(
            command=command,
            subject=report.subject,
            parameters=parameters or {},
            records=records,
            totals=ReportTotals(total=report.total, passed=report.passed, failed=report.failed, informational=info),
        )

    @property
    def ok(self) -> bool:
        return self.totals.failed == 0


# --- Algebra file schema ---------------------------------------------------

# (index, numerator, denominator)
SparseVectorEntry = Tuple[int, int, int]
# (row, col, numerator, denominator)
SparseMatrixEntry = Tuple[int, int, int, int]
# (i, j, k, numerator, denominator)
SparseTripleEntry = Tuple[int, int, int, int, int]


def _check_denominators(entries, position: int) -> None:
    for entry in entries:
        if entry[position] == 0:
            raise ValueError(f"zero denominator in entry {list(entry)}")


class NamedTwistEntry(BaseModel):
    coeffs: List[SparseMatrixEntry]

    @field_validator("coeffs")
    @classmethod
    def nonzero_denominators(cls, v):
        _check_denominators(v, 3)
        return v


class NamedRMatrixEntry(BaseModel):
    system: RMatrixSystem
    coeffs: List[SparseMatrixEntry]

    @field_validator("coeffs")
    @classmethod
    def nonzero_denominators(cls, v):
        _check_denominators(v, 3)
        return v


class AlgebraFile(BaseModel):
    """Canonical on-disk form of a Hom-bialgebra and its named elements."""

    model_config = ConfigDict(extra="forbid")

    format_version: Literal[1] = 1
    name: str = ""
    dim: int = Field(..., ge=1)
    basis: List[str]
    flavor: Flavor
    mult: List[SparseTripleEntry]
    comult: List[SparseTripleEntry]
    unit: List[SparseVectorEntry]
    counit: List[SparseVectorEntry]
    alpha: List[SparseMatrixEntry]
    antipode: Optional[List[SparseMatrixEntry]] = None
    twists: Dict[str, NamedTwistEntry] = Field(default_factory=dict)
    rmatrices: Dict[str, NamedRMatrixEntry] = Field(default_factory=dict)

    @field_validator("mult", "comult")
    @classmethod
    def triple_denominators(cls, v):
        _check_denominators(v, 4)
        return v

    @field_validator("unit", "counit")
    @classmethod
    def vector_denominators(cls, v):
        _check_denominators(v, 2)
        return v

    @field_validator("alpha", "antipode")
    @classmethod
    def matrix_denominators(cls, v):
        if v is not None:
            _check_denominators(v, 3)
        return v

    @model_validator(mode="after")
    def indices_in_range(self):
        n = self.dim
        if len(self.basis) != n:
            raise ValueError(f"basis has {len(self.basis)} names for dimension {n}")

        def check(label: str, entries, width: int, bounds: Tuple[int, ...]):
            for entry in entries:
                for idx, bound in zip(entry[:width], bounds):
                    if not 0 <= idx < bound:
                        raise ValueError(f"{label}: index {idx} out of range in {list(entry)}")

        check("mult", self.mult, 3, (n, n, n))
        check("comult", self.comult, 3, (n, n, n))
        check("unit", self.unit, 1, (n,))
        check("counit", self.counit, 1, (n,))
        check("alpha", self.alpha, 2, (n, n))
        if self.antipode is not None:
            check("antipode", self.antipode, 2, (n, n))
        for name, twist in self.twists.items():
            check(f"twist {name}", twist.coeffs, 2, (n, n))
        for name, rmatrix in self.rmatrices.items():
            check(f"rmatrix {name}", rmatrix.coeffs, 2, (n, n))
        return self


# --- Representation category ---------------------------------------------


class RepConfig(BaseModel):
    """A point (i, j) of the Rep^{i,j} family together with the axiom flavor."""

    model_config = ConfigDict(frozen=True)

    i: int
    j: int
    flavor: Flavor = Flavor.MONOIDAL
    window: int = Field(default_factory=default_alpha_window, ge=1, exclude=True)

    @model_validator(mode="after")
    def within_window(self):
        for power in (self.i, self.j):
            if abs(power) > self.window:
                raise AlphaWindowExceededError(power, self.window)
        return self

    @property
    def left_shift(self) -> int:
        """Exponent offset p with a = α_M^{-p} ⊗ id ⊗ α_P^{q}."""
        return self.i - 1 if self.flavor is Flavor.MONOIDAL else self.i + 1

    @property
    def right_shift(self) -> int:
        return self.j - 1 if self.flavor is Flavor.MONOIDAL else self.j + 1

    def shifted(self, di: int, dj: int, flavor: Optional[Flavor] = None) -> "RepConfig":
        return RepConfig(i=self.i + di, j=self.j + dj, flavor=flavor or self.flavor, window=self.window)

    def label(self) -> str:
        return f"{self.flavor.value}({self.i},{self.j})"
