"""
Hom-algebra structures and their axiom verifiers.

Every verifier quantifies over basis tuples only (by multilinearity that is
the same as quantifying over all elements) and compares both sides of each
identity coefficient by coefficient. A failing identity becomes a report
entry with the first failing basis tuple; verifiers raise only when a
precondition does not hold.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import product as iter_product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .config_manager import default_alpha_window
from .exact_tensor import (
    ONE,
    AlphaPowers,
    LinearMap,
    SparseTensor,
    StructureTensor,
    Vector,
    comultiply_sparse,
)
from .exceptions import DimensionMismatchError, MissingStructureError, PreconditionError
from .models import CheckResult, Flavor, VerificationReport
from .sweedler import (
    Act,
    Alpha,
    AlphaOp,
    Antipode,
    AntipodeOp,
    Comult,
    ComultOp,
    Const,
    Counit,
    Flip,
    LinearOp,
    Mul,
    OnLegs,
    Product,
    Space,
    SweedlerContext,
    SweedlerExpression,
    Tensor,
    Unit,
    Value,
    Var,
    basis_tensor,
)

logger = logging.getLogger(__name__)

SCALAR_ONE = Const(SparseTensor((), {(): ONE}), legs=())


# ---------------------------------------------------------------------------
# Data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False, kw_only=True)
class HomAlgebraData:
    """A Hom-algebra (A, α, m, η) given by structure constants."""

    dim: int
    mult: StructureTensor
    unit: Vector
    alpha: LinearMap
    basis_names: Tuple[str, ...] = ()
    name: str = ""
    alpha_window: int = field(default_factory=default_alpha_window)

    def __post_init__(self):
        n = self.dim
        if n < 1:
            raise DimensionMismatchError("dimension must be positive", 1, n)
        if self.mult.shape != (n, n, n):
            raise DimensionMismatchError(f"multiplication has shape {self.mult.shape}", n, self.mult.shape[0])
        if self.unit.dim != n:
            raise DimensionMismatchError("unit dimension differs", n, self.unit.dim)
        if (self.alpha.dim_in, self.alpha.dim_out) != (n, n):
            raise DimensionMismatchError("alpha must be an endomorphism of H", n, self.alpha.dim_in)
        if self.basis_names and len(self.basis_names) != n:
            raise DimensionMismatchError("one basis name per basis vector", n, len(self.basis_names))
        object.__setattr__(self, "basis_names", tuple(self.basis_names))

    @cached_property
    def alpha_powers(self) -> AlphaPowers:
        return AlphaPowers(self.alpha, self.alpha_window)

    def alpha_power(self, k: int) -> LinearMap:
        return self.alpha_powers(k)

    def label(self, index: int) -> str:
        return self.basis_names[index] if self.basis_names else f"e{index}"

    def space(self, name: str = "H") -> Space:
        return Space(
            name=name,
            dim=self.dim,
            mult=self.mult,
            unit=self.unit,
            alpha=self.alpha_powers,
            basis_names=self.basis_names,
        )

    @cached_property
    def _context(self) -> SweedlerContext:
        return SweedlerContext([self.space()])

    def context(self) -> SweedlerContext:
        return self._context


@dataclass(frozen=True, eq=False, kw_only=True)
class HomBialgebraData(HomAlgebraData):
    """
    A Hom-bialgebra of either flavor, optionally with an antipode.

    An ordinary bialgebra is the special case alpha = identity, flavor = plain.
    """

    comult: StructureTensor
    counit: LinearMap
    antipode: Optional[LinearMap] = None
    flavor: Flavor = Flavor.PLAIN

    def __post_init__(self):
        super().__post_init__()
        n = self.dim
        if self.comult.shape != (n, n, n):
            raise DimensionMismatchError(f"comultiplication has shape {self.comult.shape}", n, self.comult.shape[0])
        if (self.counit.dim_in, self.counit.dim_out) != (n, 1):
            raise DimensionMismatchError("counit must map H to the ground field", n, self.counit.dim_in)
        if self.antipode is not None and (self.antipode.dim_in, self.antipode.dim_out) != (n, n):
            raise DimensionMismatchError("antipode must be an endomorphism of H", n, self.antipode.dim_in)
        object.__setattr__(self, "flavor", Flavor(self.flavor))

    def space(self, name: str = "H") -> Space:
        return Space(
            name=name,
            dim=self.dim,
            mult=self.mult,
            unit=self.unit,
            comult=self.comult,
            counit=self.counit,
            alpha=self.alpha_powers,
            antipode=self.antipode,
            basis_names=self.basis_names,
        )

    @property
    def is_ordinary(self) -> bool:
        return self.flavor is Flavor.PLAIN and self.alpha.is_identity()


@dataclass(frozen=True, eq=False, kw_only=True)
class CoalgebraData:
    """A (Hom-)coalgebra; alpha defaults to the identity, i.e. an ordinary coalgebra."""

    dim: int
    comult: StructureTensor
    counit: LinearMap
    alpha: Optional[LinearMap] = None
    flavor: Flavor = Flavor.PLAIN
    basis_names: Tuple[str, ...] = ()
    name: str = ""
    alpha_window: int = field(default_factory=default_alpha_window)

    def __post_init__(self):
        if self.alpha is None:
            object.__setattr__(self, "alpha", LinearMap.identity(self.dim))
        if self.comult.shape != (self.dim,) * 3:
            raise DimensionMismatchError("comultiplication shape differs", self.dim, self.comult.shape[0])

    @cached_property
    def alpha_powers(self) -> AlphaPowers:
        return AlphaPowers(self.alpha, self.alpha_window)

    def space(self, name: str = "C") -> Space:
        return Space(
            name=name,
            dim=self.dim,
            comult=self.comult,
            counit=self.counit,
            alpha=self.alpha_powers,
            basis_names=self.basis_names,
        )

    def context(self) -> SweedlerContext:
        return SweedlerContext([self.space()])


class ModuleBase:
    """Shared behaviour of base modules and tensor-product modules."""

    name: str
    parent: HomBialgebraData

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def alpha(self) -> LinearMap:
        raise NotImplementedError

    @property
    def action_maps(self) -> Tuple[LinearMap, ...]:
        """ρ(e_h) as a map on the module, one per basis vector of H."""
        raise NotImplementedError

    @property
    def action(self) -> StructureTensor:
        raise NotImplementedError

    @property
    def basis_names(self) -> Tuple[str, ...]:
        return ()

    @cached_property
    def alpha_powers(self) -> AlphaPowers:
        # module exponents combine two grid indices, e.g. i - j - 1
        return AlphaPowers(self.alpha, 2 * self.parent.alpha_window + 1)

    def alpha_power(self, k: int) -> LinearMap:
        return self.alpha_powers(k)

    def act(self, element: Mapping[int, object]) -> LinearMap:
        """ρ(h) for an element of H given by sparse coordinates."""
        maps = self.action_maps
        return LinearMap.combination(self.dim, self.dim, ((c, maps[h]) for h, c in element.items() if c))

    def space(self, name: Optional[str] = None, **structure) -> Space:
        return Space(
            name=name or self.name,
            dim=self.dim,
            alpha=self.alpha_powers,
            basis_names=self.basis_names,
            **structure,
        )

    def context(self, name: Optional[str] = None, **structure) -> SweedlerContext:
        name = name or self.name
        return self.parent.context().extend([self.space(name, **structure)], {("H", name): self.action})


def _maps_from_action(action: StructureTensor, dim_h: int, dim: int) -> Tuple[LinearMap, ...]:
    maps: List[Dict[Tuple[int, int], object]] = [dict() for _ in range(dim_h)]
    for (h, m, target), value in action.entries.items():
        maps[h][(target, m)] = value
    return tuple(LinearMap(dim, dim, entries) for entries in maps)


def action_from_maps(maps: Sequence[LinearMap], dim: int) -> StructureTensor:
    entries = {}
    for h, rho in enumerate(maps):
        for (target, m), value in rho.entries.items():
            entries[(h, m, target)] = value
    return StructureTensor((len(maps), dim, dim), entries)


@dataclass(frozen=True, eq=False)
class HomModuleData(ModuleBase):
    """A left Hom-module (M, α_M) over ``parent``; action[h][m][m'] is the coefficient of e_{m'} in e_h · e_m."""

    dim_m: int
    module_action: StructureTensor
    alpha_m: LinearMap
    parent: HomBialgebraData
    name: str = "M"
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        expected = (self.parent.dim, self.dim_m, self.dim_m)
        if self.module_action.shape != expected:
            raise DimensionMismatchError(f"action has shape {self.module_action.shape}, expected {expected}")
        if (self.alpha_m.dim_in, self.alpha_m.dim_out) != (self.dim_m, self.dim_m):
            raise DimensionMismatchError("alpha_M must be an endomorphism of M", self.dim_m, self.alpha_m.dim_in)
        if not self.alpha_m.is_invertible():
            raise PreconditionError(f"module {self.name!r} has a singular structure map", offending=self.name)

    @property
    def dim(self) -> int:
        return self.dim_m

    @property
    def alpha(self) -> LinearMap:
        return self.alpha_m

    @property
    def action(self) -> StructureTensor:
        return self.module_action

    @property
    def basis_names(self) -> Tuple[str, ...]:
        return self.names

    @cached_property
    def action_maps(self) -> Tuple[LinearMap, ...]:
        return _maps_from_action(self.module_action, self.parent.dim, self.dim_m)

    @classmethod
    def from_maps(cls, parent, maps: Sequence[LinearMap], alpha_m: LinearMap, name: str = "M", names=()):
        dim = alpha_m.dim_in
        return cls(dim, action_from_maps(maps, dim), alpha_m, parent, name, tuple(names))

    def reparent(self, parent: HomBialgebraData) -> "HomModuleData":
        """The same carrier, action and structure map viewed over another Hom-bialgebra on H."""
        return replace(self, parent=parent)

    def renamed(self, name: str) -> "HomModuleData":
        return replace(self, name=name)


@dataclass(frozen=True, eq=False)
class ModuleAlgebraData:
    """A Hom-module whose carrier is also a monoidal Hom-algebra with structure map α_M."""

    module: HomModuleData
    mult: StructureTensor
    unit: Vector

    def context(self, name: str = "A") -> SweedlerContext:
        return self.module.context(name, mult=self.mult, unit=self.unit)

    def as_algebra(self) -> HomAlgebraData:
        return HomAlgebraData(
            dim=self.module.dim,
            mult=self.mult,
            unit=self.unit,
            alpha=self.module.alpha,
            basis_names=self.module.basis_names,
            name=self.module.name,
            alpha_window=self.module.parent.alpha_window,
        )


@dataclass(frozen=True, eq=False)
class ModuleCoalgebraData:
    """A Hom-module whose carrier is also a monoidal Hom-coalgebra with structure map α_M."""

    module: HomModuleData
    comult: StructureTensor
    counit: LinearMap

    def context(self, name: str = "C") -> SweedlerContext:
        return self.module.context(name, comult=self.comult, counit=self.counit)


# ---------------------------------------------------------------------------
# Structure-constant helpers
# ---------------------------------------------------------------------------


def postcompose_mult(mult: StructureTensor, f: LinearMap) -> StructureTensor:
    """The product f ∘ m."""
    return StructureTensor.from_function(mult.shape, lambda a, b: f.apply_sparse(dict(mult.binary(a, b))))


def precompose_comult(comult: StructureTensor, f: LinearMap) -> StructureTensor:
    """The coproduct Δ ∘ f."""
    return StructureTensor.from_unary(comult.shape, lambda a: comultiply_sparse(comult, dict(f.columns[a])))


def structure_difference(A: HomBialgebraData, B: HomBialgebraData) -> Optional[str]:
    """First structure map on which A and B differ (same basis), or None."""
    if A.dim != B.dim:
        return f"dimension {A.dim} vs {B.dim}"
    diff = A.mult.first_difference(B.mult)
    if diff is not None:
        return f"mult at {diff}"
    diff = A.comult.first_difference(B.comult)
    if diff is not None:
        return f"comult at {diff}"
    if A.unit != B.unit:
        return "unit"
    if A.counit != B.counit:
        return "counit"
    if A.alpha != B.alpha:
        return "alpha"
    if (A.antipode is None) != (B.antipode is None) or (A.antipode is not None and A.antipode != B.antipode):
        return "antipode"
    return None


# ---------------------------------------------------------------------------
# Identity engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    """lhs = rhs for all basis values of ``variables`` (pairs of name and space)."""

    check_id: str
    anchor: str
    lhs: SweedlerExpression
    rhs: SweedlerExpression
    variables: Tuple[Tuple[str, str], ...] = ()


def identity_inputs(ctx: SweedlerContext, identity: Identity, indices: Sequence[int]) -> Dict[str, Value]:
    inputs = {}
    for (name, space_name), index in zip(identity.variables, indices):
        space = ctx.space(space_name)
        inputs[name] = Value(basis_tensor(space.dim, index), (space_name,))
    return inputs


def evaluate_sides(ctx: SweedlerContext, identity: Identity, indices: Sequence[int]) -> Tuple[SparseTensor, SparseTensor]:
    """Both sides of an identity at one basis tuple; used to replay counterexamples."""
    inputs = identity_inputs(ctx, identity, indices)
    return identity.lhs.evaluate(ctx, inputs).tensor, identity.rhs.evaluate(ctx, inputs).tensor


def verify_identity(ctx: SweedlerContext, identity: Identity, informational: bool = False) -> CheckResult:
    start = time.perf_counter()
    spaces = [ctx.space(space) for _, space in identity.variables]
    counterexample = None
    detail = None
    for indices in iter_product(*(range(sp.dim) for sp in spaces)):
        lhs, rhs = evaluate_sides(ctx, identity, indices)
        if lhs == rhs:
            continue
        if lhs.dims != rhs.dims:
            where = f"shapes {lhs.dims} and {rhs.dims}"
        else:
            where = f"coefficient {lhs.first_difference(rhs)}"
        if identity.variables:
            counterexample = list(indices)
            named = ", ".join(
                f"{name}={sp.label(i)}" for (name, _), sp, i in zip(identity.variables, spaces, indices)
            )
            detail = f"{named}: sides differ at {where}"
        else:
            counterexample = list(lhs.first_difference(rhs) or ()) if lhs.dims == rhs.dims else []
            detail = f"sides differ at {where}"
        break
    elapsed = (time.perf_counter() - start) * 1000
    return CheckResult(
        check_id=identity.check_id,
        anchor=identity.anchor,
        passed=counterexample is None,
        counterexample=counterexample,
        detail=detail,
        informational=informational,
        duration_ms=round(elapsed, 3),
    )


def run_identities(
    ctx: SweedlerContext,
    identities: Iterable[Identity],
    subject: str = "",
    informational: Iterable[str] = (),
) -> VerificationReport:
    informational = set(informational)
    report = VerificationReport(subject=subject)
    for identity in identities:
        result = verify_identity(ctx, identity, informational=identity.check_id in informational)
        if not result.passed and not result.informational:
            logger.warning("%s: %s failed (%s)", subject or "check", identity.check_id, result.detail)
        report.add(result)
    return report


def _log_report(kind: str, report: VerificationReport) -> VerificationReport:
    logger.info("%s checks on %s: %d/%d passed", kind, report.subject or "<unnamed>", report.passed, report.total)
    return report


def check_result(check_id: str, anchor: str, passed: bool, counterexample=None, detail=None,
                 informational: bool = False) -> CheckResult:
    """A check computed outside the identity engine (ranks, structural equalities)."""
    if not passed and counterexample is None:
        counterexample = []
    return CheckResult(
        check_id=check_id,
        anchor=anchor,
        passed=passed,
        counterexample=None if passed else counterexample,
        detail=detail,
        informational=informational,
    )


# ---------------------------------------------------------------------------
# Identity families
# ---------------------------------------------------------------------------


def algebra_identities(space: str = "H") -> List[Identity]:
    a, b, c = Var("a", (space,)), Var("b", (space,)), Var("c", (space,))
    one = Unit(space)
    two = (("a", space), ("b", space))
    return [
        Identity("algebra.alpha_multiplicative", "α(ab) = α(a)α(b)",
                 Alpha(Mul(a, b)), Mul(Alpha(a), Alpha(b)), two),
        Identity("algebra.hom_associativity", "α(a)(bc) = (ab)α(c)",
                 Mul(Alpha(a), Mul(b, c)), Mul(Mul(a, b), Alpha(c)), two + (("c", space),)),
        Identity("algebra.alpha_unit", "α(1) = 1", Alpha(one), one),
        Identity("algebra.left_unit", "1a = α(a)", Mul(one, a), Alpha(a), (("a", space),)),
        Identity("algebra.right_unit", "a1 = α(a)", Mul(a, one), Alpha(a), (("a", space),)),
    ]


def coalgebra_identities(flavor: Flavor, space: str = "H") -> List[Identity]:
    c = Var("c", (space,))
    power = -1 if Flavor(flavor) is Flavor.MONOIDAL else 1
    shown = "α^{-1}" if power == -1 else "α"
    one = (("c", space),)
    return [
        Identity("coalgebra.alpha_comultiplicative", "Δ(α(c)) = α(c₁) ⊗ α(c₂)",
                 Comult(Alpha(c)), Alpha(Comult(c)), one),
        Identity("coalgebra.hom_coassociativity", f"{shown}(c₁) ⊗ Δ(c₂) = Δ(c₁) ⊗ {shown}(c₂)",
                 OnLegs(Comult(c), (AlphaOp(power), ComultOp())),
                 OnLegs(Comult(c), (ComultOp(), AlphaOp(power))), one),
        Identity("coalgebra.counit_alpha", "ε(α(c)) = ε(c)", Counit(Alpha(c)), Counit(c), one),
        Identity("coalgebra.left_counit", f"ε(c₁)c₂ = {shown}(c)", Counit(Comult(c), 0), Alpha(c, power), one),
        Identity("coalgebra.right_counit", f"c₁ε(c₂) = {shown}(c)", Counit(Comult(c), 1), Alpha(c, power), one),
    ]


def bialgebra_identities(space: str = "H") -> List[Identity]:
    a, b = Var("a", (space,)), Var("b", (space,))
    one = Unit(space)
    two = (("a", space), ("b", space))
    return [
        Identity("bialgebra.comult_multiplicative", "Δ(ab) = Δ(a)Δ(b)",
                 Comult(Mul(a, b)), Mul(Comult(a), Comult(b)), two),
        Identity("bialgebra.comult_unit", "Δ(1) = 1 ⊗ 1", Comult(one), Tensor((one, one))),
        Identity("bialgebra.counit_multiplicative", "ε(ab) = ε(a)ε(b)",
                 Counit(Mul(a, b)), Tensor((Counit(a), Counit(b))), two),
        Identity("bialgebra.counit_unit", "ε(1) = 1", Counit(one), SCALAR_ONE),
    ]


ANTIPODE_DERIVED = (
    "antipode.anti_multiplicative",
    "antipode.unit",
    "antipode.anti_comultiplicative",
    "antipode.counit",
)


def antipode_identities(space: str = "H") -> List[Identity]:
    a, b = Var("a", (space,)), Var("b", (space,))
    one = Unit(space)
    single = (("a", space),)
    unit_counit = Tensor((Counit(a), one))
    return [
        Identity("antipode.left_convolution", "S(a₁)a₂ = ε(a)1",
                 Product(OnLegs(Comult(a), (AntipodeOp(), None)), (0, 1)), unit_counit, single),
        Identity("antipode.right_convolution", "a₁S(a₂) = ε(a)1",
                 Product(OnLegs(Comult(a), (None, AntipodeOp())), (0, 1)), unit_counit, single),
        Identity("antipode.alpha_commutes", "S(α(a)) = α(S(a))", Antipode(Alpha(a)), Alpha(Antipode(a)), single),
        Identity("antipode.anti_multiplicative", "S(ab) = S(b)S(a)",
                 Antipode(Mul(a, b)), Mul(Antipode(b), Antipode(a)), single + (("b", space),)),
        Identity("antipode.unit", "S(1) = 1", Antipode(one), one),
        Identity("antipode.anti_comultiplicative", "Δ(S(a)) = S(a₂) ⊗ S(a₁)",
                 Comult(Antipode(a)), Flip(OnLegs(Comult(a), (AntipodeOp(), AntipodeOp()))), single),
        Identity("antipode.counit", "ε(S(a)) = ε(a)", Counit(Antipode(a)), Counit(a), single),
    ]


def module_identities(module: str = "M") -> List[Identity]:
    b, b2 = Var("b"), Var("b2")
    m = Var("m", (module,))
    return [
        Identity("module.alpha_compatible", "α_M(b·m) = α(b)·α_M(m)",
                 Alpha(Act(b, m)), Act(Alpha(b), Alpha(m)), (("b", "H"), ("m", module))),
        Identity("module.hom_associativity", "α(b)·(b′·m) = (bb′)·α_M(m)",
                 Act(Alpha(b), Act(b2, m)), Act(Mul(b, b2), Alpha(m)),
                 (("b", "H"), ("b2", "H"), ("m", module))),
        Identity("module.unit", "1·m = α_M(m)", Act(Unit("H"), m), Alpha(m), (("m", module),)),
    ]


def module_algebra_identities(space: str = "A") -> List[Identity]:
    h = Var("h")
    a, b = Var("a", (space,)), Var("b", (space,))
    return [
        Identity("module_algebra.product", "h·(ab) = (h₁·a)(h₂·b)",
                 Act(h, Mul(a, b)), Product(Act(Comult(h), Tensor((a, b))), (0, 1)),
                 (("h", "H"), ("a", space), ("b", space))),
        Identity("module_algebra.unit", "h·1 = ε(h)1",
                 Act(h, Unit(space)), Tensor((Counit(h), Unit(space))), (("h", "H"),)),
    ]


def module_coalgebra_identities(space: str = "C") -> List[Identity]:
    h = Var("h")
    c = Var("c", (space,))
    pair = (("h", "H"), ("c", space))
    return [
        Identity("module_coalgebra.comult", "Δ_C(h·c) = h₁·c₁ ⊗ h₂·c₂",
                 Comult(Act(h, c)), Act(Comult(h), Comult(c)), pair),
        Identity("module_coalgebra.counit", "ε_C(h·c) = ε(h)ε_C(c)",
                 Counit(Act(h, c)), Tensor((Counit(h), Counit(c))), pair),
    ]


# ---------------------------------------------------------------------------
# Verifiers
# ---------------------------------------------------------------------------


def _subject(obj, fallback: str) -> str:
    return getattr(obj, "name", "") or fallback


def check_hom_algebra(A, ctx: Optional[SweedlerContext] = None, space: str = "H") -> VerificationReport:
    """Multiplicativity of α, Hom-associativity and the unit axioms on all basis tuples."""
    ctx = ctx or A.context()
    report = run_identities(ctx, algebra_identities(space), subject=_subject(A, "algebra"))
    return _log_report("algebra", report)


def check_hom_coalgebra(
    A, ctx: Optional[SweedlerContext] = None, space: str = "H", flavor: Optional[Flavor] = None
) -> VerificationReport:
    """
    Coalgebra axioms for the flavor of ``A`` (or ``flavor`` when given).

    The monoidal set uses α^{-1} and therefore needs α invertible.
    """
    flavor = Flavor(flavor or A.flavor)
    ctx = ctx or A.context()
    if flavor is Flavor.MONOIDAL and not ctx.space(space).require("alpha").invertible:
        raise PreconditionError("monoidal coalgebra axioms need an invertible structure map", offending="alpha")
    report = run_identities(ctx, coalgebra_identities(flavor, space), subject=_subject(A, "coalgebra"))
    return _log_report(f"{flavor.value} coalgebra", report)


def check_flavor_agreement(A: HomBialgebraData) -> VerificationReport:
    """Both coalgebra axiom sets, reported informationally, plus whether their verdicts agree."""
    report = VerificationReport(subject=_subject(A, "coalgebra"))
    verdicts = {}
    for flavor in (Flavor.MONOIDAL, Flavor.PLAIN):
        if flavor is Flavor.MONOIDAL and not A.alpha_powers.invertible:
            report.add(check_result("flavor.monoidal_axioms", "γ^{-1}(c₁) ⊗ Δ(c₂) = Δ(c₁) ⊗ γ^{-1}(c₂)",
                                    False, [], "structure map is singular", informational=True))
            verdicts[flavor] = False
            continue
        sub = check_hom_coalgebra(A, flavor=flavor)
        verdicts[flavor] = sub.ok
        report.extend(sub.as_informational(), prefix=f"{flavor.value}.")
    agree = verdicts[Flavor.MONOIDAL] == verdicts[Flavor.PLAIN]
    report.add(check_result(
        "flavor.agreement", "monoidal and plain coalgebra axioms agree", agree,
        detail=f"monoidal={verdicts[Flavor.MONOIDAL]}, plain={verdicts[Flavor.PLAIN]}",
        informational=True,
    ))
    return report


def check_hom_bialgebra(A: HomBialgebraData) -> VerificationReport:
    report = VerificationReport(subject=_subject(A, "bialgebra"))
    report.extend(check_hom_algebra(A))
    report.extend(check_hom_coalgebra(A))
    report.extend(run_identities(A.context(), bialgebra_identities(), subject=report.subject))
    return _log_report("bialgebra", report)


def check_antipode(A: HomBialgebraData) -> VerificationReport:
    """
    Convolution identities S * id = id * S = ηε and S∘α = α∘S, plus the
    derived anti-(co)multiplicativity properties. The derived properties are
    informational when α is singular.
    """
    if A.antipode is None:
        raise MissingStructureError(f"{_subject(A, 'bialgebra')} has no antipode")
    informational = () if A.alpha_powers.invertible else ANTIPODE_DERIVED
    report = run_identities(A.context(), antipode_identities(), subject=_subject(A, "hopf"),
                            informational=informational)
    return _log_report("antipode", report)


def check_hom_module(M: ModuleBase) -> VerificationReport:
    report = run_identities(M.context(), module_identities(M.name), subject=f"{M.parent.name}-module {M.name}")
    return _log_report("module", report)


def check_module_algebra(A_mod: ModuleAlgebraData, space: str = "A") -> VerificationReport:
    """Module axioms, monoidal Hom-algebra axioms of the carrier and the two compatibility conditions."""
    ctx = A_mod.context(space)
    subject = f"module algebra {A_mod.module.name}"
    report = VerificationReport(subject=subject)
    report.extend(run_identities(ctx, module_identities(space), subject=subject))
    report.extend(run_identities(ctx, algebra_identities(space), subject=subject))
    report.extend(run_identities(ctx, module_algebra_identities(space), subject=subject))
    return _log_report("module algebra", report)


def check_module_coalgebra(C_mod: ModuleCoalgebraData, space: str = "C") -> VerificationReport:
    ctx = C_mod.context(space)
    subject = f"module coalgebra {C_mod.module.name}"
    report = VerificationReport(subject=subject)
    report.extend(run_identities(ctx, module_identities(space), subject=subject))
    report.extend(run_identities(ctx, coalgebra_identities(Flavor.MONOIDAL, space), subject=subject))
    report.extend(run_identities(ctx, module_coalgebra_identities(space), subject=subject))
    return _log_report("module coalgebra", report)


def check_bialgebra_morphism(A: HomBialgebraData, f: LinearMap, require_invertible: bool = False) -> VerificationReport:
    """Whether f: A -> A preserves every structure map; invertibility is reported alongside."""
    if (f.dim_in, f.dim_out) != (A.dim, A.dim):
        raise DimensionMismatchError("morphism must be an endomorphism of A", A.dim, f.dim_in)
    F = LinearOp(f)
    a, b = Var("a"), Var("b")
    single = (("a", "H"),)

    def fa(expr):
        return OnLegs(expr, (F,))

    identities = [
        Identity("morphism.multiplicative", "f(ab) = f(a)f(b)", fa(Mul(a, b)), Mul(fa(a), fa(b)),
                 single + (("b", "H"),)),
        Identity("morphism.unit", "f(1) = 1", fa(Unit()), Unit()),
        Identity("morphism.comultiplicative", "Δ(f(a)) = (f ⊗ f)Δ(a)", Comult(fa(a)), OnLegs(Comult(a), (F, F)), single),
        Identity("morphism.counit", "ε(f(a)) = ε(a)", Counit(fa(a)), Counit(a), single),
        Identity("morphism.alpha_commutes", "f(α(a)) = α(f(a))", fa(Alpha(a)), Alpha(fa(a)), single),
    ]
    report = run_identities(A.context(), identities, subject=_subject(A, "bialgebra"))
    invertible = f.is_invertible()
    report.add(check_result(
        "morphism.invertible", "f is bijective", invertible,
        detail=f"rank {f.rank()} of {A.dim}" if not invertible else None,
        informational=not require_invertible,
    ))
    return _log_report("morphism", report)


def check_module_morphism(f: LinearMap, M: ModuleBase, N: ModuleBase) -> VerificationReport:
    """α_N ∘ f = f ∘ α_M and f(h·m) = h·f(m)."""
    if (f.dim_in, f.dim_out) != (M.dim, N.dim):
        raise DimensionMismatchError(f"map {f} does not go from {M.name} to {N.name}")
    ctx = M.parent.context().extend(
        [M.space("M"), N.space("N")],
        {("H", "M"): M.action, ("H", "N"): N.action},
    )
    F = LinearOp(f, target="N")
    m, h = Var("m", ("M",)), Var("h")
    identities = [
        Identity("module_morphism.alpha_compatible", "α_N(f(m)) = f(α_M(m))",
                 Alpha(OnLegs(m, (F,))), OnLegs(Alpha(m), (F,)), (("m", "M"),)),
        Identity("module_morphism.linear", "f(h·m) = h·f(m)",
                 OnLegs(Act(h, m), (F,)), Act(h, OnLegs(m, (F,))), (("h", "H"), ("m", "M"))),
    ]
    return run_identities(ctx, identities, subject=f"{M.name} -> {N.name}")


def verify_suite(A: HomBialgebraData, include_antipode: Optional[bool] = None) -> VerificationReport:
    """Full bialgebra suite, plus the antipode checks when an antipode is present."""
    report = check_hom_bialgebra(A)
    if include_antipode or (include_antipode is None and A.antipode is not None):
        report.extend(check_antipode(A))
    return report
