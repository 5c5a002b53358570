"""
Drinfeld twists of monoidal Hom-bialgebras.

A twist σ ∈ H ⊗ H is α-invariant, normalized and satisfies the 2-cocycle
identity; its inverse ϱ is computed by solving the two one-sided systems
σ·ϱ = 1⊗1 and ϱ·σ = 1⊗1 in the componentwise Hom-product. Twisting
replaces the coproduct by Δ^σ(x) = (σΔ(x))ϱ, which yields a Hom-bialgebra
of the plain flavor.
"""

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any, List, Optional, Tuple

from .exact_tensor import (
    LinearMap,
    SparseTensor,
    StructureTensor,
    TensorElement2,
    Vector,
    flat_index,
    hom_product,
    solve_linear,
    unflatten,
)
from .exceptions import (
    DimensionMismatchError,
    FlavorMismatchError,
    LeftRightMismatchError,
    MissingStructureError,
    PreconditionError,
    TheoremCheckFailed,
)
from .hom_structures import (
    CoalgebraData,
    HomAlgebraData,
    HomBialgebraData,
    Identity,
    ModuleAlgebraData,
    ModuleCoalgebraData,
    bialgebra_identities,
    check_antipode,
    check_flavor_agreement,
    check_hom_algebra,
    check_hom_bialgebra,
    check_hom_coalgebra,
    check_module_algebra,
    check_module_coalgebra,
    run_identities,
)
from .models import Flavor, VerificationReport
from .sweedler import (
    Act,
    Alpha,
    AlphaOp,
    Comult,
    Const,
    Counit,
    LinearOp,
    Mul,
    OnLegs,
    Product,
    Tensor,
    Tree,
    Unit,
    Var,
    apply_sweedler,
    enumerate_bracketings,
    format_bracketing,
)

logger = logging.getLogger(__name__)

# (σ^{(1)} (S(α^{-1}σ^{(2)}) (S(α^{-4}x) S(α^{-3}ϱ^{(1)})))) ϱ^{(2)}
PRINTED_ANTIPODE_BRACKETING: Tree = ((0, (1, (2, 3))), 4)
ANTIPODE_WORD_NAMES = ("σ¹", "S(α⁻¹σ²)", "S(α⁻⁴x)", "S(α⁻³ϱ¹)", "ϱ²")


@dataclass(frozen=True, eq=False)
class TwistData:
    """A validated twist σ with its computed inverse ϱ."""

    sigma: TensorElement2
    rho: TensorElement2
    parent: HomBialgebraData
    name: str = ""
    report: Optional[VerificationReport] = field(default=None, repr=False)

    @property
    def sigma21(self) -> SparseTensor:
        return self.sigma.flip()

    @property
    def is_trivial(self) -> bool:
        return self.sigma == TensorElement2.unit(self.parent.dim, self.parent.unit)

    @cached_property
    def constants(self) -> Tuple[Const, Const]:
        return Const(self.sigma), Const(self.rho)


@dataclass
class Validation:
    """Outcome of validating a candidate element: the validated object, or None plus the failing report."""

    value: Optional[Any]
    report: VerificationReport

    @property
    def ok(self) -> bool:
        return self.value is not None


@dataclass
class TwistedHopf:
    algebra: HomBialgebraData
    bracketing: Tree
    report: VerificationReport
    attempts: List[Tuple[Tree, bool]] = field(default_factory=list)

    @property
    def printed_bracketing_verified(self) -> bool:
        return self.bracketing == PRINTED_ANTIPODE_BRACKETING


def unit_tensor(H: HomAlgebraData) -> TensorElement2:
    return TensorElement2.unit(H.dim, H.unit)


def as_tensor2(H: HomAlgebraData, element: SparseTensor) -> TensorElement2:
    if element.dims != (H.dim, H.dim):
        raise DimensionMismatchError(f"element of shape {element.dims} is not in H ⊗ H", H.dim, element.dims[0])
    return TensorElement2(element.dims, element.coeffs)


def invert_tensor2(H: HomAlgebraData, sigma: SparseTensor) -> TensorElement2:
    """
    The two-sided inverse of sigma for the componentwise Hom-product on H ⊗ H.

    Raises NoSolutionError, NonUniqueSolutionError or LeftRightMismatchError.
    """
    sigma = as_tensor2(H, sigma)
    dims = (H.dim, H.dim)
    size = H.dim * H.dim

    def multiplication_map(on_left: bool) -> LinearMap:
        def column(flat):
            basis = SparseTensor.pure(dims, unflatten(flat, dims))
            product = hom_product(H.mult, sigma, basis) if on_left else hom_product(H.mult, basis, sigma)
            return {flat_index(k, dims): v for k, v in product.coeffs.items()}

        return LinearMap.from_function(size, size, column)

    target = unit_tensor(H).flatten()
    left = solve_linear(multiplication_map(True), target)
    right = solve_linear(multiplication_map(False), target)
    if left != right:
        raise LeftRightMismatchError("left and right inverses of the tensor differ")
    return TensorElement2.from_pairs(H.dim, {unflatten(i, dims): c for i, c in left.sparse().items()})


def twist_identities(sigma: SparseTensor) -> List[Identity]:
    S = Const(sigma)
    return [
        Identity("twist.alpha_invariance", "(α ⊗ α)(σ) = σ", Alpha(S), S),
        Identity("twist.normalization_left", "(ε ⊗ id)(σ) = 1", Counit(S, 0), Unit()),
        Identity("twist.normalization_right", "(id ⊗ ε)(σ) = 1", Counit(S, 1), Unit()),
        Identity(
            "twist.cocycle",
            "σ¹ ⊗ σ̄¹σ²₁ ⊗ σ̄²σ²₂ = σ̄¹σ¹₁ ⊗ σ̄²σ¹₂ ⊗ σ²",
            Mul(S, Comult(S, 1), left_legs=(1, 2), right_legs=(0, 1, 2)),
            Mul(S, Comult(S, 0), left_legs=(0, 1), right_legs=(0, 1, 2)),
        ),
    ]


def check_inverse_cocycle(H: HomBialgebraData, tw: TwistData) -> VerificationReport:
    """(α⊗α)ϱ = ϱ and the 2-cocycle identity satisfied by the inverse."""
    P = Const(tw.rho)
    identities = [
        Identity("twist.inverse_alpha_invariance", "(α ⊗ α)(ϱ) = ϱ", Alpha(P), P),
        Identity(
            "twist.inverse_cocycle",
            "ϱ¹ ⊗ ϱ²₁ϱ̄¹ ⊗ ϱ²₂ϱ̄² = ϱ¹₁ϱ̄¹ ⊗ ϱ¹₂ϱ̄² ⊗ ϱ²",
            Mul(Comult(P, 1), P, left_legs=(0, 1, 2), right_legs=(1, 2)),
            Mul(Comult(P, 0), P, left_legs=(0, 1, 2), right_legs=(0, 1)),
        ),
    ]
    return run_identities(H.context(), identities, subject=f"{H.name} inverse of {tw.name or 'twist'}")


def validate_twist(H: HomBialgebraData, sigma: SparseTensor, name: str = "") -> Validation:
    """
    Check α-invariance, normalization and the 2-cocycle identity of sigma.

    On success the returned TwistData carries the computed inverse and the
    inverse-cocycle report; a failing condition returns the report instead.
    """
    if H.flavor is not Flavor.MONOIDAL:
        raise FlavorMismatchError(f"twists are defined on monoidal Hom-bialgebras, got {H.flavor.value}",
                                  offending=H.flavor.value)
    base = check_hom_bialgebra(H)
    if not base.ok:
        raise PreconditionError(f"{H.name} is not a monoidal Hom-bialgebra", offending=base)
    sigma = as_tensor2(H, sigma)
    rho = invert_tensor2(H, sigma)
    label = name or "twist"
    report = run_identities(H.context(), twist_identities(sigma), subject=f"{H.name} twist {label}")
    if not report.ok:
        logger.info("Twist %s rejected: %s", label, [c.check_id for c in report.failures()])
        return Validation(None, report)
    tw = TwistData(sigma=sigma, rho=rho, parent=H, name=name)
    inverse = check_inverse_cocycle(H, tw)
    report.extend(inverse)
    if not inverse.ok:
        raise TheoremCheckFailed(f"inverse of twist {label} violates the inverse cocycle identity", report)
    return Validation(replace(tw, report=report), report)


def require_twist(H: HomBialgebraData, sigma: SparseTensor, name: str = "") -> TwistData:
    """validate_twist, raising TheoremCheckFailed instead of returning a failing report."""
    outcome = validate_twist(H, sigma, name)
    if not outcome.ok:
        raise TheoremCheckFailed(f"{name or 'element'} is not a twist of {H.name}", outcome.report)
    return outcome.value


# ---------------------------------------------------------------------------
# Twisted coproduct and bialgebra
# ---------------------------------------------------------------------------


def _twisted_coproduct_expressions(tw: TwistData):
    S, P = tw.constants
    x = Var("x")
    return Mul(Mul(S, Comult(x)), P), Mul(S, Mul(Comult(x), P))


def twist_coproduct(H: HomBialgebraData, tw: TwistData, x: Vector) -> TensorElement2:
    """Δ^σ(x) = (σΔ(x))ϱ, cross-checked against σ(Δ(x)ϱ)."""
    left_first, right_first = _twisted_coproduct_expressions(tw)
    ctx = H.context()
    value = apply_sweedler(ctx, left_first, {"x": x})
    other = apply_sweedler(ctx, right_first, {"x": x})
    if value != other:
        raise TheoremCheckFailed(
            f"(σΔ(x))ϱ and σ(Δ(x)ϱ) differ at {value.first_difference(other)} for twist {tw.name}"
        )
    return as_tensor2(H, value)


def _twisted_comult(H: HomBialgebraData, tw: TwistData) -> StructureTensor:
    n = H.dim
    return StructureTensor.from_unary(
        (n, n, n), lambda a: dict(twist_coproduct(H, tw, Vector.basis(n, a)).coeffs)
    )


def check_twisted_coproduct(
    H: HomBialgebraData, tw: TwistData, twisted: Optional[HomBialgebraData] = None
) -> VerificationReport:
    """Δ^σ is multiplicative, unit preserving and α-compatible; both parenthesisations agree."""
    if twisted is None:
        twisted = replace(H, comult=_twisted_comult(H, tw), flavor=Flavor.PLAIN, antipode=None)
    a = Var("a")
    identities = [
        Identity(f"twisted.{i.check_id.split('.', 1)[1]}", i.anchor.replace("Δ", "Δ^σ"), i.lhs, i.rhs, i.variables)
        for i in bialgebra_identities()
        if i.check_id in ("bialgebra.comult_multiplicative", "bialgebra.comult_unit")
    ]
    identities.append(
        Identity("twisted.comult_alpha", "Δ^σ(α(a)) = (α ⊗ α)Δ^σ(a)", Comult(Alpha(a)), Alpha(Comult(a)), (("a", "H"),))
    )
    report = run_identities(twisted.context(), identities, subject=f"{twisted.name} coproduct")
    left_first, right_first = _twisted_coproduct_expressions(tw)
    report.extend(run_identities(
        H.context(),
        [Identity("twisted.parenthesization", "(σΔ(x))ϱ = σ(Δ(x)ϱ)", left_first, right_first, (("x", "H"),))],
        subject=report.subject,
    ))
    return report


def build_twisted_bialgebra(
    H: HomBialgebraData, tw: TwistData, collect: Optional[VerificationReport] = None
) -> HomBialgebraData:
    """
    H^σ = (H, α, m, η, Δ^σ, ε), a Hom-bialgebra of the plain flavor.

    The result is verified before it is returned; ``collect`` receives the
    verification records (plus the informational flavor comparison).
    """
    if tw.parent is not H and tw.parent.mult != H.mult:
        raise PreconditionError("twist belongs to a different Hom-bialgebra", offending=tw.name)
    twisted = replace(
        H,
        comult=_twisted_comult(H, tw),
        flavor=Flavor.PLAIN,
        antipode=None,
        name=f"{H.name}^{tw.name or 'σ'}",
    )
    report = check_hom_bialgebra(twisted)
    report.extend(check_twisted_coproduct(H, tw, twisted))
    if not report.ok:
        raise TheoremCheckFailed(f"{twisted.name} is not a Hom-bialgebra", report)
    if collect is not None:
        collect.extend(report)
        collect.extend(check_flavor_agreement(twisted).as_informational(), prefix="twisted.")
    logger.info("Built twisted bialgebra %s", twisted.name)
    return twisted


# ---------------------------------------------------------------------------
# Twisted antipode
# ---------------------------------------------------------------------------


def antipode_word(H: HomBialgebraData, tw: TwistData, tree: Tree = PRINTED_ANTIPODE_BRACKETING) -> Product:
    """σ¹ · S(α⁻¹σ²) · S(α⁻⁴x) · S(α⁻³ϱ¹) · ϱ², multiplied along ``tree``."""
    if H.antipode is None:
        raise MissingStructureError(f"{H.name} has no antipode to twist")
    S, P = tw.constants
    antipode = H.antipode

    def s_after(power):
        return LinearOp(antipode.compose(H.alpha_power(power)))

    word = Tensor((
        OnLegs(S, (None, s_after(-1))),
        OnLegs(Var("x"), (s_after(-4),)),
        OnLegs(P, (s_after(-3), None)),
    ))
    return Product(word, tree)


def twist_antipode(
    H: HomBialgebraData, tw: TwistData, x: Vector, bracketing: Tree = PRINTED_ANTIPODE_BRACKETING
) -> Vector:
    return apply_sweedler(H.context(), antipode_word(H, tw, bracketing), {"x": x}).to_vector()


def _antipode_map(H: HomBialgebraData, tw: TwistData, tree: Tree) -> LinearMap:
    expr = antipode_word(H, tw, tree)
    ctx = H.context()
    return LinearMap.from_function(
        H.dim, H.dim, lambda col: {k[0]: v for k, v in apply_sweedler(ctx, expr, {"x": col}).coeffs.items()}
    )


def build_twisted_hopf(H: HomBialgebraData, tw: TwistData, twisted: Optional[HomBialgebraData] = None) -> TwistedHopf:
    """
    H^σ with S^σ attached.

    The printed bracketing is tried first, then every other bracketing of the
    same five-factor word; the first one passing the antipode axioms in H^σ wins.
    """
    twisted = twisted or build_twisted_bialgebra(H, tw)
    attempts: List[Tuple[Tree, bool]] = []
    for tree in enumerate_bracketings(5, first=PRINTED_ANTIPODE_BRACKETING):
        candidate = replace(twisted, antipode=_antipode_map(H, tw, tree))
        report = check_antipode(candidate)
        attempts.append((tree, report.ok))
        if report.ok:
            if tree != PRINTED_ANTIPODE_BRACKETING:
                logger.warning("Printed antipode bracketing failed on %s; %s verifies",
                               twisted.name, format_bracketing(tree, ANTIPODE_WORD_NAMES))
            return TwistedHopf(algebra=candidate, bracketing=tree, report=report, attempts=attempts)
        logger.debug("Bracketing %s fails on %s", tree, twisted.name)
    raise TheoremCheckFailed(
        f"no bracketing of the twisted antipode word satisfies the antipode axioms in {twisted.name} "
        f"({len(attempts)} tried)",
        report,
    )


def check_twisted_cocycle_identity(H: HomBialgebraData, tw: TwistData) -> VerificationReport:
    """α(σ¹) ⊗ ϱ¹σ² ⊗ α(ϱ²) against the α-twisted coproducts of σ and ϱ."""
    S, P = tw.constants
    identity = Identity(
        "twist.mixed_cocycle",
        "α(σ¹) ⊗ ϱ¹σ² ⊗ α(ϱ²) = ((id⊗α⊗α)(id⊗Δ)σ)((α⊗α⊗id)(Δ⊗id)ϱ)",
        Mul(OnLegs(P, (None, AlphaOp())), OnLegs(S, (AlphaOp(), None)), left_legs=(1, 2), right_legs=(0, 1)),
        Mul(
            OnLegs(Comult(S, 1), (None, AlphaOp(), AlphaOp())),
            OnLegs(Comult(P, 0), (AlphaOp(), AlphaOp(), None)),
        ),
    )
    return run_identities(H.context(), [identity], subject=f"{H.name} twist {tw.name or 'σ'}")


# ---------------------------------------------------------------------------
# Twisted module algebras and coalgebras
# ---------------------------------------------------------------------------


def twist_module_algebra(H: HomBialgebraData, tw: TwistData, A_mod: ModuleAlgebraData) -> HomAlgebraData:
    """The product a∘b = (ϱ¹·a)(ϱ²·b) with structure map α_A²."""
    pre = check_module_algebra(A_mod)
    if not pre.ok:
        raise PreconditionError(f"{A_mod.module.name} is not an H-module algebra", offending=pre)
    _, P = tw.constants
    ctx = A_mod.context("A")
    expr = Product(Act(P, Tensor((Var("a", ("A",)), Var("b", ("A",))))), (0, 1))
    d = A_mod.module.dim
    legs = {"a": ("A",), "b": ("A",)}

    def product(a, b):
        value = apply_sweedler(ctx, expr, {"a": a, "b": b}, legs)
        return {k[0]: v for k, v in value.coeffs.items()}

    twisted = HomAlgebraData(
        dim=d,
        mult=StructureTensor.from_function((d, d, d), product),
        unit=A_mod.unit,
        alpha=A_mod.module.alpha_power(2),
        basis_names=A_mod.module.basis_names,
        name=f"{A_mod.module.name}_{tw.name or 'σ'}",
        alpha_window=H.alpha_window,
    )
    report = check_hom_algebra(twisted)
    if not report.ok:
        raise TheoremCheckFailed(f"{twisted.name} is not a monoidal Hom-algebra", report)
    return twisted


def twist_module_coalgebra(H: HomBialgebraData, tw: TwistData, C_mod: ModuleCoalgebraData) -> CoalgebraData:
    """Δ̂(c) = σ¹·c₁ ⊗ σ²·c₂; the result is an ordinary coassociative coalgebra."""
    pre = check_module_coalgebra(C_mod)
    if not pre.ok:
        raise PreconditionError(f"{C_mod.module.name} is not an H-module coalgebra", offending=pre)
    S, _ = tw.constants
    ctx = C_mod.context("C")
    expr = Act(S, Comult(Var("c", ("C",))))
    d = C_mod.module.dim
    twisted = CoalgebraData(
        dim=d,
        comult=StructureTensor.from_unary(
            (d, d, d), lambda c: dict(apply_sweedler(ctx, expr, {"c": c}, {"c": ("C",)}).coeffs)
        ),
        counit=C_mod.counit,
        basis_names=C_mod.module.basis_names,
        name=f"{C_mod.module.name}_{tw.name or 'σ'}",
    )
    report = check_hom_coalgebra(twisted, space="C", ctx=twisted.context())
    if not report.ok:
        raise TheoremCheckFailed(f"{twisted.name} is not a coassociative counital coalgebra", report)
    return twisted
