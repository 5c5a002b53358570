"""R-matrices of Hom-bialgebras and the quantum Hom-Yang-Baxter equations."""

import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

from .correspondence import as_classical_monoidal, lift_monoidal
from .exact_tensor import LinearMap, SparseTensor, TensorElement2, TensorElement3
from .exceptions import FlavorMismatchError, PreconditionError, TheoremCheckFailed
from .hom_structures import HomBialgebraData, Identity, run_identities
from .models import RMatrixSystem, VerificationReport
from .sweedler import (
    Alpha,
    AlphaOp,
    Comult,
    ComultOp,
    Const,
    Flip,
    Mul,
    OnLegs,
    Permute,
    Tensor,
    Unit,
    Var,
    apply_sweedler,
)
from .twist_engine import TwistData, Validation, as_tensor2, build_twisted_bialgebra, invert_tensor2

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RMatrixData:
    """A validated R-matrix with its inverse."""

    R: TensorElement2
    R_inv: TensorElement2
    system: RMatrixSystem
    parent: HomBialgebraData
    name: str = ""
    report: Optional[VerificationReport] = field(default=None, repr=False)


def rmatrix_identities(R: SparseTensor, system: RMatrixSystem) -> List[Identity]:
    C = Const(R)
    h = Var("h")
    identities = [
        Identity("rmatrix.alpha_invariance", "(α ⊗ α)(R) = R", Alpha(C), C),
        Identity("rmatrix.quasi_cocommutativity", "RΔ(h) = Δ^op(h)R",
                 Mul(C, Comult(h)), Mul(Flip(Comult(h)), C), (("h", "H"),)),
    ]
    if system is RMatrixSystem.MONOIDAL_Q:
        identities += [
            Identity("rmatrix.coproduct_left", "(Δ ⊗ id)(R) = r¹ ⊗ R¹ ⊗ r²R²",
                     Comult(C, 0), Mul(C, C, left_legs=(0, 2), right_legs=(1, 2))),
            Identity("rmatrix.coproduct_right", "(id ⊗ Δ)(R) = r¹R¹ ⊗ R² ⊗ r²",
                     Comult(C, 1), Mul(C, C, left_legs=(0, 2), right_legs=(0, 1))),
        ]
    else:
        left_alpha = OnLegs(C, (AlphaOp(), None))
        right_alpha = OnLegs(C, (None, AlphaOp()))
        identities += [
            Identity("rmatrix.coproduct_left", "(Δ ⊗ α)(R) = α(r¹) ⊗ α(R¹) ⊗ r²R²",
                     OnLegs(C, (ComultOp(), AlphaOp())),
                     Mul(left_alpha, left_alpha, left_legs=(0, 2), right_legs=(1, 2))),
            Identity("rmatrix.coproduct_right", "(α ⊗ Δ)(R) = r¹R¹ ⊗ α(R²) ⊗ α(r²)",
                     OnLegs(C, (AlphaOp(), ComultOp())),
                     Mul(right_alpha, right_alpha, left_legs=(0, 2), right_legs=(0, 1))),
        ]
    return identities


def validate_rmatrix(H: HomBialgebraData, R: SparseTensor, system: RMatrixSystem, name: str = "") -> Validation:
    """
    Check an R-matrix candidate against the axiom system for H's flavor.

    Inversion errors propagate. A candidate that passes is also required to
    satisfy both quantum Hom-Yang-Baxter equations.
    """
    system = RMatrixSystem(system)
    if system.flavor is not H.flavor:
        raise FlavorMismatchError(
            f"{system.value} R-matrices need a {system.flavor.value} Hom-bialgebra, got {H.flavor.value}",
            offending=H.flavor.value,
        )
    R = as_tensor2(H, R)
    R_inv = invert_tensor2(H, R)
    label = name or "R"
    report = run_identities(H.context(), rmatrix_identities(R, system), subject=f"{H.name} R-matrix {label}")
    if not report.ok:
        return Validation(None, report)
    rm = RMatrixData(R=R, R_inv=R_inv, system=system, parent=H, name=name)
    qhybe = check_qhybe(H, rm)
    report.extend(qhybe)
    if not qhybe.ok:
        raise TheoremCheckFailed(f"R-matrix {label} of {H.name} violates the Yang-Baxter equations", report)
    return Validation(replace(rm, report=report), report)


def require_rmatrix(H: HomBialgebraData, R: SparseTensor, system: RMatrixSystem, name: str = "") -> RMatrixData:
    outcome = validate_rmatrix(H, R, system, name)
    if not outcome.ok:
        raise TheoremCheckFailed(f"{name or 'element'} is not an R-matrix of {H.name}", outcome.report)
    return outcome.value


def _legs(Rm: RMatrixData):
    R = Const(Rm.R)
    R12 = Tensor((R, Unit()))
    R23 = Tensor((Unit(), R))
    R13 = Permute(R23, (1, 0, 2))
    return R12, R13, R23


def check_qhybe(H: HomBialgebraData, Rm: RMatrixData) -> VerificationReport:
    """(R₁₂R₁₃)R₂₃ = R₂₃(R₁₃R₁₂) and R₁₂(R₁₃R₂₃) = (R₂₃R₁₃)R₁₂ with R₁₃ = (τ ⊗ id)R₂₃."""
    if not isinstance(Rm, RMatrixData):
        raise PreconditionError("the Yang-Baxter check needs a validated R-matrix", offending=type(Rm).__name__)
    R12, R13, R23 = _legs(Rm)
    identities = [
        Identity("qhybe.first", "(R₁₂R₁₃)R₂₃ = R₂₃(R₁₃R₁₂)",
                 Mul(Mul(R12, R13), R23), Mul(R23, Mul(R13, R12))),
        Identity("qhybe.second", "R₁₂(R₁₃R₂₃) = (R₂₃R₁₃)R₁₂",
                 Mul(R12, Mul(R13, R23)), Mul(Mul(R23, R13), R12)),
    ]
    return run_identities(H.context(), identities, subject=f"{H.name} R-matrix {Rm.name or 'R'}")


def placed_legs(H: HomBialgebraData, R: SparseTensor) -> Tuple[TensorElement3, TensorElement3, TensorElement3]:
    """R¹ ⊗ R² ⊗ 1, R¹ ⊗ 1 ⊗ R² and 1 ⊗ R¹ ⊗ R², built entrywise from the coefficients of R and η(1)."""
    unit = H.unit.sparse()
    legs: Tuple[dict, dict, dict] = ({}, {}, {})
    for (a, b), c in R.coeffs.items():
        for u, cu in unit.items():
            for coeffs, key in zip(legs, ((a, b, u), (a, u, b), (u, a, b))):
                coeffs[key] = c * cu
    return tuple(TensorElement3.from_triples(H.dim, coeffs) for coeffs in legs)


def check_r13_readings(H: HomBialgebraData, Rm: RMatrixData) -> VerificationReport:
    """
    The evaluator's legs R₁₂, R₁₃ = (τ ⊗ id)R₂₃ and R₂₃ against the
    entrywise placements of R, so the Yang-Baxter check reads R₁₃ as R¹ ⊗ 1 ⊗ R².
    """
    evaluated = _legs(Rm)
    placed = placed_legs(H, Rm.R)
    legs = ("H", "H", "H")
    identities = [
        Identity("rmatrix.r12_placement", "R₁₂ = R¹ ⊗ R² ⊗ 1", evaluated[0], Const(placed[0], legs)),
        Identity("rmatrix.r13_readings", "(τ ⊗ id)(1 ⊗ R) = R¹ ⊗ 1 ⊗ R²", evaluated[1], Const(placed[1], legs)),
        Identity("rmatrix.r23_placement", "R₂₃ = 1 ⊗ R¹ ⊗ R²", evaluated[2], Const(placed[2], legs)),
    ]
    return run_identities(H.context(), identities, subject=f"{H.name} R-matrix {Rm.name or 'R'}")


def lift_rmatrix(A: HomBialgebraData, R: SparseTensor, alpha: LinearMap, name: str = "") -> RMatrixData:
    """Attach a classical α-invariant R-matrix of A to the monoidal lift of A."""
    R = as_tensor2(A, R)
    moved = R.apply_legwise((alpha, alpha))
    if moved != R:
        raise PreconditionError("R-matrix is not invariant under α ⊗ α", offending=moved.first_difference(R))
    classical = validate_rmatrix(as_classical_monoidal(A), R, RMatrixSystem.MONOIDAL_Q, name)
    if not classical.ok:
        raise PreconditionError(f"{name or 'R'} is not an R-matrix of {A.name}", offending=classical.report)
    H = lift_monoidal(A, alpha)
    return require_rmatrix(H, R, RMatrixSystem.MONOIDAL_Q, name)


def twisted_rmatrix_element(H: HomBialgebraData, tw: TwistData, Rm: RMatrixData) -> TensorElement2:
    """R^σ = (σ₂₁R)ϱ."""
    S, P = tw.constants
    value = apply_sweedler(H.context(), Mul(Mul(Flip(S), Const(Rm.R)), P))
    return as_tensor2(H, value)


def twist_rmatrix(
    H: HomBialgebraData, tw: TwistData, Rm: RMatrixData, twisted: Optional[HomBialgebraData] = None
) -> RMatrixData:
    """R^σ as an R-matrix of H^σ (plain axiom system), verified before it is returned."""
    if Rm.system is not RMatrixSystem.MONOIDAL_Q:
        raise FlavorMismatchError("only monoidal R-matrices can be twisted", offending=Rm.system.value)
    twisted = twisted or build_twisted_bialgebra(H, tw)
    name = f"{Rm.name or 'R'}^{tw.name or 'σ'}"
    return require_rmatrix(twisted, twisted_rmatrix_element(H, tw, Rm), RMatrixSystem.PLAIN_Q, name)
