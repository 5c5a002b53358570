"""
Lifting ordinary bialgebras to Hom-bialgebras and back.

Given a bialgebra A and a bialgebra endomorphism α:

- the monoidal lift keeps A, α and η, multiplies with α∘m and comultiplies
  with Δ∘α^{-1} (α must be invertible);
- the plain lift multiplies with α∘m and comultiplies with Δ∘α.

Both unlifts undo their lift bit-exactly.
"""

import logging
from dataclasses import replace

from .exact_tensor import LinearMap
from .exceptions import FlavorMismatchError, MissingStructureError, PreconditionError
from .hom_structures import (
    HomBialgebraData,
    check_bialgebra_morphism,
    check_result,
    postcompose_mult,
    precompose_comult,
    structure_difference,
)
from .models import Flavor, VerificationReport
from .twist_engine import TwistData, build_twisted_bialgebra, require_twist, unit_tensor, validate_twist

logger = logging.getLogger(__name__)


def is_bialgebra_automorphism(A: HomBialgebraData, alpha: LinearMap, require_invertible: bool = True) -> VerificationReport:
    return check_bialgebra_morphism(A, alpha, require_invertible=require_invertible)


def _require_ordinary(A: HomBialgebraData) -> None:
    if not A.is_ordinary:
        raise PreconditionError(
            f"{A.name or 'input'} is not an ordinary bialgebra (alpha must be the identity, flavor plain)",
            offending=A.flavor.value,
        )


def _lifted_antipode(A: HomBialgebraData, alpha: LinearMap):
    if A.antipode is None:
        return None
    if alpha.compose(A.antipode) == A.antipode.compose(alpha):
        return A.antipode
    logger.info("Antipode of %s does not commute with alpha; lift carries no antipode", A.name)
    return None


def _lift(A: HomBialgebraData, alpha: LinearMap, flavor: Flavor, name: str) -> HomBialgebraData:
    _require_ordinary(A)
    monoidal = flavor is Flavor.MONOIDAL
    report = is_bialgebra_automorphism(A, alpha, require_invertible=monoidal)
    if not report.ok:
        raise PreconditionError(
            f"alpha is not a bialgebra {'automorphism' if monoidal else 'endomorphism'} of {A.name}",
            offending=report,
        )
    lifted = HomBialgebraData(
        dim=A.dim,
        mult=postcompose_mult(A.mult, alpha),
        unit=A.unit,
        comult=precompose_comult(A.comult, alpha.inverse() if monoidal else alpha),
        counit=A.counit,
        alpha=alpha,
        antipode=_lifted_antipode(A, alpha),
        flavor=flavor,
        basis_names=A.basis_names,
        name=name,
        alpha_window=A.alpha_window,
    )
    logger.debug("Lifted %s to %s (%s)", A.name, lifted.name, flavor.value)
    return lifted


def lift_monoidal(A: HomBialgebraData, alpha: LinearMap, name: str = "") -> HomBialgebraData:
    """(A, α, α∘m, η, Δ∘α^{-1}, ε) as a monoidal Hom-bialgebra."""
    return _lift(A, alpha, Flavor.MONOIDAL, name or f"α({A.name})")


def lift_plain(A: HomBialgebraData, alpha: LinearMap, name: str = "") -> HomBialgebraData:
    """(A, α, α∘m, η, Δ∘α, ε) as a Hom-bialgebra of the plain flavor; α need not be invertible."""
    return _lift(A, alpha, Flavor.PLAIN, name or f"{A.name}^α")


def _unlift(H: HomBialgebraData, flavor: Flavor, name: str) -> HomBialgebraData:
    if H.flavor is not flavor:
        raise FlavorMismatchError(f"expected a {flavor.value} Hom-bialgebra, got {H.flavor.value}",
                                  offending=H.flavor.value)
    if not H.alpha_powers.invertible:
        raise MissingStructureError(f"{H.name} has a singular structure map")
    alpha, inverse = H.alpha, H.alpha_power(-1)
    return HomBialgebraData(
        dim=H.dim,
        mult=postcompose_mult(H.mult, inverse),
        unit=H.unit,
        comult=precompose_comult(H.comult, alpha if flavor is Flavor.MONOIDAL else inverse),
        counit=H.counit,
        alpha=LinearMap.identity(H.dim),
        antipode=H.antipode,
        flavor=Flavor.PLAIN,
        basis_names=H.basis_names,
        name=name,
        alpha_window=H.alpha_window,
    )


def unlift_monoidal(H: HomBialgebraData, name: str = "") -> HomBialgebraData:
    """(H, α^{-1}∘m, η, Δ∘α, ε); the automorphism is H.alpha."""
    return _unlift(H, Flavor.MONOIDAL, name or f"α⁻¹({H.name})")


def unlift_plain(B: HomBialgebraData, name: str = "") -> HomBialgebraData:
    """(B, α^{-1}∘m, η, Δ∘α^{-1}, ε)."""
    return _unlift(B, Flavor.PLAIN, name or f"{B.name}_α")


def as_classical_monoidal(A: HomBialgebraData) -> HomBialgebraData:
    """An ordinary bialgebra read as a monoidal Hom-bialgebra with α = id (the two axiom sets coincide)."""
    _require_ordinary(A)
    return replace(A, flavor=Flavor.MONOIDAL)


def _without_antipode(A: HomBialgebraData) -> HomBialgebraData:
    return replace(A, antipode=None)


def check_twist_lift_commutation(H: HomBialgebraData, tw: TwistData) -> VerificationReport:
    """
    Twisting commutes with unlifting: lifting the classical twist of the
    unlifted bialgebra gives H^σ. Also checks that the plain lift of the
    unlifted bialgebra equals H^σ exactly when σ = 1 ⊗ 1.
    """
    if H.flavor is not Flavor.MONOIDAL:
        raise FlavorMismatchError("twist/lift commutation needs a monoidal Hom-bialgebra", offending=H.flavor.value)
    label = tw.name or "σ"
    report = VerificationReport(subject=f"{H.name} twisted by {label}")
    twisted = _without_antipode(build_twisted_bialgebra(H, tw))

    classical = unlift_monoidal(H)
    classical_outcome = validate_twist(as_classical_monoidal(classical), tw.sigma, name=label)
    report.add(check_result(
        "lift_twist.classical_twist", "σ is a twist of the unlifted bialgebra", classical_outcome.ok,
        counterexample=None if classical_outcome.ok else [c.check_id for c in classical_outcome.report.failures()],
    ))
    if classical_outcome.ok:
        classical_twisted = build_twisted_bialgebra(as_classical_monoidal(classical), classical_outcome.value)
        relifted = _without_antipode(lift_plain(classical_twisted, H.alpha))
        difference = structure_difference(relifted, twisted)
        report.add(check_result(
            "lift_twist.commutes", "((ₐH)^σ)^α = H^σ", difference is None,
            counterexample=None if difference is None else [difference],
            detail=difference,
        ))

    plain_lift = _without_antipode(lift_plain(classical, H.alpha))
    trivial = require_twist(H, unit_tensor(H), name="trivial")
    untwisted = _without_antipode(build_twisted_bialgebra(H, trivial))
    difference = structure_difference(plain_lift, untwisted)
    report.add(check_result(
        "lift_twist.trivial_twist_equality", "(ₐH)^α = H^{1⊗1}", difference is None,
        counterexample=None if difference is None else [difference], detail=difference,
    ))

    equal = structure_difference(plain_lift, twisted) is None
    if tw.is_trivial:
        report.add(check_result("lift_twist.converse", "(ₐH)^α = H^σ iff σ = 1 ⊗ 1", equal, counterexample=[label]))
    else:
        # an invariant twist (Δ^σ = Δ∘α²) reproduces the plain lift even though σ ≠ 1 ⊗ 1
        report.add(check_result(
            "lift_twist.converse", "(ₐH)^α = H^σ iff σ = 1 ⊗ 1", not equal, counterexample=[label],
            detail="twisted coproduct equals Δ∘α² for this nontrivial twist" if equal else None,
            informational=equal,
        ))
    logger.info("Twist/lift commutation on %s: %d/%d passed", report.subject, report.passed, report.total)
    return report
