"""Tests for twist validation, twisted coproducts, antipodes and module (co)algebras."""

from fractions import Fraction

import pytest

from src.exact_tensor import SparseTensor, TensorElement2, Vector, hom_product
from src.exceptions import (
    DimensionMismatchError,
    FlavorMismatchError,
    MissingStructureError,
    NonUniqueSolutionError,
    NoSolutionError,
    PreconditionError,
)
from src.examples_library import SWEEDLER_X_TWIST, module_algebras, module_coalgebras
from src.hom_structures import check_hom_algebra, check_hom_coalgebra, verify_suite
from src.models import Flavor, VerificationReport
from src.twist_engine import (
    PRINTED_ANTIPODE_BRACKETING,
    antipode_word,
    as_tensor2,
    build_twisted_bialgebra,
    build_twisted_hopf,
    check_inverse_cocycle,
    check_twisted_coproduct,
    check_twisted_cocycle_identity,
    invert_tensor2,
    twist_antipode,
    twist_coproduct,
    twist_module_algebra,
    twist_module_coalgebra,
    unit_tensor,
    validate_twist,
)

LIBRARY_TWISTS = [
    ("z2", "sigma_beta"),
    ("z4_m3", "sigma_half"),
    ("sweedler_m1", "sigma_g"),
    ("sweedler_m1", "x_twist"),
    ("sweedler_2", "sigma_g"),
]


def _instance(name):
    from src.examples_library import get_instance

    return get_instance(name)


@pytest.mark.unit
class TestInverse:
    """Test inversion in the componentwise Hom-product on H ⊗ H."""

    def test_unit_tensor(self, sweedler_m1):
        """Test 1 ⊗ 1."""
        assert dict(unit_tensor(sweedler_m1.data).coeffs) == {(0, 0): 1}

    def test_as_tensor2_shape(self, z2):
        """Test that an element of the wrong shape is rejected."""
        with pytest.raises(DimensionMismatchError):
            as_tensor2(z2.data, SparseTensor((2,), {(0,): 1}))

    def test_bicharacter_is_involutive(self, z2):
        """Test that the order-two bicharacter is its own inverse."""
        sigma = z2.twist("sigma_beta").sigma
        assert invert_tensor2(z2.data, sigma) == sigma

    @pytest.mark.parametrize("name, twist", LIBRARY_TWISTS)
    def test_inverse_is_two_sided(self, name, twist):
        """Test σϱ = ϱσ = 1 ⊗ 1."""
        inst = _instance(name)
        H, tw = inst.data, inst.twist(twist)
        one = unit_tensor(H)
        assert hom_product(H.mult, tw.sigma, tw.rho) == one
        assert hom_product(H.mult, tw.rho, tw.sigma) == one

    def test_x_twist_inverse(self, sweedler_m1):
        """Test that 1⊗1 + gx⊗x has inverse 1⊗1 − gx⊗x."""
        rho = sweedler_m1.twist("x_twist").rho
        assert dict(rho.coeffs) == {(0, 0): 1, (3, 2): -1}

    def test_zero_not_invertible(self, z2):
        """Test that the zero tensor has no inverse."""
        with pytest.raises((NoSolutionError, NonUniqueSolutionError)):
            invert_tensor2(z2.data, TensorElement2.from_pairs(2, {}))


@pytest.mark.unit
class TestValidation:
    """Test twist validation."""

    @pytest.mark.parametrize("name, twist", LIBRARY_TWISTS)
    def test_library_twists_validate(self, name, twist):
        """Test that every library twist passes validation and the inverse cocycle identity."""
        inst = _instance(name)
        tw = inst.twist(twist)
        outcome = validate_twist(inst.data, tw.sigma, name=twist)
        assert outcome.ok
        assert outcome.value.report.get("twist.inverse_cocycle").passed
        assert check_inverse_cocycle(inst.data, tw).ok

    def test_trivial_twist(self, sweedler_2):
        """Test that 1 ⊗ 1 is a twist and is recognised as trivial."""
        tw = sweedler_2.twist("trivial")
        assert tw.is_trivial
        assert not sweedler_2.twist("sigma_g").is_trivial

    def test_unnormalized_candidate(self, z2):
        """Test that 2(1 ⊗ 1) fails only the normalization conditions."""
        outcome = validate_twist(z2.data, TensorElement2.from_pairs(2, {(0, 0): 2}))
        assert not outcome.ok
        assert outcome.value is None
        failed = {c.check_id for c in outcome.report.failures()}
        assert failed == {"twist.normalization_left", "twist.normalization_right"}

    def test_non_invariant_candidate(self, sweedler_2):
        """Test that the x-supported twist is not α-invariant when λ = 2."""
        outcome = validate_twist(sweedler_2.data, TensorElement2.from_pairs(4, SWEEDLER_X_TWIST))
        assert not outcome.ok
        assert not outcome.report.get("twist.alpha_invariance").passed

    def test_plain_flavor_rejected(self, z2):
        """Test that twists are only defined on monoidal Hom-bialgebras."""
        with pytest.raises(FlavorMismatchError):
            validate_twist(z2.plain, unit_tensor(z2.plain))

    def test_broken_base_rejected(self, z2):
        """Test that the base must itself pass the bialgebra axioms."""
        from dataclasses import replace

        H = z2.data
        broken = replace(H, mult=H.mult.with_entry((0, 1, 1), 0))
        with pytest.raises(PreconditionError):
            validate_twist(broken, unit_tensor(H))


@pytest.mark.integration
class TestTwistedBialgebra:
    """Test H^σ and its antipode."""

    def test_trivial_twist_keeps_coproduct(self, sweedler_m1):
        """Test Δ^{1⊗1} = Δ when α² = id."""
        H = sweedler_m1.data
        tw = sweedler_m1.twist("trivial")
        for a in range(H.dim):
            delta = twist_coproduct(H, tw, Vector.basis(4, a))
            assert delta == SparseTensor((4, 4), dict(H.comult.unary(a)))

    @pytest.mark.parametrize("name, twist", LIBRARY_TWISTS)
    def test_twisted_bialgebra(self, name, twist):
        """Test that H^σ is a Hom-bialgebra of the plain flavor."""
        inst = _instance(name)
        collect = VerificationReport(subject="twist")
        twisted = build_twisted_bialgebra(inst.data, inst.twist(twist), collect=collect)
        assert twisted.flavor is Flavor.PLAIN
        assert twisted.antipode is None
        assert twisted.name.endswith(f"^{twist}")
        assert verify_suite(twisted).ok
        assert collect.ok and collect.total > 0
        assert any(c.check_id.startswith("twisted.") and c.informational for c in collect.checks)

    def test_twisted_coproduct_checks(self, sweedler_m1):
        """Test the multiplicativity and parenthesisation checks of Δ^σ."""
        report = check_twisted_coproduct(sweedler_m1.data, sweedler_m1.twist("x_twist"))
        assert report.ok
        assert report.get("twisted.parenthesization").passed

    def test_grouplike_twist_changes_coproduct(self, sweedler_m1):
        """Test that the grouplike twist turns Δ into Δ^op while the x-supported twist leaves it alone."""
        H = sweedler_m1.data
        flipped = build_twisted_bialgebra(H, sweedler_m1.twist("sigma_g"))
        assert flipped.comult != H.comult
        for a in range(H.dim):
            assert SparseTensor((4, 4), dict(flipped.comult.unary(a))) == SparseTensor(
                (4, 4), dict(H.comult.unary(a))
            ).flip()
        fixed = build_twisted_bialgebra(H, sweedler_m1.twist("x_twist"))
        assert fixed.comult == H.comult

    def test_cocommutative_collapse(self, z2):
        """Test that twisting ℚ[ℤ/2] by its bicharacter changes nothing."""
        twisted = build_twisted_bialgebra(z2.data, z2.twist("sigma_beta"))
        assert twisted.comult == z2.data.comult
        assert dict(twist_coproduct(z2.data, z2.twist("sigma_beta"), Vector.basis(2, 1)).coeffs) == {(1, 1): 1}

    def test_foreign_twist_rejected(self, z2, z4):
        """Test that a twist of another Hom-bialgebra is refused."""
        with pytest.raises(PreconditionError):
            build_twisted_bialgebra(z2.data, z4.twist("sigma_half"))

    @pytest.mark.parametrize("name, twist", LIBRARY_TWISTS)
    def test_twisted_antipode(self, name, twist):
        """Test that some bracketing of the twisted antipode word is an antipode of H^σ."""
        inst = _instance(name)
        hopf = build_twisted_hopf(inst.data, inst.twist(twist))
        assert hopf.report.ok
        assert hopf.algebra.antipode is not None
        assert hopf.attempts[-1] == (hopf.bracketing, True)
        assert hopf.attempts[0][0] == PRINTED_ANTIPODE_BRACKETING

    def test_twist_antipode_on_unit(self, z2):
        """Test S^σ(1) = 1."""
        value = twist_antipode(z2.data, z2.twist("sigma_beta"), Vector.basis(2, 0))
        assert value.coords == (Fraction(1), Fraction(0))

    def test_antipode_word_needs_antipode(self, z2):
        """Test that the antipode word needs S."""
        from dataclasses import replace

        with pytest.raises(MissingStructureError):
            antipode_word(replace(z2.data, antipode=None), z2.twist("sigma_beta"))

    @pytest.mark.parametrize("name, twist", LIBRARY_TWISTS)
    def test_mixed_cocycle_identity(self, name, twist):
        """Test the α-twisted cocycle identity mixing σ and ϱ."""
        inst = _instance(name)
        assert check_twisted_cocycle_identity(inst.data, inst.twist(twist)).ok


@pytest.mark.integration
class TestTwistedModules:
    """Test twisted module algebras and module coalgebras."""

    @pytest.mark.parametrize("name, twist", [("z2", "sigma_beta"), ("z4_m3", "sigma_half")])
    def test_module_algebras(self, name, twist):
        """Test that twisting a module algebra gives a monoidal Hom-algebra with structure map α²."""
        inst = _instance(name)
        tw = inst.twist(twist)
        for A_mod in module_algebras(inst).values():
            twisted = twist_module_algebra(inst.data, tw, A_mod)
            assert check_hom_algebra(twisted).ok
            assert twisted.alpha == A_mod.module.alpha_power(2)

    @pytest.mark.parametrize("name, twist", [("z2", "sigma_beta"), ("sweedler_m1", "x_twist")])
    def test_module_coalgebras(self, name, twist):
        """Test that twisting a module coalgebra gives a coassociative counital coalgebra."""
        inst = _instance(name)
        tw = inst.twist(twist)
        for C_mod in module_coalgebras(inst).values():
            twisted = twist_module_coalgebra(inst.data, tw, C_mod)
            assert twisted.alpha.is_identity()
            assert check_hom_coalgebra(twisted, space="C", ctx=twisted.context()).ok
