"""Tests for lifting ordinary bialgebras and for twist/lift commutation."""

import pytest

from src.correspondence import (
    as_classical_monoidal,
    check_twist_lift_commutation,
    is_bialgebra_automorphism,
    lift_monoidal,
    lift_plain,
    unlift_monoidal,
    unlift_plain,
)
from src.exact_tensor import LinearMap
from src.exceptions import FlavorMismatchError, MissingStructureError, PreconditionError
from src.examples_library import group_algebra, group_automorphism, sweedler_scaling
from src.hom_structures import check_hom_bialgebra, structure_difference, verify_suite
from src.models import Flavor


@pytest.mark.unit
class TestLifts:
    """Test the monoidal and plain lifts and their inverses."""

    @pytest.mark.parametrize("lam", [-1, 2, 3])
    def test_monoidal_round_trip(self, ordinary_sweedler, lam):
        """Test that unlifting the monoidal lift recovers H4 exactly."""
        H = lift_monoidal(ordinary_sweedler, sweedler_scaling(lam))
        assert H.flavor is Flavor.MONOIDAL
        assert structure_difference(unlift_monoidal(H), ordinary_sweedler) is None

    @pytest.mark.parametrize("n, m", [(3, 2), (4, 3), (5, 2)])
    def test_plain_round_trip(self, n, m):
        """Test that unlifting the plain lift of a group algebra recovers it exactly."""
        base = group_algebra(n)
        B = lift_plain(base, group_automorphism(n, m))
        assert B.flavor is Flavor.PLAIN
        assert structure_difference(unlift_plain(B), base) is None

    def test_lifts_are_hom_bialgebras(self, ordinary_sweedler):
        """Test that both lifts pass their own axiom sets."""
        alpha = sweedler_scaling(5)
        assert verify_suite(lift_monoidal(ordinary_sweedler, alpha)).ok
        assert verify_suite(lift_plain(ordinary_sweedler, alpha)).ok

    def test_lift_keeps_commuting_antipode(self, ordinary_sweedler):
        """Test that an antipode commuting with α is carried over."""
        H = lift_monoidal(ordinary_sweedler, sweedler_scaling(2))
        assert H.antipode == ordinary_sweedler.antipode

    def test_lift_requires_ordinary_input(self, z2):
        """Test that a Hom-bialgebra cannot be lifted again."""
        with pytest.raises(PreconditionError):
            lift_monoidal(z2.data, LinearMap.identity(2))

    def test_lift_requires_morphism(self, ordinary_group):
        """Test that α must be a bialgebra endomorphism."""
        with pytest.raises(PreconditionError):
            lift_plain(ordinary_group, LinearMap.scalar(3, 2))

    def test_monoidal_lift_requires_invertible_alpha(self):
        """Test that a singular endomorphism only gives a plain lift."""
        collapse = LinearMap(2, 2, {(0, 0): 1, (0, 1): 1})
        with pytest.raises(PreconditionError):
            lift_monoidal(group_algebra(2), collapse)
        assert check_hom_bialgebra(lift_plain(group_algebra(2), collapse)).ok

    def test_unlift_checks_flavor(self, z2):
        """Test that each unlift only accepts its own flavor."""
        with pytest.raises(FlavorMismatchError):
            unlift_plain(z2.data)
        with pytest.raises(FlavorMismatchError):
            unlift_monoidal(z2.plain)

    def test_unlift_needs_invertible_alpha(self):
        """Test that unlifting needs α⁻¹."""
        B = lift_plain(group_algebra(2), LinearMap(2, 2, {(0, 0): 1, (0, 1): 1}))
        with pytest.raises(MissingStructureError):
            unlift_plain(B)

    def test_automorphism_report(self, ordinary_sweedler):
        """Test the automorphism check used by both lifts."""
        assert is_bialgebra_automorphism(ordinary_sweedler, sweedler_scaling(-1)).ok
        swap_g_x = LinearMap(4, 4, {(2, 1): 1, (1, 2): 1, (0, 0): 1, (3, 3): 1})
        assert not is_bialgebra_automorphism(ordinary_sweedler, swap_g_x).ok

    def test_classical_reading(self, ordinary_sweedler):
        """Test an ordinary bialgebra read as a monoidal Hom-bialgebra with α = id."""
        H = as_classical_monoidal(ordinary_sweedler)
        assert H.flavor is Flavor.MONOIDAL
        assert verify_suite(H).ok

    def test_classical_reading_rejects_hom_input(self, sweedler_2):
        """Test that only ordinary bialgebras have a classical reading."""
        with pytest.raises(PreconditionError):
            as_classical_monoidal(sweedler_2.data)


@pytest.mark.integration
class TestTwistLiftCommutation:
    """Test that twisting commutes with unlifting."""

    @pytest.mark.parametrize("name, twist", [
        ("z2", "sigma_beta"),
        ("z4_m3", "sigma_half"),
        ("sweedler_m1", "sigma_g"),
        ("sweedler_m1", "x_twist"),
        ("sweedler_2", "sigma_g"),
    ])
    def test_commutes(self, name, twist):
        """Test the commutation report for every library twist."""
        from src.examples_library import get_instance

        inst = get_instance(name)
        report = check_twist_lift_commutation(inst.data, inst.twist(twist))
        assert report.ok, [c.check_id for c in report.failures()]
        for check_id in ("lift_twist.classical_twist", "lift_twist.commutes",
                         "lift_twist.trivial_twist_equality", "lift_twist.converse"):
            assert report.get(check_id) is not None

    def test_trivial_twist_converse_required(self, sweedler_2):
        """Test that the trivial twist reproduces the plain lift, as a required check."""
        report = check_twist_lift_commutation(sweedler_2.data, sweedler_2.twist("trivial"))
        converse = report.get("lift_twist.converse")
        assert converse.passed and not converse.informational

    def test_invariant_twist_converse_informational(self, z2):
        """Test that a nontrivial twist of a commutative cocommutative instance is recorded, not failed."""
        report = check_twist_lift_commutation(z2.data, z2.twist("sigma_beta"))
        converse = report.get("lift_twist.converse")
        assert converse.informational and not converse.passed
        assert report.ok

    def test_needs_monoidal_input(self, z2):
        """Test that the plain lift is rejected."""
        with pytest.raises(FlavorMismatchError):
            check_twist_lift_commutation(z2.plain, z2.twist("sigma_beta"))
