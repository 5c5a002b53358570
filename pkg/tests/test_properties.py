"""Property-based tests driven by hypothesis."""

import json
from fractions import Fraction
from math import comb, gcd

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.algebra_io import canonicalize, serialize, to_algebra_file
from src.correspondence import lift_monoidal, lift_plain, unlift_monoidal, unlift_plain
from src.examples_library import get_instance, group_algebra, group_automorphism, sweedler_algebra, sweedler_scaling
from src.exact_tensor import LinearMap
from src.sweedler import enumerate_bracketings

nonzero_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6).filter(lambda q: q != 0)


def _catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


@pytest.mark.property
class TestLiftProperties:
    """Test that lifting and unlifting are mutually inverse."""

    @settings(max_examples=20, deadline=None)
    @given(lam=nonzero_rationals)
    def test_sweedler_round_trip(self, lam):
        """Test unlift ∘ lift = id on H4 for every nonzero scaling, in both flavors."""
        base = sweedler_algebra()
        alpha = sweedler_scaling(lam)
        for lift, unlift in ((lift_monoidal, unlift_monoidal), (lift_plain, unlift_plain)):
            again = unlift(lift(base, alpha))
            assert again.mult == base.mult
            assert again.comult == base.comult
            assert again.alpha.is_identity()

    @settings(max_examples=20, deadline=None)
    @given(n=st.integers(min_value=1, max_value=7), m=st.integers(min_value=1, max_value=12))
    def test_group_round_trip(self, n, m):
        """Test unlift ∘ lift = id on ℚ[ℤ/n] for every automorphism g -> g^m."""
        assume(gcd(n, m) == 1)
        base = group_algebra(n)
        alpha = group_automorphism(n, m)
        lifted = lift_monoidal(base, alpha)
        assert lifted.alpha == alpha
        again = unlift_monoidal(lifted)
        assert again.mult == base.mult
        assert again.comult == base.comult

    @settings(max_examples=20, deadline=None)
    @given(lam=nonzero_rationals)
    def test_monoidal_lift_structure_map(self, lam):
        """Test that the lifted product is α∘m by comparing one product directly."""
        base = sweedler_algebra()
        alpha = sweedler_scaling(lam)
        lifted = lift_monoidal(base, alpha)
        # x · g = -gx in H4, so α∘m sends (x, g) to -λ gx
        assert dict(lifted.mult.binary(2, 1)) == {3: -Fraction(lam)}


@pytest.mark.property
class TestBracketingProperties:
    """Test bracketing enumeration."""

    @given(n=st.integers(min_value=1, max_value=7))
    def test_catalan_count(self, n):
        """Test that n factors have Catalan(n − 1) distinct bracketings."""
        trees = enumerate_bracketings(n)
        assert len(trees) == _catalan(n - 1)
        assert len(set(trees)) == len(trees)

    @given(n=st.integers(min_value=2, max_value=6), data=st.data())
    def test_first_moves_to_front(self, n, data):
        """Test that a requested bracketing is enumerated first without changing the set."""
        trees = enumerate_bracketings(n)
        first = data.draw(st.sampled_from(trees))
        reordered = enumerate_bracketings(n, first=first)
        assert reordered[0] == first
        assert sorted(map(repr, reordered)) == sorted(map(repr, trees))


@pytest.mark.property
class TestCanonicalizeProperties:
    """Test that canonicalization ignores entry order and fraction representation."""

    @settings(max_examples=25, deadline=None)
    @given(data=st.data(), factor=st.integers(min_value=1, max_value=9))
    def test_shuffled_file_canonicalizes(self, data, factor):
        """Test that any permutation and rescaling of entries canonicalizes to the same text."""
        inst = get_instance("z2")
        model = to_algebra_file(inst.data, twists={name: tw.sigma for name, tw in inst.twists.items()})
        text = serialize(model)
        raw = json.loads(text)
        for key in ("mult", "comult"):
            raw[key] = data.draw(st.permutations(raw[key]))
        raw["twists"]["sigma_beta"]["coeffs"] = [
            [a, b, factor * p, factor * q] for a, b, p, q in raw["twists"]["sigma_beta"]["coeffs"]
        ]
        once = canonicalize(json.dumps(raw))
        assert once == text
        assert canonicalize(once) == once


@pytest.mark.property
class TestLinearMapProperties:
    """Test exact inversion of structure maps."""

    @settings(deadline=None)
    @given(k=st.integers(min_value=-4, max_value=4), lam=nonzero_rationals)
    def test_power_inverse(self, k, lam):
        """Test α^k ∘ α^{-k} = id for a diagonal scaling."""
        alpha = sweedler_scaling(lam)
        assert (alpha.power(k) @ alpha.power(-k)) == LinearMap.identity(4)
