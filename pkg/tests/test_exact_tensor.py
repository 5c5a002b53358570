"""Tests for the exact-rational tensor kernel."""

from fractions import Fraction

import pytest

from src.config_manager import get_settings
from src.examples_library import group_algebra, sweedler_algebra
from src.exact_tensor import (
    AlphaPowers,
    LinearMap,
    SparseTensor,
    StructureTensor,
    TensorElement2,
    TensorElement3,
    Vector,
    dense_threshold,
    flat_index,
    hom_product,
    matrix_rank,
    multiply_sparse,
    nullspace,
    solve_linear,
    to_scalar,
    unflatten,
    uses_dense,
)
from src.exceptions import (
    AlphaWindowExceededError,
    DimensionMismatchError,
    MissingStructureError,
    NonUniqueSolutionError,
    NoSolutionError,
)


@pytest.mark.unit
class TestScalars:
    """Test scalar coercion."""

    def test_to_scalar_forms(self):
        """Test that ints, strings, pairs and Fractions coerce exactly."""
        assert to_scalar(3) == Fraction(3)
        assert to_scalar("-2/6") == Fraction(-1, 3)
        assert to_scalar((4, -8)) == Fraction(-1, 2)
        assert to_scalar(Fraction(5, 7)) == Fraction(5, 7)

    def test_to_scalar_rejects(self):
        """Test that floats, bools and zero denominators are rejected."""
        with pytest.raises(TypeError):
            to_scalar(0.5)
        with pytest.raises(TypeError):
            to_scalar(True)
        with pytest.raises(ZeroDivisionError):
            to_scalar((1, 0))

    def test_flat_index_row_major(self):
        """Test row-major flattening."""
        assert flat_index((1, 2, 3), (2, 3, 4)) == (1 * 3 + 2) * 4 + 3
        assert unflatten(23, (2, 3, 4)) == (1, 2, 3)


@pytest.mark.unit
class TestLinearMap:
    """Test exact linear maps."""

    def test_compose_and_identity(self):
        """Test composition order and the identity."""
        f = LinearMap.from_rows([[1, 2], [0, 1]])
        g = LinearMap.from_rows([[0, 1], [1, 0]])
        assert (f @ g) == LinearMap.from_rows([[2, 1], [1, 0]])
        assert f @ LinearMap.identity(2) == f
        assert LinearMap.identity(3).is_identity()

    def test_inverse(self):
        """Test exact inversion."""
        f = LinearMap.from_rows([[2, 1], [1, 1]])
        assert f.inverse() == LinearMap.from_rows([[1, -1], [-1, 2]])
        assert (f @ f.inverse()).is_identity()
        assert f.power(-2) == f.inverse() @ f.inverse()

    def test_singular_inverse_raises(self):
        """Test that singular maps cannot be inverted."""
        singular = LinearMap.from_rows([[1, 2], [2, 4]])
        assert not singular.is_invertible()
        with pytest.raises((NoSolutionError, NonUniqueSolutionError)):
            singular.inverse()

    def test_kron_row_major(self):
        """Test the tensor product of maps against flat indices."""
        f = LinearMap.from_rows([[1, 2], [3, 4]])
        g = LinearMap.from_rows([[0, 1], [1, 0]])
        k = f.kron(g)
        # (f ⊗ g)(e_1 ⊗ e_0) = f(e_1) ⊗ g(e_0) = (2e_0 + 4e_1) ⊗ e_1
        column = dict(k.columns[flat_index((1, 0), (2, 2))])
        assert column == {flat_index((0, 1), (2, 2)): 2, flat_index((1, 1), (2, 2)): 4}

    def test_swap(self):
        """Test the flip of a tensor product of two spaces."""
        swap = LinearMap.swap(2, 3)
        assert (swap.dim_in, swap.dim_out) == (6, 6)
        # e_1 ⊗ f_2 -> f_2 ⊗ e_1
        assert dict(swap.columns[1 * 3 + 2]) == {2 * 2 + 1: 1}
        assert (LinearMap.swap(3, 2) @ swap).is_identity()

    def test_combination(self):
        """Test linear combinations of maps."""
        a, b = LinearMap.identity(2), LinearMap.from_rows([[0, 1], [1, 0]])
        assert LinearMap.combination(2, 2, [(2, a), (-1, b)]) == LinearMap.from_rows([[2, -1], [-1, 2]])
        with pytest.raises(DimensionMismatchError):
            LinearMap.combination(2, 2, [(1, LinearMap.identity(3))])

    def test_entries_out_of_range(self):
        """Test that entries outside the shape are rejected."""
        with pytest.raises(DimensionMismatchError):
            LinearMap(2, 2, {(2, 0): 1})


@pytest.mark.unit
class TestLinearSystems:
    """Test fraction-free elimination."""

    def test_solve(self):
        """Test a regular system with a rational solution."""
        M = LinearMap.from_rows([[2, 1], [1, 3]])
        x = solve_linear(M, Vector(2, (1, 2)))
        assert x.coords == (Fraction(1, 5), Fraction(3, 5))

    def test_inconsistent(self):
        """Test that inconsistent systems raise NoSolutionError."""
        M = LinearMap.from_rows([[1, 1], [1, 1]])
        with pytest.raises(NoSolutionError):
            solve_linear(M, Vector(2, (1, 2)))

    def test_underdetermined(self):
        """Test that the kernel dimension is reported."""
        M = LinearMap.from_rows([[1, 1, 1]])
        with pytest.raises(NonUniqueSolutionError) as info:
            solve_linear(M, Vector(1, (1,)))
        assert info.value.kernel_dimension == 2

    def test_rank_and_nullspace(self):
        """Test rank and a kernel basis."""
        M = LinearMap.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
        assert matrix_rank(M) == 2
        kernel = nullspace(M)
        assert len(kernel) == 1
        assert M.apply(kernel[0]).is_zero()


@pytest.mark.unit
class TestAlphaPowers:
    """Test the cached power window."""

    def test_powers_and_inverse(self):
        """Test positive and negative powers."""
        alpha = LinearMap.from_rows([[1, 1], [0, 1]])
        powers = AlphaPowers(alpha, 4)
        assert powers(3) == LinearMap.from_rows([[1, 3], [0, 1]])
        assert powers(-2) == LinearMap.from_rows([[1, -2], [0, 1]])
        assert powers(0).is_identity()

    def test_window(self):
        """Test that powers outside the window raise."""
        powers = AlphaPowers(LinearMap.identity(2), 2)
        with pytest.raises(AlphaWindowExceededError):
            powers(3)

    def test_singular_negative_power(self):
        """Test that a singular map has no negative powers."""
        powers = AlphaPowers(LinearMap.from_rows([[1, 0], [0, 0]]), 3)
        assert not powers.invertible
        assert powers(2) == LinearMap.from_rows([[1, 0], [0, 0]])
        with pytest.raises(MissingStructureError):
            powers(-1)


@pytest.mark.unit
class TestSparseTensor:
    """Test sparse tensors."""

    def test_zero_coefficients_dropped(self):
        """Test that stored coefficients are never zero."""
        t = SparseTensor((2, 2), {(0, 0): 0, (1, 1): 3})
        assert dict(t.coeffs) == {(1, 1): 3}

    def test_of_picks_class(self):
        """Test the most specific class is chosen."""
        assert isinstance(SparseTensor.of((3, 3), {}), TensorElement2)
        assert isinstance(SparseTensor.of((2, 2, 2), {}), TensorElement3)
        assert type(SparseTensor.of((2, 3), {})) is SparseTensor

    def test_arithmetic(self):
        """Test addition, scaling and cancellation."""
        a = TensorElement2.from_pairs(2, {(0, 1): 1, (1, 0): 2})
        b = TensorElement2.from_pairs(2, {(0, 1): -1})
        assert dict((a + b).coeffs) == {(1, 0): 2}
        assert (a - a).is_zero()
        assert a.scale("1/2").coefficient((1, 0)) == 1

    def test_permute_and_flip(self):
        """Test leg permutations."""
        t = SparseTensor((2, 3, 4), {(1, 2, 3): 5})
        assert dict(t.permute((2, 0, 1)).coeffs) == {(3, 1, 2): 5}
        assert t.permute((2, 0, 1)).dims == (4, 2, 3)
        assert dict(t.flip().coeffs) == {(2, 1, 3): 5}

    def test_apply_legwise(self):
        """Test (f ⊗ id)(t)."""
        f = LinearMap.from_rows([[1, 1], [0, 1]])
        t = TensorElement2.from_pairs(2, {(1, 0): 1})
        assert dict(t.apply_legwise((f, None)).coeffs) == {(0, 0): 1, (1, 0): 1}

    def test_first_difference(self):
        """Test the smallest differing index."""
        a = TensorElement2.from_pairs(2, {(1, 1): 1})
        b = TensorElement2.from_pairs(2, {(0, 1): 1, (1, 1): 1})
        assert a.first_difference(b) == (0, 1)
        assert a.first_difference(a) is None

    def test_shape_mismatch(self):
        """Test that tensors of different shapes cannot be added."""
        with pytest.raises(DimensionMismatchError):
            SparseTensor((2,), {}) + SparseTensor((3,), {})

    def test_hom_product_componentwise(self, ordinary_group):
        """Test the componentwise product in ℚ[ℤ/3]^{⊗2}."""
        u = TensorElement2.from_pairs(3, {(1, 2): 1})
        v = TensorElement2.from_pairs(3, {(1, 1): 2})
        assert dict(hom_product(ordinary_group.mult, u, v).coeffs) == {(2, 0): 2}


@pytest.mark.unit
class TestStructureTensor:
    """Test structure-constant tables."""

    def test_binary_and_unary(self):
        """Test lookup by inputs and by source."""
        t = StructureTensor((2, 2, 2), {(0, 1, 1): 1, (1, 1, 0): -1})
        assert t.binary(0, 1) == ((1, Fraction(1)),)
        assert t.binary(1, 0) == ()
        assert t.unary(1) == (((1, 0), Fraction(-1)),)

    def test_equality_and_first_difference(self):
        """Test comparison of tables."""
        t = StructureTensor((2, 2, 2), {(0, 0, 0): 1})
        assert t == StructureTensor((2, 2, 2), {(0, 0, 0): Fraction(1)})
        changed = t.with_entry((1, 1, 1), 2)
        assert t.first_difference(changed) == (1, 1, 1)


def _set_dense_threshold(monkeypatch, value: int) -> None:
    monkeypatch.setenv("HOMTWIST_ALGEBRA__DENSE_THRESHOLD", str(value))
    get_settings.cache_clear()


def _sample_map(dim_in: int, dim_out: int) -> LinearMap:
    rows = [[Fraction((3 * r - 2 * c) % 5 - 2, c + 1) for c in range(dim_in)] for r in range(dim_out)]
    return LinearMap.from_rows(rows)


@pytest.mark.unit
class TestDensePath:
    """Test that products below dense_threshold agree with the sparse loops."""

    def test_threshold_read_from_settings(self, monkeypatch):
        """Test that the threshold follows HOMTWIST_ALGEBRA__DENSE_THRESHOLD."""
        assert dense_threshold() == 8
        assert uses_dense(4, 4)
        assert not uses_dense(4, 16)
        assert not uses_dense(0, 4)
        _set_dense_threshold(monkeypatch, 0)
        assert dense_threshold() == 0
        assert not uses_dense(1)

    @pytest.mark.parametrize("dims", [(3, 4, 2), (4, 4, 4), (9, 5, 12)])
    def test_compose_agrees(self, monkeypatch, dims):
        """Test f ∘ g on both paths, below and above the default threshold."""
        a, b, c = dims
        f, g = _sample_map(b, a), _sample_map(c, b)
        _set_dense_threshold(monkeypatch, 0)
        sparse = f @ g
        _set_dense_threshold(monkeypatch, 100)
        dense = f @ g
        assert dense == sparse
        assert (dense.dim_in, dense.dim_out) == (c, a)

    @pytest.mark.parametrize("shapes", [((2, 3), (3, 2)), ((4, 4), (4, 4)), ((9, 2), (3, 10))])
    def test_kron_agrees(self, monkeypatch, shapes):
        """Test f ⊗ g on both paths, below and above the default threshold."""
        f, g = _sample_map(*shapes[0]), _sample_map(*shapes[1])
        _set_dense_threshold(monkeypatch, 0)
        sparse = f.kron(g)
        _set_dense_threshold(monkeypatch, 100)
        dense = f.kron(g)
        assert dense == sparse
        assert dense.dim_in == shapes[0][0] * shapes[1][0]

    def test_compose_drops_cancelled_entries(self, monkeypatch):
        """Test that zeros produced on the dense path are not stored."""
        _set_dense_threshold(monkeypatch, 100)
        f = LinearMap.from_rows([[1, 1], [0, 0]])
        g = LinearMap.from_rows([[1, 0], [-1, 0]])
        assert dict((f @ g).entries) == {}

    @pytest.mark.parametrize("algebra", [sweedler_algebra(), group_algebra(9)], ids=["h4", "z9"])
    def test_multiply_sparse_agrees(self, monkeypatch, algebra):
        """Test products in H4 (dimension 4) and ℚ[ℤ/9] (dimension 9) on both paths."""
        dim = algebra.dim
        a = {i: Fraction(i + 1, 2) for i in range(dim)}
        b = {i: Fraction(1 - i, 3) for i in range(0, dim, 2)}
        _set_dense_threshold(monkeypatch, 0)
        sparse = multiply_sparse(algebra.mult, a, b)
        _set_dense_threshold(monkeypatch, 100)
        dense = multiply_sparse(algebra.mult, a, b)
        assert dense == sparse
        assert all(isinstance(k, int) and v for k, v in dense.items())

    def test_multiply_sparse_cancellation(self, monkeypatch):
        """Test (1 + g)(1 − g) = 0 in ℚ[ℤ/2] on the dense path."""
        _set_dense_threshold(monkeypatch, 100)
        mult = group_algebra(2).mult
        assert multiply_sparse(mult, {0: Fraction(1), 1: Fraction(1)}, {0: Fraction(1), 1: Fraction(-1)}) == {}
