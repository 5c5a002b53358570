"""
Exact-rational multilinear kernel.

Scalars are ``fractions.Fraction`` (always reduced, positive denominator).
Elements of H^{⊗r} and structure tensors are sparse maps keyed by index
tuples; no stored coefficient is ever zero. Dense views are numpy object
arrays of Fractions and are read-only.

Flat indices of tensor products are row-major: for legs of dimensions
(d1, ..., dr) the index (i1, ..., ir) flattens to
((i1 * d2 + i2) * d3 + i3) ... .
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from itertools import product as iter_product
from math import lcm
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .config_manager import get_settings
from .exceptions import (
    AlphaWindowExceededError,
    DimensionMismatchError,
    MissingStructureError,
    NoSolutionError,
    NonUniqueSolutionError,
)

logger = logging.getLogger(__name__)

Scalar = Fraction
ScalarLike = Union[int, Fraction, str, Tuple[int, int]]
Index = Tuple[int, ...]
SparseCoeffs = Dict[Index, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(value: ScalarLike) -> Fraction:
    """Coerce ints, Fractions, "p/q" strings and (p, q) pairs to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, tuple) and len(value) == 2:
        numerator, denominator = value
        if denominator == 0:
            raise ZeroDivisionError("scalar with zero denominator")
        return Fraction(int(numerator), int(denominator))
    raise TypeError(f"Cannot interpret {value!r} as an exact rational")


def scalar_pair(value: Fraction) -> Tuple[int, int]:
    return value.numerator, value.denominator


def flat_index(indices: Sequence[int], dims: Sequence[int]) -> int:
    flat = 0
    for i, d in zip(indices, dims):
        flat = flat * d + i
    return flat


def unflatten(flat: int, dims: Sequence[int]) -> Index:
    out = []
    for d in reversed(dims):
        flat, rem = divmod(flat, d)
        out.append(rem)
    return tuple(reversed(out))


def _accumulate(target: SparseCoeffs, key: Index, value: Fraction) -> None:
    new = target.get(key, ZERO) + value
    if new:
        target[key] = new
    else:
        target.pop(key, None)


def _frozen(coeffs: Mapping[Index, Fraction]) -> Mapping[Index, Fraction]:
    return MappingProxyType({k: v for k, v in coeffs.items() if v})


def _dense_array(shape: Tuple[int, ...], coeffs: Mapping[Index, Fraction]) -> np.ndarray:
    arr = np.full(shape, ZERO, dtype=object)
    for key, value in coeffs.items():
        arr[key] = value
    arr.flags.writeable = False
    return arr


def dense_threshold() -> int:
    """Dimension below which products are computed on dense object arrays."""
    return get_settings().algebra.dense_threshold


def uses_dense(*dims: int) -> bool:
    limit = dense_threshold()
    return all(0 < d < limit for d in dims)


# ---------------------------------------------------------------------------
# Vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Vector:
    """Dense coordinate vector over ℚ."""

    dim: int
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(to_scalar(c) for c in self.coords)
        if len(coords) != self.dim:
            raise DimensionMismatchError(
                f"Vector of dim {self.dim} given {len(coords)} coordinates",
                expected=self.dim,
                actual=len(coords),
            )
        object.__setattr__(self, "coords", coords)

    @classmethod
    def zero(cls, dim: int) -> "Vector":
        return cls(dim, (ZERO,) * dim)

    @classmethod
    def basis(cls, dim: int, i: int) -> "Vector":
        coords = [ZERO] * dim
        coords[i] = ONE
        return cls(dim, tuple(coords))

    @classmethod
    def from_sparse(cls, dim: int, entries: Mapping[int, ScalarLike]) -> "Vector":
        coords = [ZERO] * dim
        for i, c in entries.items():
            coords[i] = to_scalar(c)
        return cls(dim, tuple(coords))

    def sparse(self) -> Dict[int, Fraction]:
        return {i: c for i, c in enumerate(self.coords) if c}

    def as_tensor(self) -> "SparseTensor":
        return SparseTensor((self.dim,), {(i,): c for i, c in self.sparse().items()})

    def is_zero(self) -> bool:
        return not any(self.coords)

    def scale(self, c: ScalarLike) -> "Vector":
        c = to_scalar(c)
        return Vector(self.dim, tuple(c * x for x in self.coords))

    def _check(self, other: "Vector") -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError("vector dimensions differ", self.dim, other.dim)

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(self.dim, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(self.dim, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Vector":
        return self.scale(-1)


# ---------------------------------------------------------------------------
# Linear maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Linear map k^dim_in -> k^dim_out stored as sparse (row, col) entries."""

    dim_in: int
    dim_out: int
    entries: Mapping[Tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for (row, col), value in self.entries.items():
            if not (0 <= row < self.dim_out and 0 <= col < self.dim_in):
                raise DimensionMismatchError(f"entry ({row}, {col}) outside {self.dim_out}x{self.dim_in}")
            value = to_scalar(value)
            if value:
                cleaned[(row, col)] = value
        object.__setattr__(self, "entries", MappingProxyType(cleaned))

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, dim: int) -> "LinearMap":
        return cls(dim, dim, {(i, i): ONE for i in range(dim)})

    @classmethod
    def zero(cls, dim_in: int, dim_out: int) -> "LinearMap":
        return cls(dim_in, dim_out, {})

    @classmethod
    def scalar(cls, dim: int, c: ScalarLike) -> "LinearMap":
        c = to_scalar(c)
        return cls(dim, dim, {(i, i): c for i in range(dim)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[ScalarLike]]) -> "LinearMap":
        dim_out = len(rows)
        dim_in = len(rows[0]) if rows else 0
        entries = {}
        for r, row in enumerate(rows):
            if len(row) != dim_in:
                raise DimensionMismatchError("ragged matrix rows")
            for c, value in enumerate(row):
                entries[(r, c)] = to_scalar(value)
        return cls(dim_in, dim_out, entries)

    @classmethod
    def from_columns(cls, dim_out: int, columns: Sequence[Mapping[int, Fraction]]) -> "LinearMap":
        entries = {}
        for col, column in enumerate(columns):
            for row, value in column.items():
                entries[(row, col)] = value
        return cls(len(columns), dim_out, entries)

    @classmethod
    def from_dense(cls, matrix: np.ndarray) -> "LinearMap":
        dim_out, dim_in = matrix.shape
        rows, cols = np.nonzero(matrix)
        return cls(dim_in, dim_out, {(int(r), int(c)): matrix[r, c] for r, c in zip(rows, cols)})

    @classmethod
    def combination(
        cls, dim_in: int, dim_out: int, terms: Iterable[Tuple[ScalarLike, "LinearMap"]]
    ) -> "LinearMap":
        """Σ c_k f_k without building the intermediate sums."""
        entries: Dict[Tuple[int, int], Fraction] = {}
        for coeff, f in terms:
            coeff = to_scalar(coeff)
            if (f.dim_in, f.dim_out) != (dim_in, dim_out):
                raise DimensionMismatchError("summands must share one shape")
            for key, value in f.entries.items():
                _accumulate(entries, key, coeff * value)
        return cls(dim_in, dim_out, entries)

    @classmethod
    def swap(cls, left_dim: int, right_dim: int) -> "LinearMap":
        """The flip V ⊗ W -> W ⊗ V on row-major flat indices."""
        return cls(
            left_dim * right_dim,
            right_dim * left_dim,
            {(b * left_dim + a, a * right_dim + b): ONE for a in range(left_dim) for b in range(right_dim)},
        )

    @classmethod
    def from_function(cls, dim_in: int, dim_out: int, fn) -> "LinearMap":
        """Materialise a map from its action on basis indices (fn: int -> {row: value})."""
        return cls.from_columns(dim_out, [fn(col) for col in range(dim_in)])

    # -- views ------------------------------------------------------------

    @cached_property
    def columns(self) -> Tuple[Tuple[Tuple[int, Fraction], ...], ...]:
        cols: List[List[Tuple[int, Fraction]]] = [[] for _ in range(self.dim_in)]
        for (row, col), value in sorted(self.entries.items()):
            cols[col].append((row, value))
        return tuple(tuple(c) for c in cols)

    @cached_property
    def matrix(self) -> np.ndarray:
        return _dense_array((self.dim_out, self.dim_in), self.entries)

    def entry(self, row: int, col: int) -> Fraction:
        return self.entries.get((row, col), ZERO)

    @property
    def is_square(self) -> bool:
        return self.dim_in == self.dim_out

    # -- algebra ----------------------------------------------------------

    def apply_sparse(self, vec: Mapping[int, Fraction]) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        columns = self.columns
        for col, coeff in vec.items():
            for row, value in columns[col]:
                new = out.get(row, ZERO) + coeff * value
                if new:
                    out[row] = new
                else:
                    out.pop(row, None)
        return out

    def apply(self, vec: Vector) -> Vector:
        if vec.dim != self.dim_in:
            raise DimensionMismatchError("map input dimension differs", self.dim_in, vec.dim)
        return Vector.from_sparse(self.dim_out, self.apply_sparse(vec.sparse()))

    def compose(self, other: "LinearMap") -> "LinearMap":
        """Return self ∘ other."""
        if other.dim_out != self.dim_in:
            raise DimensionMismatchError("cannot compose maps", self.dim_in, other.dim_out)
        if uses_dense(self.dim_out, self.dim_in, other.dim_in):
            return LinearMap.from_dense(self.matrix.dot(other.matrix))
        return LinearMap.from_columns(
            self.dim_out, [self.apply_sparse(dict(col)) for col in other.columns]
        )

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return self.compose(other)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if (self.dim_in, self.dim_out) != (other.dim_in, other.dim_out):
            raise DimensionMismatchError("cannot add maps of different shapes")
        entries = dict(self.entries)
        for key, value in other.entries.items():
            _accumulate(entries, key, value)
        return LinearMap(self.dim_in, self.dim_out, entries)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + other.scale(-1)

    def scale(self, c: ScalarLike) -> "LinearMap":
        c = to_scalar(c)
        return LinearMap(self.dim_in, self.dim_out, {k: c * v for k, v in self.entries.items()})

    def kron(self, other: "LinearMap") -> "LinearMap":
        """Tensor product self ⊗ other on row-major flat indices."""
        if uses_dense(self.dim_in, self.dim_out, other.dim_in, other.dim_out):
            # (r1, c1, r2, c2) -> (r1 r2, c1 c2)
            outer = np.multiply.outer(self.matrix, other.matrix).transpose(0, 2, 1, 3)
            return LinearMap.from_dense(outer.reshape(self.dim_out * other.dim_out, self.dim_in * other.dim_in))
        entries = {}
        for (r1, c1), v1 in self.entries.items():
            for (r2, c2), v2 in other.entries.items():
                entries[(r1 * other.dim_out + r2, c1 * other.dim_in + c2)] = v1 * v2
        return LinearMap(self.dim_in * other.dim_in, self.dim_out * other.dim_out, entries)

    def transpose(self) -> "LinearMap":
        return LinearMap(self.dim_out, self.dim_in, {(c, r): v for (r, c), v in self.entries.items()})

    def rank(self) -> int:
        return matrix_rank(self)

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.dim_in

    def inverse(self) -> "LinearMap":
        if not self.is_square:
            raise DimensionMismatchError("only square maps can be inverted", self.dim_in, self.dim_out)
        columns = [solve_linear(self, Vector.basis(self.dim_in, i)).sparse() for i in range(self.dim_in)]
        return LinearMap.from_columns(self.dim_in, columns)

    def power(self, k: int) -> "LinearMap":
        if not self.is_square:
            raise DimensionMismatchError("powers need a square map", self.dim_in, self.dim_out)
        base = self if k >= 0 else self.inverse()
        result = LinearMap.identity(self.dim_in)
        for _ in range(abs(k)):
            result = base.compose(result)
        return result

    def is_identity(self) -> bool:
        return self == LinearMap.identity(self.dim_in) if self.is_square else False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (
            self.dim_in == other.dim_in
            and self.dim_out == other.dim_out
            and dict(self.entries) == dict(other.entries)
        )

    def __hash__(self) -> int:
        return hash((self.dim_in, self.dim_out, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"LinearMap({self.dim_out}x{self.dim_in}, nnz={len(self.entries)})"


class AlphaPowers:
    """Lazily cached integer powers of an endomorphism within -window..window."""

    def __init__(self, base: LinearMap, window: int):
        self._base = base
        self._window = window
        self._cache: Dict[int, LinearMap] = {0: LinearMap.identity(base.dim_in), 1: base}
        self._lock = threading.Lock()
        self._invertible: Optional[bool] = None

    @property
    def window(self) -> int:
        return self._window

    @property
    def invertible(self) -> bool:
        if self._invertible is None:
            self._invertible = self._base.is_invertible()
        return self._invertible

    def __call__(self, k: int) -> LinearMap:
        if abs(k) > self._window:
            raise AlphaWindowExceededError(k, self._window)
        cached = self._cache.get(k)
        if cached is not None:
            return cached
        if k < 0 and not self.invertible:
            raise MissingStructureError("structure map is singular; negative powers are undefined")
        with self._lock:
            step = 1 if k > 0 else -1
            start = max((p for p in self._cache if p * step >= 0 and abs(p) <= abs(k)), key=abs)
            if k < 0 and -1 not in self._cache:
                self._cache[-1] = self._base.inverse()
            one = self._cache[step]
            current = self._cache[start]
            for p in range(start + step, k + step, step):
                current = one.compose(current)
                self._cache[p] = current
            return self._cache[k]


# ---------------------------------------------------------------------------
# Sparse tensors
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SparseTensor:
    """Element of V_1 ⊗ ... ⊗ V_r with exact rational coefficients."""

    dims: Tuple[int, ...]
    coeffs: Mapping[Index, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        dims = tuple(self.dims)
        cleaned = {}
        for key, value in self.coeffs.items():
            key = tuple(key)
            if len(key) != len(dims) or any(not (0 <= i < d) for i, d in zip(key, dims)):
                raise DimensionMismatchError(f"index {key} outside tensor shape {dims}")
            value = to_scalar(value)
            if value:
                cleaned[key] = value
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "coeffs", MappingProxyType(cleaned))

    @staticmethod
    def of(dims: Sequence[int], coeffs: Mapping[Index, Fraction]) -> "SparseTensor":
        """Build the most specific tensor class for the given shape."""
        dims = tuple(dims)
        if len(dims) == 2 and dims[0] == dims[1]:
            return TensorElement2(dims, coeffs)
        if len(dims) == 3 and dims[0] == dims[1] == dims[2]:
            return TensorElement3(dims, coeffs)
        return SparseTensor(dims, coeffs)

    @classmethod
    def zero(cls, dims: Sequence[int]) -> "SparseTensor":
        return cls.of(dims, {})

    @classmethod
    def pure(cls, dims: Sequence[int], index: Index, coeff: ScalarLike = 1) -> "SparseTensor":
        return cls.of(dims, {tuple(index): to_scalar(coeff)})

    @property
    def rank(self) -> int:
        return len(self.dims)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, index: Index) -> Fraction:
        return self.coeffs.get(tuple(index), ZERO)

    def sorted_items(self) -> List[Tuple[Index, Fraction]]:
        return sorted(self.coeffs.items())

    def to_dense(self) -> np.ndarray:
        return _dense_array(self.dims, self.coeffs)

    def to_vector(self) -> Vector:
        if self.rank != 1:
            raise DimensionMismatchError("only rank-1 tensors convert to vectors", 1, self.rank)
        return Vector.from_sparse(self.dims[0], {k[0]: v for k, v in self.coeffs.items()})

    def flatten(self) -> Vector:
        size = reduce(lambda a, b: a * b, self.dims, 1)
        return Vector.from_sparse(size, {flat_index(k, self.dims): v for k, v in self.coeffs.items()})

    def _check(self, other: "SparseTensor") -> None:
        if self.dims != other.dims:
            raise DimensionMismatchError(f"tensor shapes differ: {self.dims} vs {other.dims}")

    def __add__(self, other: "SparseTensor") -> "SparseTensor":
        self._check(other)
        out = dict(self.coeffs)
        for key, value in other.coeffs.items():
            _accumulate(out, key, value)
        return SparseTensor.of(self.dims, out)

    def __sub__(self, other: "SparseTensor") -> "SparseTensor":
        return self + other.scale(-1)

    def __neg__(self) -> "SparseTensor":
        return self.scale(-1)

    def scale(self, c: ScalarLike) -> "SparseTensor":
        c = to_scalar(c)
        return SparseTensor.of(self.dims, {k: c * v for k, v in self.coeffs.items()})

    def tensor(self, other: "SparseTensor") -> "SparseTensor":
        """Outer product self ⊗ other (legs concatenated)."""
        out = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                out[k1 + k2] = v1 * v2
        return SparseTensor.of(self.dims + other.dims, out)

    def permute(self, order: Sequence[int]) -> "SparseTensor":
        """Result leg p is input leg order[p]."""
        order = tuple(order)
        if sorted(order) != list(range(self.rank)):
            raise ValueError(f"{order} is not a permutation of {self.rank} legs")
        dims = tuple(self.dims[o] for o in order)
        return SparseTensor.of(dims, {tuple(k[o] for o in order): v for k, v in self.coeffs.items()})

    def flip(self) -> "SparseTensor":
        """τ on the first two legs."""
        return self.permute((1, 0) + tuple(range(2, self.rank)))

    def apply_legwise(self, maps: Sequence[Optional[LinearMap]]) -> "SparseTensor":
        """(f_1 ⊗ ... ⊗ f_r)(self); ``None`` stands for the identity."""
        if len(maps) != self.rank:
            raise DimensionMismatchError("one map per leg required", self.rank, len(maps))
        dims = tuple(self.dims[p] if f is None else f.dim_out for p, f in enumerate(maps))
        out: SparseCoeffs = {}
        for key, value in self.coeffs.items():
            choices = []
            for p, f in enumerate(maps):
                choices.append(((key[p], ONE),) if f is None else f.columns[key[p]])
            for combo in iter_product(*choices):
                coeff = value
                for _, c in combo:
                    coeff *= c
                _accumulate(out, tuple(i for i, _ in combo), coeff)
        return SparseTensor.of(dims, out)

    def first_difference(self, other: "SparseTensor") -> Optional[Index]:
        """Smallest index where the coefficients differ, or None if equal."""
        self._check(other)
        keys = sorted(set(self.coeffs) | set(other.coeffs))
        for key in keys:
            if self.coefficient(key) != other.coefficient(key):
                return key
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseTensor):
            return NotImplemented
        return self.dims == other.dims and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self) -> int:
        return hash((self.dims, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        terms = " + ".join(f"{v}*e{k}" for k, v in self.sorted_items()) or "0"
        return f"{type(self).__name__}({terms})"


class TensorElement2(SparseTensor):
    """Element of H ⊗ H."""

    @classmethod
    def from_pairs(cls, dim: int, coeffs: Mapping[Tuple[int, int], ScalarLike]) -> "TensorElement2":
        return cls((dim, dim), {k: to_scalar(v) for k, v in coeffs.items()})

    @classmethod
    def unit(cls, dim: int, unit: Vector) -> "TensorElement2":
        return cls.from_pairs(dim, {(i, j): a * b for i, a in unit.sparse().items() for j, b in unit.sparse().items()})

    @property
    def dim(self) -> int:
        return self.dims[0]


class TensorElement3(SparseTensor):
    """Element of H ⊗ H ⊗ H."""

    @classmethod
    def from_triples(cls, dim: int, coeffs: Mapping[Tuple[int, int, int], ScalarLike]) -> "TensorElement3":
        return cls((dim, dim, dim), {k: to_scalar(v) for k, v in coeffs.items()})

    @property
    def dim(self) -> int:
        return self.dims[0]


# ---------------------------------------------------------------------------
# Structure tensors
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StructureTensor:
    """
    Rank-3 structure constants T[a][b][c].

    For a multiplication or an action the first two indices are inputs
    (m(e_a ⊗ e_b) = Σ_c T[a][b][c] e_c); for a comultiplication the first is
    the input (Δ(e_a) = Σ T[a][b][c] e_b ⊗ e_c).
    """

    shape: Tuple[int, int, int]
    entries: Mapping[Tuple[int, int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        shape = tuple(self.shape)
        tensor = SparseTensor(shape, self.entries)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "entries", tensor.coeffs)

    @classmethod
    def from_function(cls, shape: Tuple[int, int, int], fn) -> "StructureTensor":
        """fn(a, b) -> mapping c -> coeff (binary) is evaluated on all input pairs."""
        entries = {}
        for a in range(shape[0]):
            for b in range(shape[1]):
                for c, value in fn(a, b).items():
                    entries[(a, b, c)] = value
        return cls(shape, entries)

    @classmethod
    def from_unary(cls, shape: Tuple[int, int, int], fn) -> "StructureTensor":
        """fn(a) -> mapping (b, c) -> coeff (coproduct-like)."""
        entries = {}
        for a in range(shape[0]):
            for (b, c), value in fn(a).items():
                entries[(a, b, c)] = value
        return cls(shape, entries)

    @cached_property
    def by_inputs(self) -> Mapping[Tuple[int, int], Tuple[Tuple[int, Fraction], ...]]:
        table: Dict[Tuple[int, int], List[Tuple[int, Fraction]]] = {}
        for (a, b, c), value in sorted(self.entries.items()):
            table.setdefault((a, b), []).append((c, value))
        return MappingProxyType({k: tuple(v) for k, v in table.items()})

    @cached_property
    def by_source(self) -> Mapping[int, Tuple[Tuple[Tuple[int, int], Fraction], ...]]:
        table: Dict[int, List[Tuple[Tuple[int, int], Fraction]]] = {}
        for (a, b, c), value in sorted(self.entries.items()):
            table.setdefault(a, []).append(((b, c), value))
        return MappingProxyType({k: tuple(v) for k, v in table.items()})

    def binary(self, a: int, b: int) -> Tuple[Tuple[int, Fraction], ...]:
        return self.by_inputs.get((a, b), ())

    def unary(self, a: int) -> Tuple[Tuple[Tuple[int, int], Fraction], ...]:
        return self.by_source.get(a, ())

    def coefficient(self, a: int, b: int, c: int) -> Fraction:
        return self.entries.get((a, b, c), ZERO)

    def to_dense(self) -> np.ndarray:
        return _dense_array(self.shape, self.entries)

    @cached_property
    def dense(self) -> np.ndarray:
        return self.to_dense()

    def with_entry(self, key: Tuple[int, int, int], value: ScalarLike) -> "StructureTensor":
        entries = dict(self.entries)
        entries[key] = to_scalar(value)
        return StructureTensor(self.shape, entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StructureTensor):
            return NotImplemented
        return self.shape == other.shape and dict(self.entries) == dict(other.entries)

    def __hash__(self) -> int:
        return hash((self.shape, frozenset(self.entries.items())))

    def first_difference(self, other: "StructureTensor") -> Optional[Tuple[int, int, int]]:
        keys = sorted(set(self.entries) | set(other.entries))
        for key in keys:
            if self.entries.get(key, ZERO) != other.entries.get(key, ZERO):
                return key
        return None


def multiply_sparse(
    mult: StructureTensor, a: Mapping[int, Fraction], b: Mapping[int, Fraction]
) -> Dict[int, Fraction]:
    """Bilinear product of two sparse coordinate vectors through ``mult``."""
    if uses_dense(*mult.shape):
        table = mult.dense
        total = np.full(mult.shape[2], ZERO, dtype=object)
        for i, ca in a.items():
            for j, cb in b.items():
                total = total + (ca * cb) * table[i, j]
        return {int(k): total[k] for k in np.flatnonzero(total)}
    out: Dict[int, Fraction] = {}
    for i, ca in a.items():
        for j, cb in b.items():
            coeff = ca * cb
            for k, value in mult.binary(i, j):
                new = out.get(k, ZERO) + coeff * value
                if new:
                    out[k] = new
                else:
                    out.pop(k, None)
    return out


def comultiply_sparse(comult: StructureTensor, a: Mapping[int, Fraction]) -> Dict[Tuple[int, int], Fraction]:
    out: Dict[Tuple[int, int], Fraction] = {}
    for i, ca in a.items():
        for key, value in comult.unary(i):
            _accumulate(out, key, ca * value)
    return out


def hom_product(mult: StructureTensor, u: SparseTensor, v: SparseTensor) -> SparseTensor:
    """Componentwise product (u^{(1)}v^{(1)}) ⊗ ... ⊗ (u^{(r)}v^{(r)}); no re-association."""
    if u.dims != v.dims:
        raise DimensionMismatchError(f"tensor shapes differ: {u.dims} vs {v.dims}")
    n = mult.shape[2]
    if any(d != n for d in u.dims):
        raise DimensionMismatchError("tensor legs must match the algebra dimension", n, u.dims[0])
    out: SparseCoeffs = {}
    for ku, cu in u.coeffs.items():
        for kv, cv in v.coeffs.items():
            legs = [mult.binary(a, b) for a, b in zip(ku, kv)]
            if any(not leg for leg in legs):
                continue
            base = cu * cv
            for combo in iter_product(*legs):
                coeff = base
                for _, c in combo:
                    coeff *= c
                _accumulate(out, tuple(k for k, _ in combo), coeff)
    return SparseTensor.of(u.dims, out)


def tensor2_hom_product(A, u: SparseTensor, v: SparseTensor) -> TensorElement2:
    """(u^{(1)}v^{(1)}) ⊗ (u^{(2)}v^{(2)}) with A's multiplication."""
    if u.rank != 2 or v.rank != 2:
        raise DimensionMismatchError("tensor2_hom_product needs rank-2 operands", 2, max(u.rank, v.rank))
    _check_algebra_dim(A, u, v)
    return hom_product(A.mult, u, v)


def tensor3_hom_product(A, u: SparseTensor, v: SparseTensor) -> TensorElement3:
    if u.rank != 3 or v.rank != 3:
        raise DimensionMismatchError("tensor3_hom_product needs rank-3 operands", 3, max(u.rank, v.rank))
    _check_algebra_dim(A, u, v)
    return hom_product(A.mult, u, v)


def _check_algebra_dim(A, u: SparseTensor, v: SparseTensor) -> None:
    for t in (u, v):
        if any(d != A.dim for d in t.dims):
            raise DimensionMismatchError("operand does not live in A's tensor powers", A.dim, t.dims[0])


# ---------------------------------------------------------------------------
# Linear systems
# ---------------------------------------------------------------------------


def _integer_rows(matrix: np.ndarray) -> np.ndarray:
    """Scale each row by the lcm of its denominators to get Python ints."""
    rows, cols = matrix.shape
    out = np.empty((rows, cols), dtype=object)
    for r in range(rows):
        scale = reduce(lcm, (Fraction(x).denominator for x in matrix[r]), 1)
        for c in range(cols):
            value = Fraction(matrix[r, c]) * scale
            out[r, c] = value.numerator
    return out


def _bareiss(work: np.ndarray, pivot_limit: int) -> List[int]:
    """In-place fraction-free forward elimination; returns the pivot columns."""
    rows, cols = work.shape
    prev = 1
    r = 0
    pivots: List[int] = []
    for c in range(pivot_limit):
        if r >= rows:
            break
        pivot = next((p for p in range(r, rows) if work[p, c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            work[[r, pivot]] = work[[pivot, r]]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                work[i, j] = (work[r, c] * work[i, j] - work[i, c] * work[r, j]) // prev
            work[i, c] = 0
        prev = work[r, c]
        pivots.append(c)
        r += 1
    return pivots


def solve_linear(M: LinearMap, b: Vector) -> Vector:
    """
    Exact solution of M x = b by fraction-free Gaussian elimination.

    Raises NoSolutionError when inconsistent and NonUniqueSolutionError when
    the kernel of M is nontrivial.
    """
    if b.dim != M.dim_out:
        raise DimensionMismatchError("right-hand side dimension differs", M.dim_out, b.dim)
    n = M.dim_in
    augmented = np.empty((M.dim_out, n + 1), dtype=object)
    augmented[:, :n] = M.matrix
    augmented[:, n] = b.coords
    work = _integer_rows(augmented)
    pivots = _bareiss(work, n)
    rank = len(pivots)
    for r in range(rank, M.dim_out):
        if work[r, n] != 0:
            raise NoSolutionError(f"linear system is inconsistent (row {r})")
    if rank < n:
        raise NonUniqueSolutionError(
            f"linear system has a {n - rank}-dimensional solution space", kernel_dimension=n - rank
        )
    x = [ZERO] * n
    for r in reversed(range(rank)):
        c = pivots[r]
        acc = Fraction(work[r, n])
        for j in range(c + 1, n):
            if work[r, j]:
                acc -= work[r, j] * x[j]
        x[c] = acc / work[r, c]
    return Vector(n, tuple(x))


def matrix_rank(M: LinearMap) -> int:
    if not M.entries:
        return 0
    work = _integer_rows(M.matrix)
    return len(_bareiss(work, M.dim_in))


def nullspace(M: LinearMap) -> List[Vector]:
    """Basis of ker M in reduced echelon form (one vector per free column)."""
    n = M.dim_in
    rows = [[Fraction(x) for x in row] for row in M.matrix] if M.dim_out else []
    pivots: List[int] = []
    r = 0
    for c in range(n):
        pivot = next((p for p in range(r, len(rows)) if rows[p][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = ONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        coords = [ZERO] * n
        coords[f] = ONE
        for row_index, pc in enumerate(pivots):
            coords[pc] = -rows[row_index][f]
        basis.append(Vector(n, tuple(coords)))
    return basis


def identity_tensor_index(dims: Sequence[int]) -> Iterable[Index]:
    """All basis multi-indices of a tensor product, in lexicographic order."""
    return iter_product(*(range(d) for d in dims))
