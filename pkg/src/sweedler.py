"""
Evaluator for formulas written in Sweedler notation.

A formula is a tree of immutable nodes. Every node evaluates to a ``Value``:
a sparse tensor together with the name of the space each leg lives in
(``"H"`` for the Hom-bialgebra, module names for modules). Products are
componentwise and never re-associated; the tree fixes the bracketing.

Typical use::

    ctx = A.context()
    lhs = Mul(Alpha(Var("a")), Mul(Var("b"), Var("c")))
    rhs = Mul(Mul(Var("a"), Var("b")), Alpha(Var("c")))
    apply_sweedler(ctx, lhs, {"a": e0, "b": e1, "c": e1})
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iter_product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .exact_tensor import (
    ONE,
    AlphaPowers,
    Index,
    LinearMap,
    ScalarLike,
    SparseTensor,
    StructureTensor,
    Vector,
    multiply_sparse,
    to_scalar,
)
from .exceptions import DimensionMismatchError, MissingStructureError

logger = logging.getLogger(__name__)

Tree = Union[int, Tuple["Tree", "Tree"]]


# ---------------------------------------------------------------------------
# Evaluation context
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Space:
    """A named carrier with whatever structure maps it has."""

    name: str
    dim: int
    mult: Optional[StructureTensor] = None
    unit: Optional[Vector] = None
    comult: Optional[StructureTensor] = None
    counit: Optional[LinearMap] = None
    alpha: Optional[AlphaPowers] = None
    antipode: Optional[LinearMap] = None
    basis_names: Tuple[str, ...] = ()

    def label(self, index: int) -> str:
        return self.basis_names[index] if index < len(self.basis_names) else f"{self.name}{index}"

    def require(self, attribute: str):
        value = getattr(self, attribute)
        if value is None:
            raise MissingStructureError(f"space {self.name!r} has no {attribute}")
        return value


class SweedlerContext:
    """Spaces and module actions a formula may refer to."""

    def __init__(
        self,
        spaces: Iterable[Space],
        actions: Optional[Mapping[Tuple[str, str], StructureTensor]] = None,
    ):
        self._spaces: Dict[str, Space] = {s.name: s for s in spaces}
        self._actions: Dict[Tuple[str, str], StructureTensor] = dict(actions or {})

    def space(self, name: str) -> Space:
        try:
            return self._spaces[name]
        except KeyError:
            raise MissingStructureError(f"unknown space {name!r}") from None

    def action(self, actor: str, target: str) -> StructureTensor:
        try:
            return self._actions[(actor, target)]
        except KeyError:
            raise MissingStructureError(f"no action of {actor!r} on {target!r}") from None

    def extend(
        self,
        spaces: Iterable[Space] = (),
        actions: Optional[Mapping[Tuple[str, str], StructureTensor]] = None,
    ) -> "SweedlerContext":
        merged_actions = dict(self._actions)
        merged_actions.update(actions or {})
        return SweedlerContext(list(self._spaces.values()) + list(spaces), merged_actions)

    @property
    def space_names(self) -> Tuple[str, ...]:
        return tuple(self._spaces)


@dataclass(frozen=True)
class Value:
    tensor: SparseTensor
    legs: Tuple[str, ...]

    @property
    def rank(self) -> int:
        return len(self.legs)


def basis_tensor(dim: int, index: int) -> SparseTensor:
    return SparseTensor.of((dim,), {(index,): ONE})


# ---------------------------------------------------------------------------
# Leg operators
# ---------------------------------------------------------------------------


class LegOp:
    """Linear operator applied to one leg; may split or drop the leg."""

    def expand(self, ctx: SweedlerContext, space: str, index: int) -> Tuple[Tuple[Index, Fraction], ...]:
        raise NotImplementedError

    def out_legs(self, space: str) -> Tuple[str, ...]:
        return (space,)


@dataclass(frozen=True)
class AlphaOp(LegOp):
    power: int = 1

    def expand(self, ctx, space, index):
        alpha = ctx.space(space).require("alpha")(self.power)
        return tuple(((row,), c) for row, c in alpha.columns[index])


@dataclass(frozen=True)
class AntipodeOp(LegOp):
    def expand(self, ctx, space, index):
        antipode = ctx.space(space).require("antipode")
        return tuple(((row,), c) for row, c in antipode.columns[index])


@dataclass(frozen=True)
class ComultOp(LegOp):
    def expand(self, ctx, space, index):
        return ctx.space(space).require("comult").unary(index)

    def out_legs(self, space):
        return (space, space)


@dataclass(frozen=True)
class CounitOp(LegOp):
    def expand(self, ctx, space, index):
        counit = ctx.space(space).require("counit")
        return tuple(((), c) for _, c in counit.columns[index])

    def out_legs(self, space):
        return ()


@dataclass(frozen=True, eq=False)
class LinearOp(LegOp):
    """An arbitrary linear map, optionally landing in another space."""

    linear_map: LinearMap
    target: Optional[str] = None

    def expand(self, ctx, space, index):
        return tuple(((row,), c) for row, c in self.linear_map.columns[index])

    def out_legs(self, space):
        return (self.target or space,)


def _apply_leg_ops(ctx: SweedlerContext, value: Value, ops: Sequence[Optional[LegOp]]) -> Value:
    if len(ops) != value.rank:
        raise DimensionMismatchError("one operator per leg required", value.rank, len(ops))
    legs: List[str] = []
    for space, op in zip(value.legs, ops):
        legs.extend((space,) if op is None else op.out_legs(space))
    out: Dict[Index, Fraction] = {}
    for key, coeff in value.tensor.coeffs.items():
        choices = []
        for p, op in enumerate(ops):
            if op is None:
                choices.append((((key[p],), ONE),))
            else:
                choices.append(op.expand(ctx, value.legs[p], key[p]))
        for combo in iter_product(*choices):
            c = coeff
            new_key: Tuple[int, ...] = ()
            for part, factor in combo:
                new_key += part
                c *= factor
            new = out.get(new_key, Fraction(0)) + c
            if new:
                out[new_key] = new
            else:
                out.pop(new_key, None)
    dims = tuple(ctx.space(s).dim for s in legs)
    return Value(SparseTensor.of(dims, out), tuple(legs))


# ---------------------------------------------------------------------------
# Expression nodes
# ---------------------------------------------------------------------------


class SweedlerExpression:
    def evaluate(self, ctx: SweedlerContext, inputs: Mapping[str, Value]) -> Value:
        raise NotImplementedError


@dataclass(frozen=True)
class Var(SweedlerExpression):
    """A named input; ``legs`` names the space of each tensor leg."""

    name: str
    legs: Tuple[str, ...] = ("H",)

    def evaluate(self, ctx, inputs):
        try:
            value = inputs[self.name]
        except KeyError:
            raise MissingStructureError(f"formula input {self.name!r} not supplied") from None
        if value.legs != self.legs:
            raise DimensionMismatchError(f"input {self.name!r} has legs {value.legs}, expected {self.legs}")
        return value


@dataclass(frozen=True, eq=False)
class Const(SweedlerExpression):
    tensor: SparseTensor
    legs: Tuple[str, ...] = ("H", "H")

    def evaluate(self, ctx, inputs):
        expected = tuple(ctx.space(s).dim for s in self.legs)
        if self.tensor.dims != expected:
            raise DimensionMismatchError(f"constant of shape {self.tensor.dims} on legs {self.legs}")
        return Value(self.tensor, self.legs)


@dataclass(frozen=True)
class Unit(SweedlerExpression):
    """η(1) in the given space."""

    space: str = "H"

    def evaluate(self, ctx, inputs):
        sp = ctx.space(self.space)
        unit = sp.require("unit")
        return Value(SparseTensor.of((sp.dim,), {(i,): c for i, c in unit.sparse().items()}), (self.space,))


@dataclass(frozen=True)
class Tensor(SweedlerExpression):
    """Outer product of the parts, legs concatenated left to right."""

    parts: Tuple[SweedlerExpression, ...]

    def evaluate(self, ctx, inputs):
        values = [p.evaluate(ctx, inputs) for p in self.parts]
        tensor = values[0].tensor
        legs = values[0].legs
        for v in values[1:]:
            tensor = tensor.tensor(v.tensor)
            legs = legs + v.legs
        return Value(tensor, legs)


def _leg_layout(left_rank: int, right_rank: int, left_legs, right_legs) -> Tuple[Tuple[int, ...], Tuple[int, ...], int]:
    left_legs = tuple(range(left_rank)) if left_legs is None else tuple(left_legs)
    right_legs = tuple(range(right_rank)) if right_legs is None else tuple(right_legs)
    if len(left_legs) != left_rank or len(right_legs) != right_rank:
        raise DimensionMismatchError("leg placement does not match operand rank")
    used = set(left_legs) | set(right_legs)
    rank = max(used) + 1 if used else 0
    if used != set(range(rank)) or len(set(left_legs)) != left_rank or len(set(right_legs)) != right_rank:
        raise DimensionMismatchError(f"invalid leg placement {left_legs} / {right_legs}")
    return left_legs, right_legs, rank


def _combine(
    ctx: SweedlerContext,
    left: Value,
    right: Value,
    left_legs,
    right_legs,
    acting: bool,
) -> Value:
    left_legs, right_legs, rank = _leg_layout(left.rank, right.rank, left_legs, right_legs)
    left_at = {p: q for q, p in enumerate(left_legs)}
    right_at = {p: q for q, p in enumerate(right_legs)}

    legs: List[str] = []
    tables = []
    for p in range(rank):
        lq, rq = left_at.get(p), right_at.get(p)
        if lq is not None and rq is not None:
            ls, rs = left.legs[lq], right.legs[rq]
            if acting:
                tables.append(ctx.action(ls, rs))
                legs.append(rs)
            else:
                if ls != rs:
                    raise DimensionMismatchError(f"cannot multiply leg in {ls!r} by leg in {rs!r}")
                tables.append(ctx.space(ls).require("mult"))
                legs.append(ls)
        else:
            if acting and rq is None:
                raise DimensionMismatchError("an acting leg needs a target leg")
            legs.append(left.legs[lq] if lq is not None else right.legs[rq])
            tables.append(None)

    out: Dict[Index, Fraction] = {}
    for lk, lc in left.tensor.coeffs.items():
        for rk, rc in right.tensor.coeffs.items():
            choices = []
            dead = False
            for p in range(rank):
                lq, rq = left_at.get(p), right_at.get(p)
                if tables[p] is None:
                    idx = lk[lq] if lq is not None else rk[rq]
                    choices.append(((idx, ONE),))
                else:
                    entries = tables[p].binary(lk[lq], rk[rq])
                    if not entries:
                        dead = True
                        break
                    choices.append(entries)
            if dead:
                continue
            base = lc * rc
            for combo in iter_product(*choices):
                c = base
                for _, factor in combo:
                    c *= factor
                key = tuple(i for i, _ in combo)
                new = out.get(key, Fraction(0)) + c
                if new:
                    out[key] = new
                else:
                    out.pop(key, None)
    dims = tuple(ctx.space(s).dim for s in legs)
    return Value(SparseTensor.of(dims, out), tuple(legs))


@dataclass(frozen=True)
class Mul(SweedlerExpression):
    """
    Componentwise Hom-product ``left · right``.

    ``left_legs``/``right_legs`` place the operands' legs into the result;
    a result leg fed by only one operand is copied unchanged. With both
    omitted the operands must have the same rank.
    """

    left: SweedlerExpression
    right: SweedlerExpression
    left_legs: Optional[Tuple[int, ...]] = None
    right_legs: Optional[Tuple[int, ...]] = None

    def evaluate(self, ctx, inputs):
        return _combine(ctx, self.left.evaluate(ctx, inputs), self.right.evaluate(ctx, inputs),
                        self.left_legs, self.right_legs, acting=False)


@dataclass(frozen=True)
class Act(SweedlerExpression):
    """Componentwise module action ``actor · target`` (result legs live in the target spaces)."""

    actor: SweedlerExpression
    target: SweedlerExpression
    actor_legs: Optional[Tuple[int, ...]] = None
    target_legs: Optional[Tuple[int, ...]] = None

    def evaluate(self, ctx, inputs):
        return _combine(ctx, self.actor.evaluate(ctx, inputs), self.target.evaluate(ctx, inputs),
                        self.actor_legs, self.target_legs, acting=True)


@dataclass(frozen=True)
class OnLegs(SweedlerExpression):
    """(f_1 ⊗ ... ⊗ f_r)(expr); ``None`` is the identity on that leg."""

    expr: SweedlerExpression
    ops: Tuple[Optional[LegOp], ...]

    def evaluate(self, ctx, inputs):
        return _apply_leg_ops(ctx, self.expr.evaluate(ctx, inputs), self.ops)


@dataclass(frozen=True)
class Alpha(SweedlerExpression):
    """α^power applied on every leg."""

    expr: SweedlerExpression
    power: int = 1

    def evaluate(self, ctx, inputs):
        value = self.expr.evaluate(ctx, inputs)
        if self.power == 0:
            return value
        return _apply_leg_ops(ctx, value, (AlphaOp(self.power),) * value.rank)


@dataclass(frozen=True)
class Antipode(SweedlerExpression):
    expr: SweedlerExpression

    def evaluate(self, ctx, inputs):
        value = self.expr.evaluate(ctx, inputs)
        return _apply_leg_ops(ctx, value, (AntipodeOp(),) * value.rank)


def _single_leg_ops(value: Value, leg: int, op: LegOp) -> Tuple[Optional[LegOp], ...]:
    if not 0 <= leg < value.rank:
        raise DimensionMismatchError(f"leg {leg} outside rank {value.rank}")
    return tuple(op if p == leg else None for p in range(value.rank))


@dataclass(frozen=True)
class Comult(SweedlerExpression):
    """Δ on one leg, which becomes two adjacent legs."""

    expr: SweedlerExpression
    leg: int = 0

    def evaluate(self, ctx, inputs):
        value = self.expr.evaluate(ctx, inputs)
        return _apply_leg_ops(ctx, value, _single_leg_ops(value, self.leg, ComultOp()))


@dataclass(frozen=True)
class Counit(SweedlerExpression):
    """ε on one leg, which disappears."""

    expr: SweedlerExpression
    leg: int = 0

    def evaluate(self, ctx, inputs):
        value = self.expr.evaluate(ctx, inputs)
        return _apply_leg_ops(ctx, value, _single_leg_ops(value, self.leg, CounitOp()))


@dataclass(frozen=True)
class Permute(SweedlerExpression):
    """Result leg p is operand leg order[p]; the flip τ is ``Permute(e, (1, 0))``."""

    expr: SweedlerExpression
    order: Tuple[int, ...]

    def evaluate(self, ctx, inputs):
        value = self.expr.evaluate(ctx, inputs)
        return Value(value.tensor.permute(self.order), tuple(value.legs[o] for o in self.order))


def Flip(expr: SweedlerExpression) -> Permute:
    return Permute(expr, (1, 0))


@dataclass(frozen=True)
class Scale(SweedlerExpression):
    expr: SweedlerExpression
    factor: Fraction = ONE

    def evaluate(self, ctx, inputs):
        value = self.expr.evaluate(ctx, inputs)
        return Value(value.tensor.scale(to_scalar(self.factor)), value.legs)


@dataclass(frozen=True)
class Add(SweedlerExpression):
    left: SweedlerExpression
    right: SweedlerExpression

    def evaluate(self, ctx, inputs):
        lv, rv = self.left.evaluate(ctx, inputs), self.right.evaluate(ctx, inputs)
        if lv.legs != rv.legs:
            raise DimensionMismatchError(f"cannot add tensors on legs {lv.legs} and {rv.legs}")
        return Value(lv.tensor + rv.tensor, lv.legs)


def _tree_leaves(tree: Tree) -> List[int]:
    if isinstance(tree, int):
        return [tree]
    left, right = tree
    return _tree_leaves(left) + _tree_leaves(right)


@dataclass(frozen=True)
class Product(SweedlerExpression):
    """
    Multiply all legs of ``expr`` into a single element along ``tree``.

    ``tree`` is a binary tree of leg indices, e.g. ``((0, (1, (2, 3))), 4)``;
    every leg appears exactly once and all legs share one space.
    """

    expr: SweedlerExpression
    tree: Tree

    def evaluate(self, ctx, inputs):
        value = self.expr.evaluate(ctx, inputs)
        leaves = _tree_leaves(self.tree)
        if sorted(leaves) != list(range(value.rank)):
            raise DimensionMismatchError(f"bracketing {self.tree} does not cover {value.rank} legs")
        spaces = set(value.legs)
        if len(spaces) != 1:
            raise DimensionMismatchError(f"cannot multiply legs from {sorted(spaces)}")
        space = ctx.space(value.legs[0])
        mult = space.require("mult")

        def walk(tree: Tree, key: Index) -> Dict[int, Fraction]:
            if isinstance(tree, int):
                return {key[tree]: ONE}
            return multiply_sparse(mult, walk(tree[0], key), walk(tree[1], key))

        out: Dict[Index, Fraction] = {}
        for key, coeff in value.tensor.coeffs.items():
            for k, c in walk(self.tree, key).items():
                new = out.get((k,), Fraction(0)) + coeff * c
                if new:
                    out[(k,)] = new
                else:
                    out.pop((k,), None)
        return Value(SparseTensor.of((space.dim,), out), (space.name,))


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


InputLike = Union[Value, SparseTensor, Vector, int]


def as_value(ctx: SweedlerContext, item: InputLike, legs: Sequence[str] = ("H",)) -> Value:
    """Wrap a tensor, vector or basis index as a Value on the given legs."""
    legs = tuple(legs)
    if isinstance(item, Value):
        return item
    if isinstance(item, bool):
        raise TypeError("bool is not a formula input")
    if isinstance(item, int):
        if len(legs) != 1:
            raise DimensionMismatchError("a basis index names a single leg", 1, len(legs))
        return Value(basis_tensor(ctx.space(legs[0]).dim, item), legs)
    if isinstance(item, Vector):
        item = item.as_tensor()
    expected = tuple(ctx.space(s).dim for s in legs)
    if item.dims != expected:
        raise DimensionMismatchError(f"input of shape {item.dims} does not fit legs {legs}")
    return Value(item, legs)


def evaluate(
    ctx: SweedlerContext, expr: SweedlerExpression, inputs: Optional[Mapping[str, Value]] = None
) -> Value:
    return expr.evaluate(ctx, inputs or {})


def apply_sweedler(
    ctx: SweedlerContext,
    expr: SweedlerExpression,
    inputs: Optional[Mapping[str, InputLike]] = None,
    legs: Optional[Mapping[str, Sequence[str]]] = None,
) -> SparseTensor:
    """
    Evaluate ``expr`` on the given inputs and return the resulting tensor.

    Inputs may be Values, sparse tensors, vectors or basis indices; ``legs``
    gives the leg spaces of non-Value inputs (default: every leg in ``"H"``).
    """
    legs = legs or {}
    values = {}
    for name, item in (inputs or {}).items():
        default = ("H",) * item.rank if isinstance(item, SparseTensor) else ("H",)
        values[name] = as_value(ctx, item, legs.get(name, default))
    return expr.evaluate(ctx, values).tensor


def scalar_of(tensor: SparseTensor) -> Fraction:
    """The coefficient of a rank-0 tensor."""
    if tensor.rank != 0:
        raise DimensionMismatchError("not a scalar", 0, tensor.rank)
    return tensor.coefficient(())


# ---------------------------------------------------------------------------
# Bracketings
# ---------------------------------------------------------------------------


def enumerate_bracketings(n: int, first: Optional[Tree] = None) -> List[Tree]:
    """
    Every binary parenthesisation of the word 0 1 ... n-1.

    Order is deterministic (left split size ascending); ``first`` is moved to
    the front when given.
    """
    if n < 1:
        raise ValueError("a word needs at least one factor")

    def build(lo: int, hi: int) -> List[Tree]:
        if hi - lo == 1:
            return [lo]
        trees: List[Tree] = []
        for split in range(lo + 1, hi):
            for left in build(lo, split):
                for right in build(split, hi):
                    trees.append((left, right))
        return trees

    trees = build(0, n)
    if first is not None:
        if first not in trees:
            raise ValueError(f"{first} is not a bracketing of {n} factors")
        trees.remove(first)
        trees.insert(0, first)
    return trees


def format_bracketing(tree: Tree, names: Optional[Sequence[str]] = None) -> str:
    if isinstance(tree, int):
        return names[tree] if names else f"x{tree}"
    return f"({format_bracketing(tree[0], names)} {format_bracketing(tree[1], names)})"
