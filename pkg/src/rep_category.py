"""
Representation categories Rep^{i,j}(H) on concrete finite-dimensional modules.

Tensor products carry the action h·(m ⊗ n) = α^i(h₁)·m ⊗ α^j(h₂)·n. The
constraint maps are exact LinearMaps on row-major flat bases, so every
coherence diagram is checked by composing both paths and comparing entries.

Exponents depend on the flavor through RepConfig.left_shift (p) and
right_shift (q):

    a_{M,N,P} = α_M^{-p} ⊗ id_N ⊗ α_P^{q}
    l_M = α_M^{-q},  r_M = α_M^{-p}
    c_{M,N}(m ⊗ n) = α^i(R²)·α_N^{i-j-1}(n) ⊗ α^j(R¹)·α_M^{j-i-1}(m)
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import cached_property
from itertools import product as iter_product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config_manager import get_settings
from .exact_tensor import ONE, LinearMap, SparseTensor, nullspace
from .exceptions import FlavorMismatchError, PreconditionError, TheoremCheckFailed
from .hom_structures import (
    HomBialgebraData,
    HomModuleData,
    ModuleBase,
    action_from_maps,
    check_hom_module,
    check_result,
    structure_difference,
)
from .models import CheckResult, Flavor, RepConfig, RMatrixSystem, VerificationReport
from .quasitriangular import RMatrixData, twist_rmatrix
from .twist_engine import TwistData, build_twisted_bialgebra

logger = logging.getLogger(__name__)

MAX_COMMUTANT_MORPHISMS = 3


# ---------------------------------------------------------------------------
# Modules
# ---------------------------------------------------------------------------


class TensorModule(ModuleBase):
    """M ⊗ N in Rep^{i,j}(H); the action is built on first use."""

    def __init__(self, config: RepConfig, left: ModuleBase, right: ModuleBase):
        parent = left.parent
        if parent.flavor is not config.flavor:
            raise FlavorMismatchError(
                f"{config.label()} needs a {config.flavor.value} Hom-bialgebra, got {parent.flavor.value}",
                offending=parent.flavor.value,
            )
        if right.parent is not parent and structure_difference(parent, right.parent) is not None:
            raise PreconditionError(
                f"{left.name} and {right.name} are modules over different Hom-bialgebras",
                offending=(parent.name, right.parent.name),
            )
        self.config = config
        self.factors = (left, right)
        self.parent = parent
        self.name = f"({left.name}⊗{right.name})"

    @property
    def dim(self) -> int:
        left, right = self.factors
        return left.dim * right.dim

    @cached_property
    def alpha(self) -> LinearMap:
        left, right = self.factors
        return left.alpha.kron(right.alpha)

    def alpha_power(self, k: int) -> LinearMap:
        # (α_M ⊗ α_N)^k factor by factor, so negative powers never invert the product
        left, right = self.factors
        return left.alpha_power(k).kron(right.alpha_power(k))

    @cached_property
    def action_maps(self) -> Tuple[LinearMap, ...]:
        left, right = self.factors
        H = self.parent
        shifts = (H.alpha_power(self.config.i), H.alpha_power(self.config.j))
        maps = []
        for h in range(H.dim):
            delta = SparseTensor((H.dim, H.dim), dict(H.comult.unary(h))).apply_legwise(shifts)
            maps.append(LinearMap.combination(
                self.dim, self.dim,
                ((c, left.action_maps[a].kron(right.action_maps[b])) for (a, b), c in delta.coeffs.items()),
            ))
        return tuple(maps)

    @cached_property
    def action(self):
        return action_from_maps(self.action_maps, self.dim)


def tensor_modules(cfg: RepConfig, M: ModuleBase, N: ModuleBase, verify: bool = True) -> TensorModule:
    """M ⊗ N in Rep^{i,j}; with ``verify`` the product must pass the Hom-module axioms."""
    product = TensorModule(cfg, M, N)
    if verify:
        report = check_hom_module(product)
        if not report.ok:
            raise TheoremCheckFailed(f"{product.name} is not a Hom-module in {cfg.label()}", report)
    return product


def trivial_module(H: HomBialgebraData) -> HomModuleData:
    """k with h·λ = ε(h)λ and α_k = id."""
    counit = H.counit.columns
    maps = [LinearMap(1, 1, {(0, 0): dict(counit[h]).get(0, 0)}) for h in range(H.dim)]
    return HomModuleData.from_maps(H, maps, LinearMap.identity(1), name="k", names=("1",))


def regular_module(H: HomBialgebraData) -> HomModuleData:
    """H acting on itself by the Hom-multiplication, α_M = α."""
    return HomModuleData(H.dim, H.mult, H.alpha, H, name="H_reg", names=tuple(H.basis_names))


def _direct_sum(f: LinearMap, g: LinearMap) -> LinearMap:
    entries = dict(f.entries)
    shift = f.dim_in
    entries.update({(r + shift, c + shift): v for (r, c), v in g.entries.items()})
    return LinearMap(f.dim_in + g.dim_in, f.dim_out + g.dim_out, entries)


def _unipotent(dim: int, seed: int, bound: int) -> LinearMap:
    """I plus one seeded entry above the diagonal in every column but the first."""
    rng = np.random.default_rng(seed)
    entries = {(c, c): ONE for c in range(dim)}
    for col in range(1, dim):
        row = int(rng.integers(0, col))
        value = int(rng.integers(1, bound + 1)) * int(rng.choice([-1, 1]))
        entries[(row, col)] = value
    return LinearMap(dim, dim, entries)


def random_module(H: HomBialgebraData, seed: int = 0, bound: int = 3) -> HomModuleData:
    """
    (regular ⊕ trivial) in a seeded random basis.

    The change of basis is unipotent with integer entries in [-bound, bound],
    so the conjugated action stays exact and small.
    """
    regular, trivial = regular_module(H), trivial_module(H)
    P = _unipotent(regular.dim + 1, seed, bound)
    P_inv = P.inverse()
    maps = [P @ _direct_sum(a, b) @ P_inv for a, b in zip(regular.action_maps, trivial.action_maps)]
    alpha = P @ _direct_sum(regular.alpha, trivial.alpha) @ P_inv
    logger.debug("Random module over %s with seed %d", H.name, seed)
    return HomModuleData.from_maps(H, maps, alpha, name=f"rand{seed}")


def default_modules(H: HomBialgebraData, kinds: Sequence[str] = None, seed: int = None) -> List[HomModuleData]:
    """The configured test module set, in the order given."""
    settings = get_settings().rep_category
    kinds = list(kinds or settings.module_set)
    seed = settings.seed if seed is None else seed
    builders = {
        "trivial": lambda: trivial_module(H),
        "regular": lambda: regular_module(H),
        "random": lambda: random_module(H, seed, settings.random_module_entry_bound),
    }
    return [builders[kind]() for kind in kinds]


@dataclass(frozen=True)
class ModuleMorphism:
    """A morphism used for naturality squares; ``kind`` is alpha, scalar, commutant or cross."""

    name: str
    map: LinearMap
    kind: str


def _intertwiners(X: ModuleBase, Z: ModuleBase) -> List[LinearMap]:
    """Basis of {f : X -> Z : fρ_X(h) = ρ_Z(h)f for all h, fα_X = α_Zf} by solving for vec(f)."""
    dx, dz = X.dim, Z.dim
    generators = list(zip(X.action_maps, Z.action_maps)) + [(X.alpha, Z.alpha)]
    rows = len(generators) * dz * dx

    def column(unknown: int) -> Dict[int, object]:
        r, c = divmod(unknown, dx)
        out: Dict[int, object] = {}
        for g, (rho_x, rho_z) in enumerate(generators):
            base = g * dz * dx
            # (E_rc ρ_X)_{r,j} = (ρ_X)_{c,j}
            for (row, col), v in rho_x.entries.items():
                if row == c:
                    key = base + r * dx + col
                    out[key] = out.get(key, 0) + v
            # (ρ_Z E_rc)_{i,c} = (ρ_Z)_{i,r}
            for (row, col), v in rho_z.entries.items():
                if col == r:
                    key = base + row * dx + c
                    out[key] = out.get(key, 0) - v
        return out

    system = LinearMap.from_function(dz * dx, rows, column)
    basis = []
    for vector in nullspace(system):
        entries = {divmod(k, dx): v for k, v in vector.sparse().items()}
        basis.append(LinearMap(dx, dz, entries))
    return basis


def module_morphisms(M: ModuleBase) -> List[ModuleMorphism]:
    """α_M, a scalar multiple of the identity and up to three non-scalar commutant elements."""
    morphisms = [
        ModuleMorphism("alpha", M.alpha, "alpha"),
        ModuleMorphism("2·id", LinearMap.scalar(M.dim, 2), "scalar"),
    ]
    identity = LinearMap.identity(M.dim)
    found = 0
    for X in _intertwiners(M, M):
        if found == MAX_COMMUTANT_MORPHISMS:
            break
        scalar = X.entry(0, 0)
        if X == identity.scale(scalar):
            continue
        kind = "projection" if X @ X == X else "commutant"
        morphisms.append(ModuleMorphism(f"{kind}{found}", X, "commutant"))
        found += 1
    return morphisms


def module_maps(X: ModuleBase, Z: ModuleBase) -> List[ModuleMorphism]:
    """Up to three basis morphisms X -> Z of Hom-modules, e.g. ε: H_reg -> k."""
    maps = _intertwiners(X, Z)[:MAX_COMMUTANT_MORPHISMS]
    return [ModuleMorphism(f"{X.name}->{Z.name}#{n}", f, "cross") for n, f in enumerate(maps)]


# ---------------------------------------------------------------------------
# Constraint maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitConstraints:
    l: LinearMap
    l_inv: LinearMap
    r: LinearMap
    r_inv: LinearMap


def unit_constraints(cfg: RepConfig, M: ModuleBase) -> UnitConstraints:
    """l_M(λ ⊗ m) = λα_M^{-q}(m) and r_M(m ⊗ λ) = λα_M^{-p}(m); k ⊗ M and M ⊗ k share M's flat basis."""
    p, q = cfg.left_shift, cfg.right_shift
    return UnitConstraints(
        l=M.alpha_power(-q), l_inv=M.alpha_power(q),
        r=M.alpha_power(-p), r_inv=M.alpha_power(p),
    )


def associator(cfg: RepConfig, M: ModuleBase, N: ModuleBase, P: ModuleBase) -> Tuple[LinearMap, LinearMap]:
    """a_{M,N,P}: (M ⊗ N) ⊗ P -> M ⊗ (N ⊗ P) and its inverse."""
    p, q = cfg.left_shift, cfg.right_shift
    middle = LinearMap.identity(N.dim)
    a = M.alpha_power(-p).kron(middle).kron(P.alpha_power(q))
    a_inv = M.alpha_power(p).kron(middle).kron(P.alpha_power(-q))
    return a, a_inv


def _require_rmatrix_flavor(cfg: RepConfig, Rm: RMatrixData) -> None:
    if Rm.system.flavor is not cfg.flavor:
        raise FlavorMismatchError(
            f"{Rm.system.value} R-matrix cannot braid {cfg.label()}", offending=Rm.system.value
        )


def _half_braid(cfg: RepConfig, element: SparseTensor, X: ModuleBase, Y: ModuleBase) -> LinearMap:
    """Σ e_{ab}·ρ_X(α^i e_a)α_X^{i-j-1} ⊗ ρ_Y(α^j e_b)α_Y^{j-i-1}, then precomposed with Y ⊗ X -> X ⊗ Y."""
    H = X.parent
    alpha_i, alpha_j = H.alpha_power(cfg.i), H.alpha_power(cfg.j)
    shift_x = X.alpha_power(cfg.i - cfg.j - 1)
    shift_y = Y.alpha_power(cfg.j - cfg.i - 1)
    columns_i, columns_j = alpha_i.columns, alpha_j.columns
    body = LinearMap.combination(
        X.dim * Y.dim, X.dim * Y.dim,
        (
            (c, (X.act(dict(columns_i[a])) @ shift_x).kron(Y.act(dict(columns_j[b])) @ shift_y))
            for (a, b), c in element.coeffs.items()
        ),
    )
    return body @ LinearMap.swap(Y.dim, X.dim)


def braiding(cfg: RepConfig, Rm: RMatrixData, M: ModuleBase, N: ModuleBase) -> Tuple[LinearMap, LinearMap]:
    """c_{M,N}: M ⊗ N -> N ⊗ M and c′_{M,N}: N ⊗ M -> M ⊗ N built from R^{-1}."""
    _require_rmatrix_flavor(cfg, Rm)
    c = _half_braid(cfg, Rm.R.flip(), N, M)
    c_inv = _half_braid(cfg, Rm.R_inv, M, N)
    return c, c_inv


# ---------------------------------------------------------------------------
# Comparisons
# ---------------------------------------------------------------------------


def compare_maps(check_id: str, anchor: str, lhs: LinearMap, rhs: LinearMap, where: str,
                 informational: bool = False) -> CheckResult:
    """One report row for lhs == rhs; the counterexample is the first differing (row, column)."""
    if lhs == rhs:
        return check_result(check_id, anchor, True, detail=where, informational=informational)
    keys = sorted(set(lhs.entries) | set(rhs.entries))
    first = next(
        (k for k in keys if lhs.entries.get(k, 0) != rhs.entries.get(k, 0)),
        (lhs.dim_out, lhs.dim_in),
    )
    return check_result(check_id, anchor, False, counterexample=list(first), detail=where, informational=informational)


def check_linearity(check_id: str, anchor: str, f: LinearMap, source: ModuleBase, target: ModuleBase,
                    where: str) -> CheckResult:
    """f∘ρ_source(h) = ρ_target(h)∘f for every basis vector h."""
    for h, (rho_s, rho_t) in enumerate(zip(source.action_maps, target.action_maps)):
        result = compare_maps(check_id, anchor, f @ rho_s, rho_t @ f, where)
        if not result.passed:
            return result.model_copy(update={"counterexample": [source.parent.label(h)] + result.counterexample})
    return check_result(check_id, anchor, True, detail=where)


def check_two_sided_inverse(check_id: str, f: LinearMap, g: LinearMap, where: str) -> CheckResult:
    """g∘f = id and f∘g = id."""
    left = compare_maps(check_id, "f⁻¹∘f = id", g @ f, LinearMap.identity(f.dim_in), where)
    if not left.passed:
        return left
    return compare_maps(check_id, "f∘f⁻¹ = id", f @ g, LinearMap.identity(f.dim_out), where)


def _names(*modules: ModuleBase) -> str:
    return "(" + ", ".join(m.name for m in modules) + ")"


def module_tuples(modules: Sequence[ModuleBase], arity: int, strategy: str = "cyclic") -> List[Tuple[ModuleBase, ...]]:
    """Tuples to test: every tuple, or the diagonal plus the rotations of the module list."""
    if strategy == "all" or arity == 1:
        return list(iter_product(modules, repeat=arity))
    k = len(modules)
    candidates = [(m,) * arity for m in modules]
    candidates += [tuple(modules[(s + t) % k] for t in range(arity)) for s in range(k)]
    seen, out = set(), []
    for tup in candidates:
        key = tuple(id(m) for m in tup)
        if key not in seen:
            seen.add(key)
            out.append(tup)
    return out


class TensorCache:
    """Memoised tensor products for one category; entries keep their factors alive."""

    def __init__(self, cfg: RepConfig):
        self.cfg = cfg
        self._products: Dict[Tuple[int, int], TensorModule] = {}

    def __call__(self, left: ModuleBase, right: ModuleBase) -> TensorModule:
        key = (id(left), id(right))
        product = self._products.get(key)
        if product is None:
            product = self._products[key] = TensorModule(self.cfg, left, right)
        return product

    def triple(self, M: ModuleBase, N: ModuleBase, P: ModuleBase) -> Tuple[TensorModule, TensorModule]:
        """((M ⊗ N) ⊗ P, M ⊗ (N ⊗ P))."""
        return self(self(M, N), P), self(M, self(N, P))


# ---------------------------------------------------------------------------
# Coherence
# ---------------------------------------------------------------------------


def check_tensor_modules(cfg: RepConfig, pairs: Sequence[Tuple[ModuleBase, ModuleBase]],
                         tensor: Optional[TensorCache] = None) -> VerificationReport:
    tensor = tensor or TensorCache(cfg)
    report = VerificationReport(subject=f"tensor modules in {cfg.label()}")
    for M, N in pairs:
        product = tensor(M, N)
        axioms = check_hom_module(product)
        failures = axioms.failures()
        report.add(check_result(
            "rep.tensor_module", "M ⊗ N is a Hom-module", not failures,
            counterexample=[failures[0].check_id] + list(failures[0].counterexample) if failures else None,
            detail=product.name,
        ))
    return report


def check_unit_constraints(cfg: RepConfig, modules: Sequence[ModuleBase],
                           tensor: Optional[TensorCache] = None) -> VerificationReport:
    """l and r are H-linear and invertible on every module."""
    tensor = tensor or TensorCache(cfg)
    report = VerificationReport(subject=f"unit constraints in {cfg.label()}")
    for M in modules:
        k = trivial_module(M.parent)
        u = unit_constraints(cfg, M)
        where = _names(M)
        report.add(check_linearity("rep.left_unit.linear", "l(h·(λ ⊗ m)) = h·l(λ ⊗ m)", u.l, tensor(k, M), M, where))
        report.add(check_linearity("rep.right_unit.linear", "r(h·(m ⊗ λ)) = h·r(m ⊗ λ)", u.r, tensor(M, k), M, where))
        report.add(check_two_sided_inverse("rep.left_unit.invertible", u.l, u.l_inv, where))
        report.add(check_two_sided_inverse("rep.right_unit.invertible", u.r, u.r_inv, where))
    return report


def check_associator(cfg: RepConfig, triples: Sequence[Tuple[ModuleBase, ...]],
                     tensor: Optional[TensorCache] = None) -> VerificationReport:
    tensor = tensor or TensorCache(cfg)
    report = VerificationReport(subject=f"associator in {cfg.label()}")
    for M, N, P in triples:
        a, a_inv = associator(cfg, M, N, P)
        left, right = tensor.triple(M, N, P)
        where = _names(M, N, P)
        report.add(check_linearity("rep.associator.linear", "a(h·x) = h·a(x)", a, left, right, where))
        report.add(check_two_sided_inverse("rep.associator.invertible", a, a_inv, where))
    return report


def check_pentagon(cfg: RepConfig, quadruples: Sequence[Tuple[ModuleBase, ...]],
                   tensor: Optional[TensorCache] = None) -> VerificationReport:
    """a_{M,N,P⊗Q}∘a_{M⊗N,P,Q} = (id ⊗ a_{N,P,Q})∘a_{M,N⊗P,Q}∘(a_{M,N,P} ⊗ id)."""
    tensor = tensor or TensorCache(cfg)
    report = VerificationReport(subject=f"pentagon in {cfg.label()}")
    for M, N, P, Q in quadruples:
        lhs = associator(cfg, M, N, tensor(P, Q))[0] @ associator(cfg, tensor(M, N), P, Q)[0]
        rhs = (
            LinearMap.identity(M.dim).kron(associator(cfg, N, P, Q)[0])
            @ associator(cfg, M, tensor(N, P), Q)[0]
            @ associator(cfg, M, N, P)[0].kron(LinearMap.identity(Q.dim))
        )
        report.add(compare_maps("rep.pentagon", "a∘a = (id ⊗ a)∘a∘(a ⊗ id)", lhs, rhs, _names(M, N, P, Q)))
    return report


def check_triangle(cfg: RepConfig, pairs: Sequence[Tuple[ModuleBase, ModuleBase]]) -> VerificationReport:
    """(id_M ⊗ l_N)∘a_{M,k,N} = r_M ⊗ id_N."""
    report = VerificationReport(subject=f"triangle in {cfg.label()}")
    for M, N in pairs:
        k = trivial_module(M.parent)
        lhs = LinearMap.identity(M.dim).kron(unit_constraints(cfg, N).l) @ associator(cfg, M, k, N)[0]
        rhs = unit_constraints(cfg, M).r.kron(LinearMap.identity(N.dim))
        report.add(compare_maps("rep.triangle", "(id ⊗ l)∘a = r ⊗ id", lhs, rhs, _names(M, N)))
    return report


def check_braiding(cfg: RepConfig, Rm: RMatrixData, pairs: Sequence[Tuple[ModuleBase, ModuleBase]],
                   tensor: Optional[TensorCache] = None) -> VerificationReport:
    """c is H-linear and c′ is its two-sided inverse."""
    tensor = tensor or TensorCache(cfg)
    report = VerificationReport(subject=f"braiding by {Rm.name or 'R'} in {cfg.label()}")
    for M, N in pairs:
        c, c_inv = braiding(cfg, Rm, M, N)
        where = _names(M, N)
        report.add(check_linearity("rep.braiding.linear", "c(h·(m ⊗ n)) = h·c(m ⊗ n)", c, tensor(M, N), tensor(N, M), where))
        report.add(check_two_sided_inverse("rep.braiding.invertible", c, c_inv, where))
    return report


def check_hexagons(cfg: RepConfig, Rm: RMatrixData, triples: Sequence[Tuple[ModuleBase, ...]],
                   tensor: Optional[TensorCache] = None) -> VerificationReport:
    tensor = tensor or TensorCache(cfg)
    report = VerificationReport(subject=f"hexagons for {Rm.name or 'R'} in {cfg.label()}")

    def a(X, Y, Z):
        return associator(cfg, X, Y, Z)

    def c(X, Y):
        return braiding(cfg, Rm, X, Y)[0]

    def ident(X):
        return LinearMap.identity(X.dim)

    for M, N, P in triples:
        where = _names(M, N, P)
        lhs = a(N, P, M)[0] @ c(M, tensor(N, P)) @ a(M, N, P)[0]
        rhs = ident(N).kron(c(M, P)) @ a(N, M, P)[0] @ c(M, N).kron(ident(P))
        report.add(compare_maps(
            "rep.hexagon.first", "a∘c_{M,N⊗P}∘a = (id ⊗ c)∘a∘(c ⊗ id)", lhs, rhs, where,
        ))
        lhs = a(P, M, N)[1] @ c(tensor(M, N), P) @ a(M, N, P)[1]
        rhs = c(M, P).kron(ident(N)) @ a(M, P, N)[1] @ ident(M).kron(c(N, P))
        report.add(compare_maps(
            "rep.hexagon.second", "a⁻¹∘c_{M⊗N,P}∘a⁻¹ = (c ⊗ id)∘a⁻¹∘(id ⊗ c)", lhs, rhs, where,
        ))
    return report


def _naturality_squares(report: VerificationReport, cfg: RepConfig, Rm: Optional[RMatrixData], f: LinearMap,
                        X: ModuleBase, Z: ModuleBase, Y: ModuleBase, where: str) -> None:
    """Squares of a, l, r and c for a module morphism f: X -> Z, with Y filling the other slots."""
    iY = LinearMap.identity(Y.dim)
    slots = (
        (associator(cfg, X, Y, Y)[0], associator(cfg, Z, Y, Y)[0], f.kron(iY).kron(iY)),
        (associator(cfg, Y, X, Y)[0], associator(cfg, Y, Z, Y)[0], iY.kron(f).kron(iY)),
        (associator(cfg, Y, Y, X)[0], associator(cfg, Y, Y, Z)[0], iY.kron(iY).kron(f)),
    )
    for slot, (a_src, a_tgt, leg) in enumerate(slots):
        report.add(compare_maps(f"rep.naturality.associator.{slot}", "a∘((f ⊗ g) ⊗ h) = (f ⊗ (g ⊗ h))∘a",
                                a_tgt @ leg, leg @ a_src, where))
    u_src, u_tgt = unit_constraints(cfg, X), unit_constraints(cfg, Z)
    # k ⊗ X and X share flat indices, so id_k ⊗ f is f
    report.add(compare_maps("rep.naturality.left_unit", "l∘(id ⊗ f) = f∘l", u_tgt.l @ f, f @ u_src.l, where))
    report.add(compare_maps("rep.naturality.right_unit", "r∘(f ⊗ id) = f∘r", u_tgt.r @ f, f @ u_src.r, where))
    if Rm is not None:
        left = braiding(cfg, Rm, Z, Y)[0] @ f.kron(iY)
        right = braiding(cfg, Rm, Y, Z)[0] @ iY.kron(f)
        report.add(compare_maps("rep.naturality.braiding.left", "c∘(f ⊗ id) = (id ⊗ f)∘c",
                                left, iY.kron(f) @ braiding(cfg, Rm, X, Y)[0], where))
        report.add(compare_maps("rep.naturality.braiding.right", "c∘(id ⊗ f) = (f ⊗ id)∘c",
                                right, f.kron(iY) @ braiding(cfg, Rm, Y, X)[0], where))


def check_naturality(cfg: RepConfig, modules: Sequence[ModuleBase], Rm: Optional[RMatrixData] = None,
                     tensor: Optional[TensorCache] = None) -> VerificationReport:
    """
    Naturality of a, l, r (and c when an R-matrix is given) against the
    module_morphisms of each module and the module_maps between every
    ordered pair of distinct modules. α_M is not H-linear; it only enters
    the braiding square, with α on both legs.
    """
    tensor = tensor or TensorCache(cfg)
    report = VerificationReport(subject=f"naturality in {cfg.label()}")
    k = len(modules)
    for index, X in enumerate(modules):
        Y = modules[(index + 1) % k]
        for morphism in module_morphisms(X):
            f = morphism.map
            where = f"{morphism.name} on {X.name}, other {Y.name}"
            if morphism.kind == "alpha":
                if Rm is not None:
                    aY = Y.alpha
                    c = braiding(cfg, Rm, X, Y)[0]
                    report.add(compare_maps("rep.naturality.alpha.braiding", "c∘(α ⊗ α) = (α ⊗ α)∘c",
                                            c @ f.kron(aY), aY.kron(f) @ c, where))
                continue
            _naturality_squares(report, cfg, Rm, f, X, X, Y, where)
        for Z in modules:
            if Z is X:
                continue
            for morphism in module_maps(X, Z):
                _naturality_squares(report, cfg, Rm, morphism.map, X, Z, Y, f"{morphism.name}, other {Y.name}")
    return report


def check_identity_collapse(H: HomBialgebraData, modules: Optional[Sequence[HomModuleData]] = None,
                            Rm: Optional[RMatrixData] = None) -> VerificationReport:
    """
    With α = id and (i,j) = (0,0) in the plain flavor, a, l and r are
    identities, the tensor action is h₁·m ⊗ h₂·n and c = τ∘(R acting).
    A monoidal H with α = id is read as plain; both axiom sets coincide there.
    """
    if not H.alpha.is_identity():
        raise PreconditionError(f"identity collapse needs α = id on {H.name}", offending=H.name)
    plain = H if H.flavor is Flavor.PLAIN else _as_plain(H)
    modules = [m.reparent(plain) for m in (modules or default_modules(H))]
    cfg = RepConfig(i=0, j=0, flavor=Flavor.PLAIN, window=H.alpha_window)
    tensor = TensorCache(cfg)
    report = VerificationReport(subject=f"{H.name} at α = id")
    for M in modules:
        u = unit_constraints(cfg, M)
        ident = LinearMap.identity(M.dim)
        report.add(compare_maps("collapse.left_unit", "l = id", u.l, ident, _names(M)))
        report.add(compare_maps("collapse.right_unit", "r = id", u.r, ident, _names(M)))
    for M, N, P in module_tuples(modules, 3):
        a = associator(cfg, M, N, P)[0]
        report.add(compare_maps("collapse.associator", "a = id", a, LinearMap.identity(a.dim_in), _names(M, N, P)))
    for M, N in module_tuples(modules, 2, "all"):
        product = tensor(M, N)
        for h in range(plain.dim):
            classical = LinearMap.combination(
                product.dim, product.dim,
                ((c, M.action_maps[a].kron(N.action_maps[b])) for (a, b), c in plain.comult.unary(h)),
            )
            result = compare_maps("collapse.tensor_action", "h·(m ⊗ n) = h₁·m ⊗ h₂·n",
                                  product.action_maps[h], classical, _names(M, N))
            if not result.passed:
                break
        report.add(result)
        if Rm is not None:
            rm = _rmatrix_over(Rm, plain)
            classical_c = LinearMap.combination(
                product.dim, product.dim,
                ((c, N.action_maps[b].kron(M.action_maps[a])) for (a, b), c in rm.R.coeffs.items()),
            ) @ LinearMap.swap(M.dim, N.dim)
            report.add(compare_maps("collapse.braiding", "c(m ⊗ n) = R²·n ⊗ R¹·m",
                                    braiding(cfg, rm, M, N)[0], classical_c, _names(M, N)))
    logger.info("Identity collapse on %s: %d/%d passed", H.name, report.passed, report.total)
    return report


def _as_plain(H: HomBialgebraData) -> HomBialgebraData:
    return replace(H, flavor=Flavor.PLAIN, name=f"{H.name}[plain]")


def _rmatrix_over(Rm: RMatrixData, parent: HomBialgebraData) -> RMatrixData:
    return replace(Rm, parent=parent, system=RMatrixSystem.for_flavor(parent.flavor))


# ---------------------------------------------------------------------------
# Functors
# ---------------------------------------------------------------------------


def _functor_pairs(modules, strategy):
    return module_tuples(modules, 2, "all"), module_tuples(modules, 3, strategy)


def functor_F(cfg_from: RepConfig, cfg_to: RepConfig, modules: Sequence[ModuleBase],
              Rm: Optional[RMatrixData] = None, strategy: str = "cyclic") -> VerificationReport:
    """
    The identity-on-objects functor Rep^{i,j} -> Rep^{i′,j′} with
    F₂(M,N)(m ⊗′ n) = α_M^{i-i′}(m) ⊗ α_N^{j-j′}(n).
    """
    if cfg_from.flavor is not cfg_to.flavor:
        raise FlavorMismatchError("functor F relates two categories of one flavor",
                                  offending=(cfg_from.flavor.value, cfg_to.flavor.value))
    di, dj = cfg_from.i - cfg_to.i, cfg_from.j - cfg_to.j
    src, dst = TensorCache(cfg_from), TensorCache(cfg_to)
    report = VerificationReport(subject=f"F: {cfg_from.label()} -> {cfg_to.label()}")

    def F2(X, Y):
        return X.alpha_power(di).kron(Y.alpha_power(dj))

    pairs, triples = _functor_pairs(modules, strategy)
    for M, N in pairs:
        where = _names(M, N)
        f2 = F2(M, N)
        report.add(check_linearity("functor_F.linear", "F₂(h·x) = h·F₂(x)", f2, dst(M, N), src(M, N), where))
        report.add(check_two_sided_inverse(
            "functor_F.invertible", f2, M.alpha_power(-di).kron(N.alpha_power(-dj)), where,
        ))
        if Rm is not None:
            c_from = braiding(cfg_from, Rm, M, N)[0]
            c_to = braiding(cfg_to, Rm, M, N)[0]
            report.add(compare_maps("functor_F.braided", "F₂∘c′ = c∘F₂", F2(N, M) @ c_to, c_from @ f2, where))
    for M in modules:
        k = trivial_module(M.parent)
        u_from, u_to = unit_constraints(cfg_from, M), unit_constraints(cfg_to, M)
        report.add(compare_maps("functor_F.left_unit", "l∘F₂(k,M) = l′", u_from.l @ F2(k, M), u_to.l, _names(M)))
        report.add(compare_maps("functor_F.right_unit", "r∘F₂(M,k) = r′", u_from.r @ F2(M, k), u_to.r, _names(M)))
    for M, N, P in triples:
        lhs = F2(M, src(N, P)) @ LinearMap.identity(M.dim).kron(F2(N, P)) @ associator(cfg_to, M, N, P)[0]
        rhs = associator(cfg_from, M, N, P)[0] @ F2(src(M, N), P) @ F2(M, N).kron(LinearMap.identity(P.dim))
        report.add(compare_maps("functor_F.monoidal", "F₂∘(id ⊗ F₂)∘a′ = a∘F₂∘(F₂ ⊗ id)", lhs, rhs, _names(M, N, P)))
    logger.info("%s: %d/%d passed", report.subject, report.passed, report.total)
    return report


@dataclass
class TwistedCategory:
    """H^σ with the reparented modules and the twisted R-matrix, built once per twist."""

    H: HomBialgebraData
    tw: TwistData
    twisted: HomBialgebraData
    modules: List[HomModuleData]
    reparented: List[HomModuleData]
    Rm: Optional[RMatrixData] = None
    twisted_rm: Optional[RMatrixData] = None
    trivial: Optional[Tuple[HomModuleData, HomModuleData]] = None

    @classmethod
    def build(cls, H, tw, modules, Rm=None) -> "TwistedCategory":
        if H.flavor is not Flavor.MONOIDAL:
            raise FlavorMismatchError("functor G starts from a monoidal Hom-bialgebra", offending=H.flavor.value)
        twisted = build_twisted_bialgebra(H, tw)
        for module in modules:
            if not isinstance(module, HomModuleData):
                raise PreconditionError("functor G needs base modules", offending=module.name)
        k = trivial_module(H)
        return cls(
            H=H, tw=tw, twisted=twisted,
            modules=list(modules),
            reparented=[m.reparent(twisted) for m in modules],
            Rm=Rm,
            twisted_rm=twist_rmatrix(H, tw, Rm, twisted=twisted) if Rm is not None else None,
            trivial=(k, k.reparent(twisted)),
        )


def functor_G(H: HomBialgebraData, tw: TwistData, modules: Sequence[HomModuleData], i: int = 0, j: int = 0,
              Rm: Optional[RMatrixData] = None, shift: Optional[int] = None, strategy: str = "cyclic",
              category: Optional[TwistedCategory] = None) -> VerificationReport:
    """
    Rep^{i+s,j+s}(H) -> Rep^{i,j}(H^σ), identity on objects, with
    G₂(M,N)(m ⊗̄ n) = α^i(ϱ¹)·m ⊗ α^j(ϱ²)·n. The default shift is 3.
    """
    shift = get_settings().rep_category.functor_shift if shift is None else shift
    category = category or TwistedCategory.build(H, tw, modules, Rm)
    window = H.alpha_window
    cfg_src = RepConfig(i=i + shift, j=j + shift, flavor=Flavor.MONOIDAL, window=window)
    cfg_tgt = RepConfig(i=i, j=j, flavor=Flavor.PLAIN, window=window)
    src, tgt = TensorCache(cfg_src), TensorCache(cfg_tgt)
    alpha_i, alpha_j = H.alpha_power(i), H.alpha_power(j)
    rho = tw.rho
    report = VerificationReport(subject=f"G: {cfg_src.label()} over {H.name} -> {cfg_tgt.label()} over {category.twisted.name}")

    def G2(X, Y):
        return LinearMap.combination(
            X.dim * Y.dim, X.dim * Y.dim,
            ((c, X.act(dict(alpha_i.columns[a])).kron(Y.act(dict(alpha_j.columns[b]))))
             for (a, b), c in rho.coeffs.items()),
        )

    bar = dict(zip((id(m) for m in category.modules), category.reparented))
    pairs, triples = _functor_pairs(category.modules, strategy)
    for M, N in pairs:
        Mb, Nb = bar[id(M)], bar[id(N)]
        where = _names(M, N)
        g2 = G2(M, N)
        report.add(check_linearity("functor_G.linear", "G₂(h ⇀ x) = h·G₂(x)", g2, tgt(Mb, Nb), src(M, N), where))
        invertible = g2.is_invertible()
        report.add(check_result("functor_G.invertible", "G₂ is invertible", invertible,
                                counterexample=None if invertible else [M.name, N.name], detail=where))
        if category.Rm is not None:
            c_bar = braiding(cfg_tgt, category.twisted_rm, Mb, Nb)[0]
            c = braiding(cfg_src, category.Rm, M, N)[0]
            report.add(compare_maps("functor_G.braided", "G₂∘c̄ = c∘G₂", G2(N, M) @ c_bar, c @ g2, where))
    k, k_bar = category.trivial
    for M, Mb in zip(category.modules, category.reparented):
        u_src, u_tgt = unit_constraints(cfg_src, M), unit_constraints(cfg_tgt, Mb)
        report.add(compare_maps("functor_G.left_unit", "l∘G₂(k,M) = l̄", u_src.l @ G2(k, M), u_tgt.l, _names(M)))
        report.add(compare_maps("functor_G.right_unit", "r∘G₂(M,k) = r̄", u_src.r @ G2(M, k), u_tgt.r, _names(M)))
    for M, N, P in triples:
        Mb, Nb, Pb = bar[id(M)], bar[id(N)], bar[id(P)]
        lhs = G2(M, src(N, P)) @ LinearMap.identity(M.dim).kron(G2(N, P)) @ associator(cfg_tgt, Mb, Nb, Pb)[0]
        rhs = associator(cfg_src, M, N, P)[0] @ G2(src(M, N), P) @ G2(M, N).kron(LinearMap.identity(P.dim))
        report.add(compare_maps("functor_G.monoidal", "G₂∘(id ⊗ G₂)∘ā = a∘G₂∘(G₂ ⊗ id)", lhs, rhs, _names(M, N, P)))
    logger.info("%s: %d/%d passed", report.subject, report.passed, report.total)
    return report


@dataclass
class ShiftProbe:
    """Which source shifts s make G: Rep^{i+s,j+s}(H) -> Rep^{i,j}(H^σ) coherent."""

    i: int
    j: int
    outcomes: Dict[int, VerificationReport]

    @property
    def working_shifts(self) -> List[int]:
        return [s for s, report in self.outcomes.items() if report.ok]

    def as_report(self) -> VerificationReport:
        report = VerificationReport(subject=f"functor G shift probe at ({self.i},{self.j})")
        for s, outcome in self.outcomes.items():
            failures = outcome.failures()
            report.add(check_result(
                f"functor_G.shift_{s}", f"G coherent from Rep^{{i+{s},j+{s}}}", outcome.ok,
                counterexample=[failures[0].check_id] if failures else None,
                detail=f"{outcome.passed}/{outcome.total} squares commute",
                informational=True,
            ))
        return report


def probe_functor_G_shifts(H: HomBialgebraData, tw: TwistData, modules: Sequence[HomModuleData],
                           shifts: Optional[Sequence[int]] = None, i: int = 0, j: int = 0,
                           Rm: Optional[RMatrixData] = None) -> ShiftProbe:
    shifts = list(shifts or get_settings().rep_category.probe_shifts)
    category = TwistedCategory.build(H, tw, modules, Rm)
    outcomes = {s: functor_G(H, tw, modules, i, j, shift=s, category=category) for s in shifts}
    probe = ShiftProbe(i=i, j=j, outcomes=outcomes)
    logger.info("Shift probe on %s at (%d,%d): coherent for s in %s", H.name, i, j, probe.working_shifts)
    return probe


# ---------------------------------------------------------------------------
# Grid driver
# ---------------------------------------------------------------------------


def grid_configs(flavor: Flavor, grid_min: int, grid_max: int, window: Optional[int] = None,
                 j_range: Optional[Tuple[int, int]] = None) -> List[RepConfig]:
    """All (i, j) in [grid_min, grid_max] × j_range, row-major; window violations raise at construction."""
    window = window if window is not None else get_settings().algebra.alpha_window
    j_min, j_max = j_range or (grid_min, grid_max)
    return [
        RepConfig(i=i, j=j, flavor=flavor, window=window)
        for i in range(grid_min, grid_max + 1)
        for j in range(j_min, j_max + 1)
    ]


def check_grid_point(cfg: RepConfig, modules: Sequence[ModuleBase], Rm: Optional[RMatrixData] = None,
                     strategy: str = "cyclic", origin: Optional[RepConfig] = None,
                     twisted: Optional[TwistedCategory] = None) -> VerificationReport:
    """Every coherence suite of one category Rep^{i,j}."""
    tensor = TensorCache(cfg)
    pairs = module_tuples(modules, 2, "all")
    triples = module_tuples(modules, 3, strategy)
    quadruples = module_tuples(modules, 4, strategy)
    report = VerificationReport(subject=cfg.label())
    report.extend(check_tensor_modules(cfg, pairs, tensor))
    report.extend(check_unit_constraints(cfg, modules, tensor))
    report.extend(check_associator(cfg, triples, tensor))
    report.extend(check_pentagon(cfg, quadruples, tensor))
    report.extend(check_triangle(cfg, pairs))
    if Rm is not None:
        report.extend(check_braiding(cfg, Rm, pairs, tensor))
        report.extend(check_hexagons(cfg, Rm, triples, tensor))
    report.extend(check_naturality(cfg, modules, Rm, tensor))
    if origin is not None and origin != cfg:
        report.extend(functor_F(cfg, origin, modules, Rm, strategy))
    if twisted is not None and cfg.flavor is Flavor.MONOIDAL:
        report.extend(functor_G(twisted.H, twisted.tw, twisted.modules, cfg.i, cfg.j, Rm=twisted.Rm,
                                strategy=strategy, category=twisted))
    return report


def run_rep_grid(
    configs: Sequence[RepConfig],
    modules: Sequence[ModuleBase],
    Rm: Optional[RMatrixData] = None,
    tw: Optional[TwistData] = None,
    strategy: Optional[str] = None,
    max_workers: Optional[int] = None,
) -> VerificationReport:
    """
    Run check_grid_point over ``configs`` on a thread pool. Results keep the
    order of ``configs``; check ids are prefixed with the grid point label.
    Functor F is checked from every point to Rep^{0,0}; functor G runs at
    every monoidal point when a twist is supplied.
    """
    settings = get_settings().rep_category
    strategy = strategy or settings.tuple_strategy
    max_workers = max_workers or settings.max_workers
    if not configs:
        return VerificationReport(subject="empty grid")
    H = modules[0].parent
    for module in modules:
        # warm shared caches before the workers read them
        _ = module.action_maps
        if module.alpha_powers.invertible:
            module.alpha_power(-1)
    twisted = TwistedCategory.build(H, tw, modules, Rm) if tw is not None else None

    def run(cfg: RepConfig) -> VerificationReport:
        origin = RepConfig(i=0, j=0, flavor=cfg.flavor, window=cfg.window)
        return check_grid_point(cfg, modules, Rm, strategy, origin, twisted)

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(run, configs))

    report = VerificationReport(subject=f"Rep grid over {H.name} ({len(configs)} points)")
    for cfg, point in zip(configs, results):
        report.extend(point, prefix=f"{cfg.label()}:")
        logger.debug("%s: %d/%d passed", cfg.label(), point.passed, point.total)
    logger.info("%s: %d/%d passed", report.subject, report.passed, report.total)
    for failure in report.failures()[:10]:
        logger.warning("Check %s failed on %s: %s", failure.check_id, failure.detail, failure.counterexample)
    return report
