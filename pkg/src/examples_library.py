"""
Built-in Hom-bialgebra instances.

Every instance starts from an ordinary Hopf algebra and a bialgebra
automorphism α, and carries both lifts. Twist and R-matrix candidates are
validated when the instance is built; a candidate that fails aborts the
build with TheoremCheckFailed.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Mapping, Tuple

from .correspondence import lift_monoidal, lift_plain
from .exact_tensor import ONE, LinearMap, ScalarLike, StructureTensor, TensorElement2, Vector, to_scalar
from .exceptions import PreconditionError, UnknownInstanceError
from .hom_structures import HomBialgebraData, HomModuleData, ModuleAlgebraData, ModuleCoalgebraData, postcompose_mult
from .models import Flavor, RMatrixSystem
from .quasitriangular import RMatrixData, lift_rmatrix, require_rmatrix
from .twist_engine import TwistData, require_twist, unit_tensor

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)

# Sweedler basis: 1, g, x, gx
_SWEEDLER_NAMES = ("1", "g", "x", "gx")
_SWEEDLER_PRODUCTS: Dict[Tuple[int, int], Dict[int, int]] = {
    (1, 1): {0: 1}, (1, 2): {3: 1}, (1, 3): {2: 1},
    (2, 1): {3: -1}, (2, 2): {}, (2, 3): {},
    (3, 1): {2: -1}, (3, 2): {}, (3, 3): {},
}
_SWEEDLER_COPRODUCTS: Dict[int, Dict[Tuple[int, int], int]] = {
    0: {(0, 0): 1},
    1: {(1, 1): 1},
    2: {(2, 0): 1, (1, 2): 1},
    3: {(3, 1): 1, (0, 3): 1},
}


@dataclass(frozen=True, eq=False)
class NamedInstance:
    """A library instance: the ordinary bialgebra, α, both lifts and validated named elements."""

    name: str
    base: HomBialgebraData
    alpha: LinearMap
    data: HomBialgebraData
    plain: HomBialgebraData
    twists: Dict[str, TwistData] = field(default_factory=dict)
    rmatrices: Dict[str, RMatrixData] = field(default_factory=dict)
    provenance: Dict[str, str] = field(default_factory=dict)
    family: str = ""
    parameters: Tuple = ()

    def twist(self, name: str) -> TwistData:
        try:
            return self.twists[name]
        except KeyError:
            raise UnknownInstanceError(f"{self.name} has no twist {name!r}; known: {sorted(self.twists)}") from None

    def rmatrix(self, name: str) -> RMatrixData:
        try:
            return self.rmatrices[name]
        except KeyError:
            raise UnknownInstanceError(f"{self.name} has no R-matrix {name!r}; known: {sorted(self.rmatrices)}") from None


def _pairs(dim: int, coeffs: Mapping[Tuple[int, int], ScalarLike]) -> TensorElement2:
    return TensorElement2.from_pairs(dim, coeffs)


def bicharacter_element(dim: int, z: int) -> TensorElement2:
    """½(1⊗1 + 1⊗z + z⊗1 − z⊗z) for a grouplike z of order two (basis index 0 is 1)."""
    return _pairs(dim, {(0, 0): HALF, (0, z): HALF, (z, 0): HALF, (z, z): -HALF})


# ---------------------------------------------------------------------------
# Group algebras
# ---------------------------------------------------------------------------


def group_algebra(n: int) -> HomBialgebraData:
    """ℚ[ℤ/n] on the basis g^0..g^{n-1}."""
    if n < 1:
        raise PreconditionError("group order must be positive", offending=n)
    shape = (n, n, n)
    return HomBialgebraData(
        dim=n,
        mult=StructureTensor.from_function(shape, lambda a, b: {(a + b) % n: ONE}),
        unit=Vector.basis(n, 0),
        comult=StructureTensor.from_unary(shape, lambda a: {(a, a): ONE}),
        counit=LinearMap(n, 1, {(0, a): ONE for a in range(n)}),
        alpha=LinearMap.identity(n),
        antipode=LinearMap(n, n, {((-a) % n, a): ONE for a in range(n)}),
        flavor=Flavor.PLAIN,
        basis_names=tuple("1" if k == 0 else ("g" if k == 1 else f"g^{k}") for k in range(n)),
        name=f"Q[Z/{n}]",
    )


def group_automorphism(n: int, m: int) -> LinearMap:
    """g^k -> g^{mk}."""
    if gcd(m, n) != 1:
        raise PreconditionError(f"g -> g^{m} is not an automorphism of Z/{n}", offending=(n, m))
    return LinearMap(n, n, {((m * k) % n, k): ONE for k in range(n)})


def instance_group_algebra(n: int, m: int, name: str = "") -> NamedInstance:
    """
    ℚ[ℤ/n] with α(g) = g^m. For even n the bicharacter built on z = g^{n/2}
    is attached both as a twist and as an R-matrix; every instance carries
    the trivial twist and R-matrix.
    """
    base = group_algebra(n)
    alpha = group_automorphism(n, m)
    name = name or f"group_{n}_{m}"
    data = lift_monoidal(base, alpha, name=name)
    plain = lift_plain(base, alpha, name=f"{name}_plain")
    one = unit_tensor(data)

    twists = {"trivial": require_twist(data, one, name="trivial")}
    rmatrices = {"trivial": _attach_rmatrix(base, data, alpha, one, "trivial")}
    provenance = {
        "data": "group algebra, α(g) = g^m, monoidal lift",
        "twist:trivial": "1 ⊗ 1",
        "rmatrix:trivial": "1 ⊗ 1 (cocommutative)",
    }
    if n % 2 == 0:
        label = "sigma_beta" if n == 2 else "sigma_half"
        element = bicharacter_element(n, n // 2)
        twists[label] = require_twist(data, element, name=label)
        rmatrices[label] = _attach_rmatrix(base, data, alpha, element, label)
        provenance[f"twist:{label}"] = "bicharacter of the order-two subgroup; α fixes z since m is odd"
        provenance[f"rmatrix:{label}"] = "same bicharacter, lifted classical R-matrix"
    logger.info("Built %s: twists %s, R-matrices %s", name, sorted(twists), sorted(rmatrices))
    return NamedInstance(name, base, alpha, data, plain, twists, rmatrices, provenance, "group", (n, m))


# ---------------------------------------------------------------------------
# Sweedler's four-dimensional Hopf algebra
# ---------------------------------------------------------------------------


def sweedler_algebra() -> HomBialgebraData:
    """H₄ = ⟨g, x | g² = 1, x² = 0, xg = −gx⟩ on the basis 1, g, x, gx."""
    shape = (4, 4, 4)

    def product(a: int, b: int) -> Dict[int, int]:
        if a == 0:
            return {b: 1}
        if b == 0:
            return {a: 1}
        return _SWEEDLER_PRODUCTS[(a, b)]

    return HomBialgebraData(
        dim=4,
        mult=StructureTensor.from_function(shape, product),
        unit=Vector.basis(4, 0),
        comult=StructureTensor.from_unary(shape, lambda a: _SWEEDLER_COPRODUCTS[a]),
        counit=LinearMap(4, 1, {(0, 0): 1, (0, 1): 1}),
        alpha=LinearMap.identity(4),
        antipode=LinearMap(4, 4, {(0, 0): 1, (1, 1): 1, (3, 2): -1, (2, 3): 1}),
        flavor=Flavor.PLAIN,
        basis_names=_SWEEDLER_NAMES,
        name="H4",
    )


def sweedler_scaling(lam: ScalarLike) -> LinearMap:
    """α_λ(g) = g, α_λ(x) = λx (so α_λ(gx) = λgx)."""
    lam = to_scalar(lam)
    if lam == 0:
        raise PreconditionError("λ = 0 gives a singular structure map", offending=0)
    return LinearMap(4, 4, {(0, 0): 1, (1, 1): 1, (2, 2): lam, (3, 3): lam})


# x-supported candidates; both need (α ⊗ α) to fix the x ⊗ x block, i.e. λ² = 1
SWEEDLER_X_TWIST = {(0, 0): 1, (3, 2): 1}
SWEEDLER_X_PART = {(2, 2): 1, (2, 3): -1, (3, 2): 1, (3, 3): 1}


def instance_sweedler(lam: ScalarLike, name: str = "") -> NamedInstance:
    lam = to_scalar(lam)
    base = sweedler_algebra()
    alpha = sweedler_scaling(lam)
    name = name or f"sweedler_{lam}"
    data = lift_monoidal(base, alpha, name=name)
    plain = lift_plain(base, alpha, name=f"{name}_plain")
    R0 = bicharacter_element(4, 1)

    twists = {
        "trivial": require_twist(data, unit_tensor(data), name="trivial"),
        "sigma_g": require_twist(data, R0, name="sigma_g"),
    }
    rmatrices = {"R0": _attach_rmatrix(base, data, alpha, R0, "R0")}
    provenance = {
        "data": "Sweedler H4, α scales x by λ, monoidal lift",
        "twist:sigma_g": "grouplike bicharacter ½(1⊗1 + 1⊗g + g⊗1 − g⊗g)",
        "rmatrix:R0": "grouplike R-matrix ½(1⊗1 + 1⊗g + g⊗1 − g⊗g)",
    }
    if lam * lam == 1:
        twists["x_twist"] = require_twist(data, _pairs(4, SWEEDLER_X_TWIST), name="x_twist")
        R_x = R0 - _pairs(4, SWEEDLER_X_PART)
        rmatrices["R_x"] = _attach_rmatrix(base, data, alpha, R_x, "R_x")
        provenance["twist:x_twist"] = "1⊗1 + gx⊗x, solved from normalization and the cocycle identity"
        provenance["rmatrix:R_x"] = "R0 − (x⊗x − x⊗gx + gx⊗x + gx⊗gx), the x_twist conjugate of R0"
    logger.info("Built %s: twists %s, R-matrices %s", name, sorted(twists), sorted(rmatrices))
    return NamedInstance(name, base, alpha, data, plain, twists, rmatrices, provenance, "sweedler", (lam,))


def _attach_rmatrix(base: HomBialgebraData, data: HomBialgebraData, alpha: LinearMap,
                    R: TensorElement2, name: str) -> RMatrixData:
    """Lift a classical R-matrix and rebind it to the instance's own lift."""
    lifted = lift_rmatrix(base, R, alpha, name=name)
    return require_rmatrix(data, lifted.R, RMatrixSystem.MONOIDAL_Q, name=name)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

CANONICAL_INSTANCES: Dict[str, Tuple[str, Tuple]] = {
    "z2": ("group", (2, 1)),
    "z4_m3": ("group", (4, 3)),
    "sweedler_m1": ("sweedler", (-1,)),
    "sweedler_1": ("sweedler", (1,)),
    "sweedler_2": ("sweedler", (2,)),
}

_GROUP_PATTERN = re.compile(r"^group_(\d+)_(-?\d+)$")
_SWEEDLER_PATTERN = re.compile(r"^sweedler_(-?\d+)_(\d+)$")


def list_instances() -> List[str]:
    return list(CANONICAL_INSTANCES)


def _resolve(name: str) -> Tuple[str, Tuple]:
    if name in CANONICAL_INSTANCES:
        return CANONICAL_INSTANCES[name]
    match = _GROUP_PATTERN.match(name)
    if match:
        return "group", (int(match.group(1)), int(match.group(2)))
    match = _SWEEDLER_PATTERN.match(name)
    if match and int(match.group(2)) != 0:
        return "sweedler", (Fraction(int(match.group(1)), int(match.group(2))),)
    raise UnknownInstanceError(
        f"unknown instance {name!r}; known: {', '.join(list_instances())}, group_<n>_<m>, sweedler_<p>_<q>"
    )


@lru_cache(maxsize=None)
def get_instance(name: str) -> NamedInstance:
    """Build (once) and return the named instance."""
    kind, args = _resolve(name)
    if kind == "group":
        return instance_group_algebra(*args, name=name)
    return instance_sweedler(*args, name=name)


def is_known_instance(name: str) -> bool:
    try:
        _resolve(name)
    except UnknownInstanceError:
        return False
    return True


# ---------------------------------------------------------------------------
# Module algebras and module coalgebras
# ---------------------------------------------------------------------------


def _counit_action(H: HomBialgebraData, alpha: LinearMap, dim: int) -> StructureTensor:
    """h·a = ε(h)α(a)."""
    counit = H.counit.columns
    entries = {}
    for h in range(H.dim):
        eps = dict(counit[h]).get(0)
        if not eps:
            continue
        for (row, col), value in alpha.entries.items():
            entries[(h, col, row)] = eps * value
    return StructureTensor((H.dim, dim, dim), entries)


def trivial_module_algebra(H: HomBialgebraData) -> ModuleAlgebraData:
    """H as a Hom-algebra with h·a = ε(h)α(a)."""
    module = HomModuleData(H.dim, _counit_action(H, H.alpha, H.dim), H.alpha, H,
                           name=f"{H.name}_triv", names=H.basis_names)
    return ModuleAlgebraData(module, H.mult, H.unit)


def function_module_algebra(inst: NamedInstance) -> ModuleAlgebraData:
    """
    Functions on ℤ/n with pointwise product, g^k▷δ_a = δ_{a-k} and
    α_A(δ_a) = δ_{ma}, lifted to the product α_A∘m and the action α_A(h▷a).
    """
    if inst.family != "group":
        raise PreconditionError("the translation action needs a group algebra instance", offending=inst.name)
    H = inst.data
    n, m = inst.parameters
    alpha_A = group_automorphism(n, m)
    pointwise = StructureTensor((n, n, n), {(a, a, a): ONE for a in range(n)})
    # g^k ▷ δ_a = δ_{a-k}, then α_A
    action = StructureTensor((n, n, n), {
        (k, a, alpha_A.columns[(a - k) % n][0][0]): ONE for k in range(n) for a in range(n)
    })
    module = HomModuleData(n, action, alpha_A, H, name=f"Fun(Z/{n})", names=tuple(f"δ{a}" for a in range(n)))
    unit = Vector.from_sparse(n, {a: ONE for a in range(n)})
    return ModuleAlgebraData(module, postcompose_mult(pointwise, alpha_A), unit)


def regular_module_coalgebra(H: HomBialgebraData) -> ModuleCoalgebraData:
    """H acting on itself by its product, with its own coproduct and counit."""
    module = HomModuleData(H.dim, H.mult, H.alpha, H, name=f"{H.name}_reg", names=H.basis_names)
    return ModuleCoalgebraData(module, H.comult, H.counit)


def trivial_module_coalgebra(H: HomBialgebraData) -> ModuleCoalgebraData:
    module = HomModuleData(H.dim, _counit_action(H, H.alpha, H.dim), H.alpha, H,
                           name=f"{H.name}_triv", names=H.basis_names)
    return ModuleCoalgebraData(module, H.comult, H.counit)


def module_algebras(inst: NamedInstance) -> Dict[str, ModuleAlgebraData]:
    out = {"trivial": trivial_module_algebra(inst.data)}
    if inst.family == "group":
        out["functions"] = function_module_algebra(inst)
    return out


def module_coalgebras(inst: NamedInstance) -> Dict[str, ModuleCoalgebraData]:
    return {"regular": regular_module_coalgebra(inst.data), "trivial": trivial_module_coalgebra(inst.data)}
