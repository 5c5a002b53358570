"""
Reading and writing algebra files and reports.

Algebra files are JSON documents validated by ``models.AlgebraFile``. Every
rational is an integer pair and every sparse list is sorted by its indices,
so serializing a parsed canonical file reproduces it byte for byte.
Files are written through a temporary file and an atomic rename.
"""

import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple, Union

from pydantic import ValidationError

from .config_manager import get_settings
from .exact_tensor import LinearMap, SparseTensor, StructureTensor, TensorElement2, Vector, scalar_pair
from .exceptions import ParseError
from .hom_structures import HomBialgebraData
from .models import AlgebraFile, Flavor, NamedRMatrixEntry, NamedTwistEntry, ReportFile, RMatrixSystem

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass
class LoadedAlgebra:
    """A parsed algebra file: the Hom-bialgebra plus its named, not yet validated, elements."""

    data: HomBialgebraData
    twists: Dict[str, TensorElement2] = field(default_factory=dict)
    rmatrices: Dict[str, Tuple[RMatrixSystem, TensorElement2]] = field(default_factory=dict)
    path: Optional[Path] = None


# --- encoding ----------------------------------------------------------------


def _vector_entries(v: Vector) -> List[Tuple[int, int, int]]:
    return [(i, *scalar_pair(c)) for i, c in sorted(v.sparse().items())]


def _matrix_entries(entries: Mapping[Tuple[int, int], Fraction]) -> List[Tuple[int, int, int, int]]:
    return [(r, c, *scalar_pair(v)) for (r, c), v in sorted(entries.items())]


def _triple_entries(t: StructureTensor) -> List[Tuple[int, int, int, int, int]]:
    return [(a, b, c, *scalar_pair(v)) for (a, b, c), v in sorted(t.entries.items())]


def _pair_entries(element: SparseTensor) -> List[Tuple[int, int, int, int]]:
    return _matrix_entries(element.coeffs)


def to_algebra_file(
    H: HomBialgebraData,
    twists: Optional[Mapping[str, SparseTensor]] = None,
    rmatrices: Optional[Mapping[str, Tuple[RMatrixSystem, SparseTensor]]] = None,
) -> AlgebraFile:
    """Canonical file model; counit entries are (index, num, den) since ε maps to the ground field."""
    counit = Vector.from_sparse(H.dim, {col: v for (_, col), v in H.counit.entries.items()})
    return AlgebraFile(
        name=H.name,
        dim=H.dim,
        basis=[H.label(i) for i in range(H.dim)],
        flavor=H.flavor,
        mult=_triple_entries(H.mult),
        comult=_triple_entries(H.comult),
        unit=_vector_entries(H.unit),
        counit=_vector_entries(counit),
        alpha=_matrix_entries(H.alpha.entries),
        antipode=_matrix_entries(H.antipode.entries) if H.antipode is not None else None,
        twists={name: NamedTwistEntry(coeffs=_pair_entries(t)) for name, t in sorted((twists or {}).items())},
        rmatrices={
            name: NamedRMatrixEntry(system=system, coeffs=_pair_entries(R))
            for name, (system, R) in sorted((rmatrices or {}).items())
        },
    )


def serialize(model: AlgebraFile) -> str:
    return json.dumps(model.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"


# --- decoding ----------------------------------------------------------------


def _fraction(num: int, den: int) -> Fraction:
    return Fraction(num, den)


def from_algebra_file(model: AlgebraFile, path: Optional[Path] = None) -> LoadedAlgebra:
    n = model.dim
    shape = (n, n, n)

    def triples(entries):
        return StructureTensor(shape, {(a, b, c): _fraction(p, q) for a, b, c, p, q in entries})

    def matrix(entries):
        return LinearMap(n, n, {(r, c): _fraction(p, q) for r, c, p, q in entries})

    def pairs(entries):
        return TensorElement2((n, n), {(a, b): _fraction(p, q) for a, b, p, q in entries})

    data = HomBialgebraData(
        dim=n,
        mult=triples(model.mult),
        unit=Vector.from_sparse(n, {i: _fraction(p, q) for i, p, q in model.unit}),
        comult=triples(model.comult),
        counit=LinearMap(n, 1, {(0, i): _fraction(p, q) for i, p, q in model.counit}),
        alpha=matrix(model.alpha),
        antipode=matrix(model.antipode) if model.antipode is not None else None,
        flavor=Flavor(model.flavor),
        basis_names=tuple(model.basis),
        name=model.name or (path.stem if path else ""),
    )
    return LoadedAlgebra(
        data=data,
        twists={name: pairs(entry.coeffs) for name, entry in model.twists.items()},
        rmatrices={name: (entry.system, pairs(entry.coeffs)) for name, entry in model.rmatrices.items()},
        path=path,
    )


def parse_text(text: str, path: Optional[PathLike] = None) -> AlgebraFile:
    """Parse and validate; every failure becomes a ParseError carrying the location."""
    where = str(path) if path else "<string>"
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{where}: invalid JSON: {e.msg}", path=where, location=f"line {e.lineno}, column {e.colno}") from e
    try:
        return AlgebraFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ParseError(f"{where}: {location}: {first['msg']}", path=where, location=location) from e


def load_algebra(path: PathLike) -> LoadedAlgebra:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}", path=str(path)) from e
    model = parse_text(text, path)
    try:
        loaded = from_algebra_file(model, path)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"{path}: {e}", path=str(path)) from e
    logger.debug("Loaded %s (dim %d, %s)", loaded.data.name, loaded.data.dim, loaded.data.flavor.value)
    return loaded


def canonicalize(text: str) -> str:
    """serialize ∘ parse; idempotent."""
    loaded = from_algebra_file(parse_text(text))
    return serialize(to_algebra_file(loaded.data, loaded.twists, loaded.rmatrices))


# --- writing -------------------------------------------------------------------


def write_atomic(path: PathLike, text: str) -> Path:
    """Write ``text`` next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_algebra(path: PathLike, model: AlgebraFile) -> Path:
    written = write_atomic(path, serialize(model))
    logger.info("Wrote algebra file %s", written)
    return written


def default_report_path(command: str, name: str) -> Path:
    safe = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in name) or "report"
    return Path(get_settings().reports.directory) / f"{command}-{safe}.json"


def write_report(path: PathLike, report: ReportFile) -> Path:
    written = write_atomic(path, report.model_dump_json(indent=2) + "\n")
    logger.info("Wrote report %s (%d/%d passed)", written, report.totals.passed, report.totals.total)
    return written


def read_report(path: PathLike) -> ReportFile:
    path = Path(path)
    try:
        return ReportFile.model_validate_json(path.read_text(encoding="utf-8"))
    except (OSError, ValidationError) as e:
        raise ParseError(f"cannot read report {path}: {e}", path=str(path)) from e
