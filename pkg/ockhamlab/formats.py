"""
JSON file formats
Pydantic models for the five document kinds (ockham_space, ockham_algebra,
bounded_lattice, structure, relation), conversion to and from the domain
objects, and canonical printing.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, TypeAdapter, ValidationError
from typing_extensions import Annotated

from .errors import MalformedInputError
from .relations import Relation
from .structures import (
    BoundedLattice, FinStructure, OckhamAlgebra, OckhamSpace, Signature, check_carrier, lattice_from_order,
    space_from_pairs, validate_ockham_algebra,
)

logger = logging.getLogger(__name__)


class SpaceDocument(BaseModel):
    kind: Literal["ockham_space"]
    size: int = Field(ge=1)
    leq_pairs: List[Tuple[int, int]] = []
    g: List[int]
    labels: Optional[List[str]] = None


class AlgebraDocument(BaseModel):
    kind: Literal["ockham_algebra"]
    size: int = Field(ge=1)
    join: List[List[int]]
    meet: List[List[int]]
    neg: List[int]
    bot: int
    top: int
    labels: Optional[List[str]] = None


class LatticeDocument(BaseModel):
    kind: Literal["bounded_lattice"]
    size: int = Field(ge=1)
    leq_pairs: List[Tuple[int, int]] = []
    labels: Optional[List[str]] = None


class RelationSpec(BaseModel):
    arity: int = Field(ge=1)
    tuples: List[List[int]] = []


class StructureDocument(BaseModel):
    kind: Literal["structure"]
    size: int = Field(ge=1)
    ops: Dict[str, List[int]] = {}
    rels: Dict[str, RelationSpec] = {}
    labels: Optional[List[str]] = None


class RelationDocument(BaseModel):
    kind: Literal["relation"]
    size: int = Field(ge=1)
    arity: int = Field(ge=1)
    tuples: List[List[int]] = []


Document = Annotated[
    Union[SpaceDocument, AlgebraDocument, LatticeDocument, StructureDocument, RelationDocument],
    Field(discriminator="kind"),
]
DOCUMENT_ADAPTER = TypeAdapter(Document)

DomainObject = Union[OckhamSpace, OckhamAlgebra, BoundedLattice, FinStructure, Relation]


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise MalformedInputError(f"No such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path} is not valid JSON: {exc}") from None


def parse_document(data: Any):
    """Validate raw JSON data against the document models"""
    try:
        return DOCUMENT_ADAPTER.validate_python(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise MalformedInputError(f"Invalid document at {where or 'top level'}: {first['msg']}") from None


def to_object(document, check: bool = True) -> DomainObject:
    """
    Build the domain object for a parsed document.

    Args:
        check: validate the space or algebra axioms and raise on failure

    Raises:
        ResourceCapError: the carrier is above the structure cap
    """
    check_carrier(document.size)
    if isinstance(document, SpaceDocument):
        return space_from_pairs(document.size, document.leq_pairs, document.g, document.labels, check=check)
    if isinstance(document, LatticeDocument):
        return lattice_from_order(document.size, document.leq_pairs, document.labels)
    if isinstance(document, AlgebraDocument):
        A = OckhamAlgebra(document.size, document.join, document.meet, tuple(document.neg),
                          document.bot, document.top, tuple(document.labels) if document.labels else None)
        if check:
            report = validate_ockham_algebra(A)
            if not report.ok:
                raise MalformedInputError(f"Not an Ockham algebra: {report.summary()}")
        return A
    if isinstance(document, StructureDocument):
        signature = Signature(
            ops=tuple(sorted((name, 1) for name in document.ops)),
            rels=tuple(sorted((name, spec.arity) for name, spec in document.rels.items())),
        )
        rels = {name: frozenset(tuple(t) for t in spec.tuples) for name, spec in document.rels.items()}
        ops = {name: tuple(table) for name, table in document.ops.items()}
        return FinStructure(signature, document.size, ops, rels,
                            tuple(document.labels) if document.labels else None)
    return Relation(document.size, document.arity, frozenset(tuple(t) for t in document.tuples))


def load(path: Union[str, Path], check: bool = True) -> DomainObject:
    """Read, validate and convert one document"""
    obj = to_object(parse_document(read_json(path)), check=check)
    logger.debug(f"Loaded {type(obj).__name__} from {path}")
    return obj


def to_document(obj: DomainObject) -> Dict[str, Any]:
    """Canonical JSON data; orders are printed as covering pairs"""
    if isinstance(obj, OckhamSpace):
        data: Dict[str, Any] = {
            "kind": "ockham_space",
            "size": obj.size,
            "leq_pairs": [list(p) for p in sorted(obj.cover_pairs)],
            "g": list(obj.g),
        }
    elif isinstance(obj, OckhamAlgebra):
        data = {
            "kind": "ockham_algebra",
            "size": obj.size,
            "join": [list(row) for row in obj.join_rows],
            "meet": [list(row) for row in obj.meet_rows],
            "neg": list(obj.neg),
            "bot": int(obj.bot),
            "top": int(obj.top),
        }
    elif isinstance(obj, BoundedLattice):
        data = {"kind": "bounded_lattice", "size": obj.size, "leq_pairs": [list(p) for p in obj.cover_pairs]}
    elif isinstance(obj, FinStructure):
        data = {
            "kind": "structure",
            "size": obj.size,
            "ops": {name: list(obj.ops[name]) for name in obj.signature.op_names},
            "rels": {
                name: {"arity": arity, "tuples": [list(t) for t in obj.sorted_tuples(name)]}
                for name, arity in obj.signature.rels
            },
        }
    elif isinstance(obj, Relation):
        return obj.to_dict()
    else:
        raise MalformedInputError(f"Cannot serialize {type(obj).__name__}")
    if obj.labels is not None:
        data["labels"] = list(obj.labels)
    return data


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)


def save(obj: DomainObject, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(to_document(obj)) + "\n")
