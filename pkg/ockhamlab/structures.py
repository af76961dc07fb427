"""
Finite Ockham structures
Ockham spaces, Ockham algebras and structures over a declared signature,
with axiom validation and the basic constructions (substructures, powers,
products, order duals, relabelings).

Carriers are always 0..size-1. Orders are stored as read-only boolean
matrices, algebra operations as read-only integer tables.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .config import get_config
from .errors import MalformedInputError, check_cap

logger = logging.getLogger(__name__)

Tuple_ = Tuple[int, ...]


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def order_closure(size: int, pairs: Iterable[Sequence[int]]) -> np.ndarray:
    """Reflexive-transitive closure of a generating pair set, as a boolean matrix"""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(size))
    for pair in pairs:
        x, y = _check_pair(size, pair)
        graph.add_edge(x, y)
    closure = nx.transitive_closure(graph, reflexive=True)
    leq = np.zeros((size, size), dtype=bool)
    for x, y in closure.edges:
        leq[x, y] = True
    return _readonly(leq)


def covers_of(leq: np.ndarray) -> np.ndarray:
    """Covering relation: out[i, j] iff j covers i"""
    lt = leq.copy()
    lt[np.diag_indices_from(lt)] = False
    between = np.matmul(lt.astype(np.int64), lt.astype(np.int64)) > 0
    return lt & ~between


def _check_pair(size: int, pair: Sequence[int]) -> Tuple[int, int]:
    if len(pair) != 2:
        raise MalformedInputError(f"Order pair {list(pair)} must have two entries")
    x, y = int(pair[0]), int(pair[1])
    if not (0 <= x < size and 0 <= y < size):
        raise MalformedInputError(f"Order pair {list(pair)} has an index outside 0..{size - 1}")
    return x, y


def check_carrier(size: int) -> None:
    """Non-empty and within the structure cap, checked before any table is built"""
    if size < 1:
        raise MalformedInputError(f"Carrier must be non-empty, got size {size}")
    check_cap("carrier", size, get_config().structure_cap)


def _check_map(name: str, size: int, values: Sequence[int], codomain: Optional[int] = None) -> Tuple_:
    codomain = size if codomain is None else codomain
    if len(values) != size:
        raise MalformedInputError(f"{name} has {len(values)} entries, expected {size}")
    result = tuple(int(v) for v in values)
    for x, v in enumerate(result):
        if not 0 <= v < codomain:
            raise MalformedInputError(f"{name}({x}) = {v} is outside 0..{codomain - 1}")
    return result


# ---------------------------------------------------------------------------
# Signatures and generic structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    """Unary operation symbols and relation symbols with their arities"""
    ops: Tuple[Tuple[str, int], ...] = ()
    rels: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        names = [name for name, _ in self.ops] + [name for name, _ in self.rels]
        if len(names) != len(set(names)):
            raise MalformedInputError(f"Signature symbols must be unique: {names}")
        for name, arity in self.ops:
            if arity != 1:
                raise MalformedInputError(f"Operation {name} must be unary, got arity {arity}")
        for name, arity in self.rels:
            if arity < 1:
                raise MalformedInputError(f"Relation {name} needs a positive arity, got {arity}")

    @property
    def op_names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.ops)

    @property
    def rel_names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.rels)

    def arity(self, name: str) -> int:
        for symbol, arity in self.ops + self.rels:
            if symbol == name:
                return arity
        raise KeyError(name)


SPACE_SIGNATURE = Signature(ops=(("g", 1),), rels=(("leq", 2),))
UG_SIGNATURE = Signature(ops=(("u", 1),), rels=(("leq", 2),))
ALGEBRA_SIGNATURE = Signature(rels=(("join", 3), ("meet", 3), ("neg", 2), ("bot", 1), ("top", 1)))


@dataclass(frozen=True, eq=False)
class FinStructure:
    """
    Finite structure over a signature of unary operations and relations.

    Attributes:
        signature: declared symbols
        size: carrier is 0..size-1
        ops: one table per operation symbol
        rels: one tuple set per relation symbol
        labels: optional display names
    """
    signature: Signature
    size: int
    ops: Mapping[str, Tuple_]
    rels: Mapping[str, FrozenSet[Tuple_]]
    labels: Optional[Tuple[str, ...]] = field(default=None)

    def __post_init__(self):
        if self.size < 1:
            raise MalformedInputError(f"Carrier must be non-empty, got size {self.size}")
        ops: Dict[str, Tuple_] = {}
        for name in self.signature.op_names:
            if name not in self.ops:
                raise MalformedInputError(f"Missing table for operation {name}")
            ops[name] = _check_map(name, self.size, self.ops[name])
        rels: Dict[str, FrozenSet[Tuple_]] = {}
        for name, arity in self.signature.rels:
            if name not in self.rels:
                raise MalformedInputError(f"Missing tuples for relation {name}")
            tuples = set()
            for t in self.rels[name]:
                t = tuple(int(v) for v in t)
                if len(t) != arity:
                    raise MalformedInputError(f"Tuple {list(t)} of {name} does not have arity {arity}")
                if any(not 0 <= v < self.size for v in t):
                    raise MalformedInputError(f"Tuple {list(t)} of {name} leaves the carrier")
                tuples.add(t)
            rels[name] = frozenset(tuples)
        extra = set(self.ops) - set(ops) | set(self.rels) - set(rels)
        if extra:
            raise MalformedInputError(f"Symbols not in the signature: {sorted(extra)}")
        if self.labels is not None and len(self.labels) != self.size:
            raise MalformedInputError(f"Expected {self.size} labels, got {len(self.labels)}")
        object.__setattr__(self, "ops", ops)
        object.__setattr__(self, "rels", rels)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))

    @cached_property
    def key(self) -> Tuple:
        """Canonical value key (labels excluded)"""
        return (
            self.signature,
            self.size,
            tuple(self.ops[name] for name in self.signature.op_names),
            tuple(tuple(sorted(self.rels[name])) for name in self.signature.rel_names),
        )

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, FinStructure) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"FinStructure(size={self.size}, ops={list(self.ops)}, rels={list(self.rels)})"

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    def sorted_tuples(self, name: str) -> List[Tuple_]:
        return sorted(self.rels[name])

    def as_structure(self) -> "FinStructure":
        return self

    def with_labels(self, labels: Optional[Sequence[str]]) -> "FinStructure":
        return FinStructure(self.signature, self.size, self.ops, self.rels,
                            tuple(labels) if labels is not None else None)


# ---------------------------------------------------------------------------
# Ockham spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OckhamSpace:
    """
    Finite poset with an order-reversing self-map g.

    The constructor only checks shapes and index ranges; use
    space_from_pairs or validate_ockham_space for the axioms.
    """
    size: int
    leq: np.ndarray
    g: Tuple_
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        check_carrier(self.size)
        leq = np.array(self.leq, dtype=bool)
        if leq.shape != (self.size, self.size):
            raise MalformedInputError(f"Order matrix has shape {leq.shape}, expected {(self.size, self.size)}")
        object.__setattr__(self, "leq", _readonly(leq))
        object.__setattr__(self, "g", _check_map("g", self.size, self.g))
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise MalformedInputError(f"Expected {self.size} labels, got {len(self.labels)}")
            object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))

    @cached_property
    def key(self) -> Tuple:
        return (self.size, self.leq.tobytes(), self.g)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, OckhamSpace) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"OckhamSpace(size={self.size}, covers={self.cover_pairs}, g={list(self.g)})"

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y])

    @cached_property
    def leq_pairs(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset((int(x), int(y)) for x, y in np.argwhere(self.leq))

    @cached_property
    def cover_pairs(self) -> List[Tuple[int, int]]:
        return [(int(x), int(y)) for x, y in np.argwhere(covers_of(self.leq))]

    @cached_property
    def maximal(self) -> Tuple[int, ...]:
        return tuple(x for x in range(self.size) if self.leq[x].sum() == 1)

    @cached_property
    def minimal(self) -> Tuple[int, ...]:
        return tuple(x for x in range(self.size) if self.leq[:, x].sum() == 1)

    def up_set(self, x: int) -> Tuple[int, ...]:
        return tuple(int(y) for y in np.flatnonzero(self.leq[x]))

    def down_set(self, x: int) -> Tuple[int, ...]:
        return tuple(int(y) for y in np.flatnonzero(self.leq[:, x]))

    def is_antichain(self) -> bool:
        return len(self.leq_pairs) == self.size

    @cached_property
    def structure(self) -> FinStructure:
        return FinStructure(SPACE_SIGNATURE, self.size, {"g": self.g}, {"leq": self.leq_pairs}, self.labels)

    def as_structure(self) -> FinStructure:
        return self.structure


def space_from_pairs(size: int, leq_pairs: Iterable[Sequence[int]], g: Sequence[int],
                     labels: Optional[Sequence[str]] = None, check: bool = True) -> OckhamSpace:
    """
    Build a space from a generating set of order pairs.

    Takes the reflexive-transitive closure, then validates antisymmetry and
    order reversal.

    Raises:
        MalformedInputError: bad indices, or the axioms fail and check is set
        ResourceCapError: size above the structure cap
    """
    check_carrier(size)
    space = OckhamSpace(size, order_closure(size, leq_pairs), tuple(g),
                        tuple(labels) if labels is not None else None)
    if check:
        report = validate_ockham_space(space)
        if not report.ok:
            raise MalformedInputError(f"Not an Ockham space: {report.summary()}")
    return space


def order_dual(X: OckhamSpace) -> OckhamSpace:
    """Same carrier and g with the order reversed"""
    return OckhamSpace(X.size, X.leq.T.copy(), X.g, X.labels)


def permute_space(X: OckhamSpace, order: Sequence[int]) -> OckhamSpace:
    """Relabel so that new element i is old element order[i]"""
    order = list(order)
    if sorted(order) != list(range(X.size)):
        raise MalformedInputError(f"{order} is not a permutation of 0..{X.size - 1}")
    inverse = {old: new for new, old in enumerate(order)}
    leq = X.leq[np.ix_(order, order)]
    g = tuple(inverse[X.g[old]] for old in order)
    labels = tuple(X.labels[old] for old in order) if X.labels else None
    return OckhamSpace(X.size, leq, g, labels)


# ---------------------------------------------------------------------------
# Bounded lattices and Ockham algebras
# ---------------------------------------------------------------------------

def _check_lattice_fields(L) -> None:
    """Shared constructor checks for the join and meet tables, the bounds and labels"""
    for name in ("join", "meet"):
        table = np.array(getattr(L, name), dtype=np.int64)
        if table.shape != (L.size, L.size):
            raise MalformedInputError(f"{name} table has shape {table.shape}, expected {(L.size, L.size)}")
        if table.size and (table.min() < 0 or table.max() >= L.size):
            bad = np.argwhere((table < 0) | (table >= L.size))[0]
            raise MalformedInputError(f"{name}{tuple(int(v) for v in bad)} is outside the carrier")
        object.__setattr__(L, name, _readonly(table))
    for name in ("bot", "top"):
        value = int(getattr(L, name))
        if not 0 <= value < L.size:
            raise MalformedInputError(f"{name} = {value} is outside the carrier")
        object.__setattr__(L, name, value)
    if L.labels is not None:
        if len(L.labels) != L.size:
            raise MalformedInputError(f"Expected {L.size} labels, got {len(L.labels)}")
        object.__setattr__(L, "labels", tuple(str(label) for label in L.labels))


@dataclass(frozen=True, eq=False)
class OckhamAlgebra:
    """
    Bounded distributive lattice with a dual endomorphism neg.

    join and meet are size x size tables; bot and top are the 0 and 1.
    """
    size: int
    join: np.ndarray
    meet: np.ndarray
    neg: Tuple_
    bot: int
    top: int
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 1:
            raise MalformedInputError(f"Carrier must be non-empty, got size {self.size}")
        _check_lattice_fields(self)
        object.__setattr__(self, "neg", _check_map("neg", self.size, self.neg))

    @cached_property
    def key(self) -> Tuple:
        return (self.size, self.join.tobytes(), self.meet.tobytes(), self.neg, self.bot, self.top)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, OckhamAlgebra) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"OckhamAlgebra(size={self.size}, neg={list(self.neg)})"

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    @cached_property
    def join_rows(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in row) for row in self.join)

    @cached_property
    def meet_rows(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in row) for row in self.meet)

    @cached_property
    def leq(self) -> np.ndarray:
        return _readonly(self.meet == np.arange(self.size)[:, None])

    def le(self, x: int, y: int) -> bool:
        return self.meet_rows[x][y] == x

    @property
    def is_trivial(self) -> bool:
        return self.size == 1 or self.bot == self.top

    @cached_property
    def structure(self) -> FinStructure:
        """Operations encoded as graph relations, so morphisms are homomorphisms"""
        n = range(self.size)
        rels = {
            "join": frozenset((x, y, self.join_rows[x][y]) for x in n for y in n),
            "meet": frozenset((x, y, self.meet_rows[x][y]) for x in n for y in n),
            "neg": frozenset((x, self.neg[x]) for x in n),
            "bot": frozenset({(self.bot,)}),
            "top": frozenset({(self.top,)}),
        }
        return FinStructure(ALGEBRA_SIGNATURE, self.size, {}, rels, self.labels)

    def as_structure(self) -> FinStructure:
        return self.structure


def _lattice_tables(size: int, leq_pairs: Iterable[Sequence[int]]) -> Tuple[np.ndarray, np.ndarray, int, int]:
    check_carrier(size)
    leq = order_closure(size, leq_pairs)
    join = np.zeros((size, size), dtype=np.int64)
    meet = np.zeros((size, size), dtype=np.int64)
    for x in range(size):
        for y in range(size):
            join[x, y] = _bound(leq, x, y, upper=True)
            meet[x, y] = _bound(leq, x, y, upper=False)
    bottoms = [x for x in range(size) if leq[x].all()]
    tops = [x for x in range(size) if leq[:, x].all()]
    if not bottoms or not tops:
        raise MalformedInputError("Order has no least or no greatest element")
    return join, meet, bottoms[0], tops[0]


def algebra_from_order(size: int, leq_pairs: Iterable[Sequence[int]], neg: Sequence[int],
                       labels: Optional[Sequence[str]] = None, check: bool = True) -> OckhamAlgebra:
    """
    Build an algebra from a lattice order and a negation map.

    Raises:
        MalformedInputError: the order is not a lattice, or the axioms fail
        ResourceCapError: size above the structure cap
    """
    join, meet, bot, top = _lattice_tables(size, leq_pairs)
    algebra = OckhamAlgebra(size, join, meet, tuple(neg), bot, top,
                            tuple(labels) if labels is not None else None)
    if check:
        report = validate_ockham_algebra(algebra)
        if not report.ok:
            raise MalformedInputError(f"Not an Ockham algebra: {report.summary()}")
    return algebra


def _bound(leq: np.ndarray, x: int, y: int, upper: bool) -> int:
    bounds = np.flatnonzero(leq[x] & leq[y]) if upper else np.flatnonzero(leq[:, x] & leq[:, y])
    for b in bounds:
        others = leq[b, bounds] if upper else leq[bounds, b]
        if others.all():
            return int(b)
    kind = "join" if upper else "meet"
    raise MalformedInputError(f"Not a lattice: {x} and {y} have no {kind}")


@dataclass(frozen=True, eq=False)
class BoundedLattice:
    """
    Lattice with both bounds as constants and no further operations.

    Compatible relations over it are the sublattices of its powers that
    contain the constant tuples, so 2-element chains admit the order.
    """
    size: int
    join: np.ndarray
    meet: np.ndarray
    bot: int
    top: int
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        check_carrier(self.size)
        _check_lattice_fields(self)

    @cached_property
    def key(self) -> Tuple:
        return (self.size, self.join.tobytes(), self.meet.tobytes(), self.bot, self.top)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, BoundedLattice) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"BoundedLattice(size={self.size}, bot={self.bot}, top={self.top})"

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    @cached_property
    def join_rows(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in row) for row in self.join)

    @cached_property
    def meet_rows(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in row) for row in self.meet)

    @cached_property
    def cover_pairs(self) -> List[Tuple[int, int]]:
        leq = self.meet == np.arange(self.size)[:, None]
        return [(int(x), int(y)) for x, y in np.argwhere(covers_of(leq))]


def lattice_from_order(size: int, leq_pairs: Iterable[Sequence[int]],
                       labels: Optional[Sequence[str]] = None) -> BoundedLattice:
    """
    Build a bounded lattice from a generating set of order pairs.

    Raises:
        MalformedInputError: the order is not a bounded lattice
        ResourceCapError: size above the structure cap
    """
    join, meet, bot, top = _lattice_tables(size, leq_pairs)
    return BoundedLattice(size, join, meet, bot, top, tuple(labels) if labels is not None else None)


def permute_algebra(A: OckhamAlgebra, order: Sequence[int]) -> OckhamAlgebra:
    """Relabel so that new element i is old element order[i]"""
    order = list(order)
    if sorted(order) != list(range(A.size)):
        raise MalformedInputError(f"{order} is not a permutation of 0..{A.size - 1}")
    inverse = np.empty(A.size, dtype=np.int64)
    inverse[order] = np.arange(A.size)
    join = inverse[A.join[np.ix_(order, order)]]
    meet = inverse[A.meet[np.ix_(order, order)]]
    neg = tuple(int(inverse[A.neg[old]]) for old in order)
    labels = tuple(A.labels[old] for old in order) if A.labels else None
    return OckhamAlgebra(A.size, join, meet, neg, int(inverse[A.bot]), int(inverse[A.top]), labels)


def subalgebra(A: OckhamAlgebra, subset: Iterable[int]) -> Tuple[OckhamAlgebra, Tuple[int, ...]]:
    """
    Induced subalgebra on a subuniverse.

    Returns:
        (subalgebra, index map into A)
    """
    elements = tuple(sorted(set(int(x) for x in subset)))
    if not elements:
        raise MalformedInputError("Subalgebra carrier must be non-empty")
    position = {x: i for i, x in enumerate(elements)}
    for x in elements:
        if A.neg[x] not in position:
            raise MalformedInputError(f"neg({x}) = {A.neg[x]} is not in the subset")
        for y in elements:
            for name, rows in (("join", A.join_rows), ("meet", A.meet_rows)):
                if rows[x][y] not in position:
                    raise MalformedInputError(f"{name}({x},{y}) = {rows[x][y]} is not in the subset")
    for name in ("bot", "top"):
        if getattr(A, name) not in position:
            raise MalformedInputError(f"{name} = {getattr(A, name)} is not in the subset")
    join = [[position[A.join_rows[x][y]] for y in elements] for x in elements]
    meet = [[position[A.meet_rows[x][y]] for y in elements] for x in elements]
    neg = tuple(position[A.neg[x]] for x in elements)
    labels = tuple(A.labels[x] for x in elements) if A.labels else None
    sub = OckhamAlgebra(len(elements), np.array(join), np.array(meet), neg,
                        position[A.bot], position[A.top], labels)
    return sub, elements


def product_algebra(A: OckhamAlgebra, B: OckhamAlgebra) -> OckhamAlgebra:
    """Direct product; pairs are listed lexicographically"""
    pairs = list(itertools.product(range(A.size), range(B.size)))
    index = {pair: i for i, pair in enumerate(pairs)}
    n = len(pairs)
    join = np.zeros((n, n), dtype=np.int64)
    meet = np.zeros((n, n), dtype=np.int64)
    for i, (a, b) in enumerate(pairs):
        for j, (c, d) in enumerate(pairs):
            join[i, j] = index[(A.join_rows[a][c], B.join_rows[b][d])]
            meet[i, j] = index[(A.meet_rows[a][c], B.meet_rows[b][d])]
    neg = tuple(index[(A.neg[a], B.neg[b])] for a, b in pairs)
    labels = tuple(f"({A.label(a)},{B.label(b)})" for a, b in pairs)
    return OckhamAlgebra(n, join, meet, neg, index[(A.bot, B.bot)], index[(A.top, B.top)], labels)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass
class Violation:
    """One failed axiom with the first witness found"""
    axiom: str
    witness: Tuple[int, ...]


@dataclass
class ValidationReport:
    """Outcome of an axiom check"""
    kind: str
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> List[str]:
        return [v.axiom for v in self.violations]

    def summary(self) -> str:
        if self.ok:
            return "OK"
        return "; ".join(f"{v.axiom} {list(v.witness)}" for v in self.violations)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "ok": self.ok,
            "violations": [{"axiom": v.axiom, "witness": list(v.witness)} for v in self.violations],
        }

    def _check(self, axiom: str, failures: np.ndarray) -> None:
        hits = np.argwhere(failures)
        if len(hits):
            self.violations.append(Violation(axiom, tuple(int(v) for v in hits[0])))


def _raw_space(candidate: Union[OckhamSpace, Mapping[str, Any]]) -> Tuple[int, np.ndarray, np.ndarray]:
    if isinstance(candidate, OckhamSpace):
        return candidate.size, candidate.leq, np.array(candidate.g)
    try:
        size = int(candidate["size"])
        g = candidate["g"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInputError(f"Space data needs size and g: {exc}") from None
    if size < 1:
        raise MalformedInputError(f"Carrier must be non-empty, got size {size}")
    g = np.array(_check_map("g", size, g))
    if "leq" in candidate:
        leq = np.array(candidate["leq"], dtype=bool)
        if leq.shape != (size, size):
            raise MalformedInputError(f"Order matrix has shape {leq.shape}, expected {(size, size)}")
    elif "leq_pairs" in candidate:
        leq = order_closure(size, candidate["leq_pairs"])
    else:
        raise MalformedInputError("Space data needs leq or leq_pairs")
    return size, leq, g


def validate_ockham_space(candidate: Union[OckhamSpace, Mapping[str, Any]]) -> ValidationReport:
    """
    Check the Ockham space axioms.

    Args:
        candidate: an OckhamSpace, or raw data with size, g and either a full
            leq matrix or leq_pairs (closed before checking)

    Returns:
        Report with one entry per violated axiom

    Raises:
        MalformedInputError: ill-formed shapes or indices
    """
    size, leq, g = _raw_space(candidate)
    report = ValidationReport("ockham_space")
    eye = np.eye(size, dtype=bool)
    report._check("reflexive", eye & ~leq)
    report._check("antisymmetric", leq & leq.T & ~eye)
    # leq[x,y] and leq[y,z] but not leq[x,z]
    report._check("transitive", leq[:, :, None] & leq[None, :, :] & ~leq[:, None, :])
    reversed_ = leq[np.ix_(g, g)].T
    report._check("order-reversing", leq & ~reversed_)
    return report


def _raw_algebra(candidate: Union[OckhamAlgebra, Mapping[str, Any]]) -> OckhamAlgebra:
    if isinstance(candidate, OckhamAlgebra):
        return candidate
    try:
        return OckhamAlgebra(int(candidate["size"]), candidate["join"], candidate["meet"],
                             tuple(candidate["neg"]), int(candidate["bot"]), int(candidate["top"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, MalformedInputError):
            raise
        raise MalformedInputError(f"Algebra data needs size, join, meet, neg, bot, top: {exc}") from None


def validate_ockham_algebra(candidate: Union[OckhamAlgebra, Mapping[str, Any]]) -> ValidationReport:
    """
    Check the bounded distributive lattice axioms and the De Morgan laws for neg.

    Returns:
        Report with one entry per violated axiom

    Raises:
        MalformedInputError: ill-formed shapes or indices
    """
    A = _raw_algebra(candidate)
    J, M, N = A.join, A.meet, np.array(A.neg)
    x = np.arange(A.size)
    report = ValidationReport("ockham_algebra")
    for name, T in (("join", J), ("meet", M)):
        report._check(f"{name} idempotent", T[x, x] != x)
        report._check(f"{name} commutative", T != T.T)
        report._check(f"{name} associative", T[T] != T[x[:, None, None], T[None, :, :]])
    report._check("absorption x∨(x∧y) ≈ x", J[x[:, None], M] != x[:, None])
    report._check("absorption x∧(x∨y) ≈ x", M[x[:, None], J] != x[:, None])
    report._check("distributive", M[x[:, None, None], J[None, :, :]] != J[M[:, :, None], M[:, None, :]])
    report._check("0 ∨ x ≈ x", J[A.bot] != x)
    report._check("1 ∧ x ≈ x", M[A.top] != x)
    if N[A.bot] != A.top:
        report.violations.append(Violation("f(0) ≈ 1", (A.bot,)))
    if N[A.top] != A.bot:
        report.violations.append(Violation("f(1) ≈ 0", (A.top,)))
    report._check("f(x∨y) ≈ f(x)∧f(y)", N[J] != M[N[:, None], N[None, :]])
    report._check("f(x∧y) ≈ f(x)∨f(y)", N[M] != J[N[:, None], N[None, :]])
    return report


# ---------------------------------------------------------------------------
# Substructures and powers
# ---------------------------------------------------------------------------

StructureLike = Union[FinStructure, OckhamSpace]


def induced_substructure(M: StructureLike, subset: Iterable[int]) -> Tuple[StructureLike, Tuple[int, ...]]:
    """
    Restrict to an op-closed subset and reindex.

    Returns:
        (substructure of the same kind, index map) where index map[i] is the
        original element behind new element i

    Raises:
        MalformedInputError: empty subset, bad index, or an operation leaves it
    """
    elements = tuple(sorted(set(int(x) for x in subset)))
    if not elements:
        raise MalformedInputError("Substructure carrier must be non-empty")
    if elements[0] < 0 or elements[-1] >= M.size:
        raise MalformedInputError(f"Subset {list(elements)} leaves the carrier 0..{M.size - 1}")
    position = {x: i for i, x in enumerate(elements)}
    if isinstance(M, OckhamSpace):
        for x in elements:
            if M.g[x] not in position:
                raise MalformedInputError(f"g({x}) = {M.g[x]} is not in the subset")
        leq = M.leq[np.ix_(elements, elements)]
        g = tuple(position[M.g[x]] for x in elements)
        labels = tuple(M.labels[x] for x in elements) if M.labels else None
        return OckhamSpace(len(elements), leq, g, labels), elements
    ops = {}
    for name, table in M.ops.items():
        for x in elements:
            if table[x] not in position:
                raise MalformedInputError(f"{name}({x}) = {table[x]} is not in the subset")
        ops[name] = tuple(position[table[x]] for x in elements)
    rels = {
        name: frozenset(tuple(position[v] for v in t) for t in tuples if all(v in position for v in t))
        for name, tuples in M.rels.items()
    }
    labels = tuple(M.labels[x] for x in elements) if M.labels else None
    return FinStructure(M.signature, len(elements), ops, rels, labels), elements


def power_coordinates(index: int, base: int, n: int) -> Tuple[int, ...]:
    """Coordinates of a power element (lexicographic carrier order)"""
    coords = []
    for _ in range(n):
        index, digit = divmod(index, base)
        coords.append(digit)
    return tuple(reversed(coords))


def power_index(coords: Sequence[int], base: int) -> int:
    index = 0
    for digit in coords:
        index = index * base + digit
    return index


def power_structure(M: StructureLike, n: int) -> FinStructure:
    """
    The n-th power: carrier of n-tuples in lexicographic order, operations
    pointwise, relations componentwise.

    Raises:
        ResourceCapError: |M|^n above the power cap
    """
    if n < 1:
        raise MalformedInputError(f"Power exponent must be positive, got {n}")
    S = M.as_structure()
    check_cap("power carrier", S.size ** n, get_config().power_cap)
    carrier = list(itertools.product(range(S.size), repeat=n))
    ops = {
        name: tuple(power_index([table[c] for c in coords], S.size) for coords in carrier)
        for name, table in S.ops.items()
    }
    rels = {}
    for name, arity in S.signature.rels:
        tuples = set()
        for choice in itertools.product(S.sorted_tuples(name), repeat=n):
            tuples.add(tuple(power_index([choice[c][p] for c in range(n)], S.size) for p in range(arity)))
        rels[name] = frozenset(tuples)
    labels = tuple("(" + ",".join(S.label(c) for c in coords) + ")" for coords in carrier) if n > 1 else S.labels
    logger.debug(f"Power {n} of a {S.size}-element structure: {len(carrier)} elements")
    return FinStructure(S.signature, len(carrier), ops, rels, labels)


def disjoint_union(M: FinStructure, N: FinStructure) -> FinStructure:
    """M followed by N shifted by |M|"""
    if M.signature != N.signature:
        raise MalformedInputError("Disjoint union needs a common signature")
    shift = M.size
    ops = {name: M.ops[name] + tuple(v + shift for v in N.ops[name]) for name in M.signature.op_names}
    rels = {
        name: M.rels[name] | frozenset(tuple(v + shift for v in t) for t in N.rels[name])
        for name in M.signature.rel_names
    }
    labels = None
    if M.labels or N.labels:
        labels = tuple(M.label(x) for x in range(M.size)) + tuple(N.label(x) for x in range(N.size))
    return FinStructure(M.signature, M.size + N.size, ops, rels, labels)
