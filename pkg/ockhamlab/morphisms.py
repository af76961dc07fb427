"""
Morphism engine for finite structures
Homomorphism, embedding and surjection search by backtracking with
arc consistency, isomorphism testing, divisor (HS) membership, cycle
analysis, generation and ISP membership by separation.
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from .config import get_config
from .errors import MalformedInputError, check_cap
from .kernel import get_kernel
from .structures import FinStructure, OckhamAlgebra, OckhamSpace, induced_substructure

logger = logging.getLogger(__name__)

Structure = Union[FinStructure, OckhamSpace, OckhamAlgebra]
Map = Tuple[int, ...]

# Upper bound on op-closed subsets visited by a divisor search
MAX_CLOSED_SUBSETS = 1 << 16


class SearchMode(str, Enum):
    ALL = "all"
    FIRST = "first"
    SURJECTIVE = "surjective"
    INJECTIVE = "injective"
    EMBEDDING = "embedding"


@dataclass(frozen=True, eq=False)
class Morphism:
    """A map between structures of one signature, given by target indices"""
    source: Any
    target: Any
    map: Map

    def __call__(self, x: int) -> int:
        return self.map[x]

    def __eq__(self, other: Any) -> bool:
        return (isinstance(other, Morphism) and self.map == other.map
                and self.source.key == other.source.key and self.target.key == other.target.key)

    def __hash__(self) -> int:
        return hash(self.map)

    def __repr__(self) -> str:
        return f"Morphism({list(self.map)})"

    @property
    def image(self) -> FrozenSet[int]:
        return frozenset(self.map)

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.size

    def then(self, other: "Morphism") -> "Morphism":
        """other after self"""
        return Morphism(self.source, other.target, tuple(other.map[y] for y in self.map))

    def is_valid(self) -> bool:
        return violated_constraint(self.source, self.target, self.map) is None

    def to_dict(self) -> Dict[str, Any]:
        return {"map": list(self.map)}


@dataclass(frozen=True)
class Cycle:
    """g(c_i) = c_(i+1 mod m), starting at the least element"""
    elements: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.elements)

    @property
    def parity(self) -> str:
        return "even" if self.length % 2 == 0 else "odd"

    @property
    def is_odd(self) -> bool:
        return self.length % 2 == 1


@dataclass
class DivisorWitness:
    """Z is an op-closed subset of the larger structure mapping onto the smaller one"""
    subset: Tuple[int, ...]
    substructure: Any
    surjection: Morphism

    def to_dict(self) -> Dict[str, Any]:
        return {"subset": list(self.subset), "surjection": list(self.surjection.map)}


@dataclass
class IspReport:
    """ISP membership outcome with the separating morphisms used"""
    member: bool
    family: List[Morphism] = field(default_factory=list)
    failure: Optional[str] = None


def _pair(X: Structure, Y: Structure) -> Tuple[FinStructure, FinStructure]:
    SX, SY = X.as_structure(), Y.as_structure()
    if SX.signature != SY.signature:
        raise MalformedInputError(f"Signature mismatch: {SX.signature} vs {SY.signature}")
    return SX, SY


# ---------------------------------------------------------------------------
# Direct checks
# ---------------------------------------------------------------------------

def violated_constraint(X: Structure, Y: Structure, mapping: Sequence[int]) -> Optional[Tuple[str, Tuple[int, ...]]]:
    """
    First constraint a map breaks, or None for a morphism.
    Operations are checked before relations, tuples in sorted order.
    """
    SX, SY = _pair(X, Y)
    if len(mapping) != SX.size or any(not 0 <= v < SY.size for v in mapping):
        raise MalformedInputError(f"Map {list(mapping)} is not total from {SX.size} into {SY.size} elements")
    for name in SX.signature.op_names:
        fx, fy = SX.ops[name], SY.ops[name]
        for x in range(SX.size):
            if mapping[fx[x]] != fy[mapping[x]]:
                return name, (x,)
    for name in SX.signature.rel_names:
        target = SY.rels[name]
        for t in SX.sorted_tuples(name):
            if tuple(mapping[v] for v in t) not in target:
                return name, t
    return None


def is_morphism(X: Structure, Y: Structure, mapping: Sequence[int]) -> bool:
    return violated_constraint(X, Y, mapping) is None


def unreflected_tuple(X: Structure, Y: Structure, mapping: Sequence[int]) -> Optional[Tuple[str, Tuple[int, ...]]]:
    """A target tuple inside the image whose preimage is not a source tuple"""
    SX, SY = _pair(X, Y)
    preimage: Dict[int, List[int]] = {}
    for x, y in enumerate(mapping):
        preimage.setdefault(y, []).append(x)
    for name in SX.signature.rel_names:
        source = SX.rels[name]
        for t in SY.sorted_tuples(name):
            if all(v in preimage for v in t):
                for pre in itertools.product(*(preimage[v] for v in t)):
                    if pre not in source:
                        return name, pre
    return None


def embedding_violation(X: Structure, Y: Structure, mapping: Sequence[int]) -> Optional[str]:
    """Why a map fails to be an embedding, or None"""
    if len(set(mapping)) != len(mapping):
        seen: Dict[int, int] = {}
        for x, y in enumerate(mapping):
            if y in seen:
                return f"not injective: {seen[y]} and {x} both map to {y}"
            seen[y] = x
    broken = violated_constraint(X, Y, mapping)
    if broken is not None:
        return f"{broken[0]} not preserved at {list(broken[1])}"
    unreflected = unreflected_tuple(X, Y, mapping)
    if unreflected is not None:
        return f"{unreflected[0]} not reflected at {list(unreflected[1])}"
    return None


# ---------------------------------------------------------------------------
# Backtracking search
# ---------------------------------------------------------------------------

class _Constraint:
    __slots__ = ("scope", "allowed", "repeats")

    def __init__(self, scope: Tuple[int, ...], allowed: FrozenSet[Tuple[int, ...]]):
        self.scope = scope
        self.allowed = allowed
        self.repeats = [(i, j) for i in range(len(scope)) for j in range(i + 1, len(scope)) if scope[i] == scope[j]]


class _HomSearch:
    """Maintains arc consistency over domains while assigning variables"""

    def __init__(self, X: FinStructure, Y: FinStructure, mode: SearchMode,
                 allowed: Optional[Mapping[int, Iterable[int]]], limit: Optional[int]):
        self.X, self.Y, self.mode, self.limit = X, Y, mode, limit
        self.injective = mode in (SearchMode.INJECTIVE, SearchMode.EMBEDDING)
        self.constraints: List[_Constraint] = []
        for name in X.signature.op_names:
            fx, fy = X.ops[name], Y.ops[name]
            graph = frozenset((b, fy[b]) for b in range(Y.size))
            for x in range(X.size):
                self.constraints.append(_Constraint((x, fx[x]), graph))
        for name in X.signature.rel_names:
            target = Y.rels[name]
            for t in X.sorted_tuples(name):
                self.constraints.append(_Constraint(t, target))
        self.watch: List[List[int]] = [[] for _ in range(X.size)]
        neighbours: List[Set[int]] = [set() for _ in range(X.size)]
        for index, constraint in enumerate(self.constraints):
            for var in set(constraint.scope):
                self.watch[var].append(index)
                neighbours[var].update(constraint.scope)
        self.order = sorted(range(X.size), key=lambda v: (-len(neighbours[v] - {v}), v))
        self.domains = [set(range(Y.size)) for _ in range(X.size)]
        if allowed:
            for var, values in allowed.items():
                self.domains[var] &= set(values)
        self.results: List[Map] = []
        self.nodes = 0

    def _revise(self, constraint: _Constraint, domains: List[Set[int]]) -> Optional[List[int]]:
        """Shrink domains in the constraint scope; None on a wipe-out, else changed variables"""
        scope = constraint.scope
        supports: List[Set[int]] = [set() for _ in scope]
        for t in constraint.allowed:
            if all(t[p] in domains[var] for p, var in enumerate(scope)) and \
                    all(t[i] == t[j] for i, j in constraint.repeats):
                for p, value in enumerate(t):
                    supports[p].add(value)
        changed = []
        for p, var in enumerate(scope):
            if len(supports[p]) < len(domains[var]):
                domains[var] &= supports[p]
                if not domains[var]:
                    return None
                changed.append(var)
        return changed

    def _propagate(self, domains: List[Set[int]], queue: Iterable[int]) -> bool:
        pending = deque(queue)
        queued = set(pending)
        while pending:
            index = pending.popleft()
            queued.discard(index)
            changed = self._revise(self.constraints[index], domains)
            if changed is None:
                return False
            for var in changed:
                for other in self.watch[var]:
                    if other not in queued:
                        queued.add(other)
                        pending.append(other)
        return True

    def run(self) -> List[Map]:
        if any(not d for d in self.domains):
            return []
        if self.X.size < self.Y.size and self.mode == SearchMode.SURJECTIVE:
            return []
        if self.X.size > self.Y.size and self.injective:
            return []
        if self._propagate(self.domains, range(len(self.constraints))):
            self._descend(0, self.domains, {})
        get_kernel().count_nodes(self.nodes)
        return self.results

    def _done(self) -> bool:
        return self.limit is not None and len(self.results) >= self.limit

    def _descend(self, depth: int, domains: List[Set[int]], assignment: Dict[int, int]) -> None:
        self.nodes += 1
        if depth == len(self.order):
            mapping = tuple(assignment[x] for x in range(self.X.size))
            if self.mode == SearchMode.SURJECTIVE and len(set(mapping)) != self.Y.size:
                return
            if self.mode == SearchMode.EMBEDDING and unreflected_tuple(self.X, self.Y, mapping) is not None:
                return
            self.results.append(mapping)
            return
        var = self.order[depth]
        for value in sorted(domains[var]):
            if self._done():
                return
            trial = [set(d) for d in domains]
            trial[var] = {value}
            touched = list(self.watch[var])
            if self.injective:
                wiped = False
                for other in self.order[depth + 1:]:
                    if value in trial[other]:
                        trial[other].discard(value)
                        if not trial[other]:
                            wiped = True
                            break
                        touched.extend(self.watch[other])
                if wiped:
                    continue
            assignment[var] = value
            if self.mode == SearchMode.SURJECTIVE and not self._cover_possible(depth, trial, assignment):
                del assignment[var]
                continue
            if self._propagate(trial, touched):
                self._descend(depth + 1, trial, assignment)
            del assignment[var]

    def _cover_possible(self, depth: int, domains: List[Set[int]], assignment: Dict[int, int]) -> bool:
        rest = self.order[depth + 1:]
        uncovered = set(range(self.Y.size)) - set(assignment.values())
        if len(uncovered) > len(rest):
            return False
        reachable: Set[int] = set()
        for var in rest:
            reachable |= domains[var]
        return uncovered <= reachable


def hom_search(X: Structure, Y: Structure, mode: Union[str, SearchMode] = SearchMode.ALL,
               allowed: Optional[Mapping[int, Iterable[int]]] = None,
               limit: Optional[int] = None) -> List[Morphism]:
    """
    Find morphisms X -> Y.

    Args:
        X, Y: structures of one signature (spaces and algebras are converted)
        mode: all, first, surjective, injective or embedding; embeddings are
            injective and reflect every relation
        allowed: optional per-element restriction of images
        limit: stop after this many results

    Returns:
        Morphisms sorted lexicographically by map; for mode first, the first
        one met in search order

    Raises:
        MalformedInputError: signature mismatch
    """
    mode = SearchMode(mode)
    SX, SY = _pair(X, Y)
    if mode == SearchMode.FIRST:
        limit = 1
    restriction = None
    if allowed:
        restriction = tuple(sorted((int(k), tuple(sorted(set(v)))) for k, v in allowed.items()))
    key = ("hom", SX.key, SY.key, mode.value, restriction, limit)

    def compute():
        search = _HomSearch(SX, SY, mode, dict(restriction) if restriction else None, limit)
        found = search.run()
        logger.debug(f"hom_search {SX.size}->{SY.size} mode={mode.value}: {len(found)} maps, {search.nodes} nodes")
        return tuple(found) if mode == SearchMode.FIRST else tuple(sorted(found))

    maps = get_kernel().cached(key, compute)
    return [Morphism(X, Y, m) for m in maps]


# ---------------------------------------------------------------------------
# Cycles and generation
# ---------------------------------------------------------------------------

def op_cycles(table: Sequence[int]) -> List[Tuple[int, ...]]:
    """Cycles of a self-map, each rotated to start at its least element, sorted"""
    found: Dict[int, Tuple[int, ...]] = {}
    for start in range(len(table)):
        position: Dict[int, int] = {}
        path: List[int] = []
        x = start
        while x not in position:
            position[x] = len(path)
            path.append(x)
            x = table[x]
        cycle = path[position[x]:]
        low = min(cycle)
        if low not in found:
            k = cycle.index(low)
            found[low] = tuple(cycle[k:] + cycle[:k])
    return [found[low] for low in sorted(found)]


def cycles(X: OckhamSpace) -> List[Cycle]:
    """All cycles of g, ordered by least element"""
    return [Cycle(c) for c in op_cycles(X.g)]


def generated_subset(M: Structure, seeds: Iterable[int]) -> Tuple[int, ...]:
    """Least op-closed subset containing the seeds"""
    S = M.as_structure()
    reached = set()
    pending = list(seeds)
    while pending:
        x = pending.pop()
        if x in reached:
            continue
        reached.add(x)
        for table in S.ops.values():
            pending.append(table[x])
    return tuple(sorted(reached))


def generated_substructure(M: Union[FinStructure, OckhamSpace], seeds: Iterable[int]):
    """
    Smallest op-closed substructure containing the seeds.

    Returns:
        (substructure, index map)
    """
    seeds = list(seeds)
    if not seeds:
        raise MalformedInputError("Generation needs at least one seed")
    return induced_substructure(M, generated_subset(M, seeds))


def is_one_generated(M: Union[FinStructure, OckhamSpace]) -> Optional[int]:
    """Least element generating everything, if any"""
    for x in range(M.size):
        if len(generated_subset(M, [x])) == M.size:
            return x
    return None


# ---------------------------------------------------------------------------
# Isomorphism and divisors
# ---------------------------------------------------------------------------

def _invariants(S: FinStructure) -> Tuple:
    parts: List[Any] = [S.size]
    for name in S.signature.op_names:
        table = S.ops[name]
        indegree = [0] * S.size
        for y in table:
            indegree[y] += 1
        parts.append((sorted(indegree), sorted(len(c) for c in op_cycles(table))))
    for name in S.signature.rel_names:
        tuples = S.rels[name]
        arity = S.signature.arity(name)
        profile = []
        for p in range(arity):
            counts = [0] * S.size
            for t in tuples:
                counts[t[p]] += 1
            profile.append(sorted(counts))
        parts.append((len(tuples), profile))
    return tuple(parts)


def isomorphic(X: Structure, Y: Structure) -> Optional[Morphism]:
    """An isomorphism X -> Y if one exists"""
    SX, SY = _pair(X, Y)
    if SX.size != SY.size or _invariants(SX) != _invariants(SY):
        return None
    found = hom_search(X, Y, SearchMode.EMBEDDING, limit=1)
    return found[0] if found else None


def closed_subsets(M: Structure, min_size: int = 1) -> List[Tuple[int, ...]]:
    """Op-closed subsets, smallest first, then lexicographically"""
    S = M.as_structure()
    singles = {generated_subset(S, [x]) for x in range(S.size)}
    found: Set[FrozenSet[int]] = {frozenset(s) for s in singles}
    frontier = list(found)
    while frontier:
        fresh = []
        for base in frontier:
            for single in singles:
                union = base | frozenset(single)
                if union not in found:
                    found.add(union)
                    fresh.append(union)
        check_cap("closed subsets", len(found), MAX_CLOSED_SUBSETS)
        frontier = fresh
    return sorted((tuple(sorted(s)) for s in found if len(s) >= min_size), key=lambda s: (len(s), s))


def _cycle_lengths_divide(small: FinStructure, big: FinStructure) -> bool:
    for name in small.signature.op_names:
        lengths = [len(c) for c in op_cycles(big.ops[name])]
        for c in op_cycles(small.ops[name]):
            if not any(length % len(c) == 0 for length in lengths):
                return False
    return True


def divisor(X: Structure, Y: Structure) -> Optional[DivisorWitness]:
    """
    Decide X in HS(Y): some op-closed Z of Y maps onto X.

    Returns:
        The witness for the first such Z (smallest, then lexicographic)
    """
    SX, SY = _pair(X, Y)
    check_cap("structure carrier", SY.size, get_config().structure_cap)
    for subset in closed_subsets(SY, min_size=SX.size):
        sub, _ = induced_substructure(Y, subset)
        if not _cycle_lengths_divide(SX, sub.as_structure()):
            continue
        found = hom_search(sub, X, SearchMode.SURJECTIVE, limit=1)
        if found:
            return DivisorWitness(subset, sub, found[0])
    return None


def verify_divisor(X: Structure, Y: Structure, witness: DivisorWitness) -> bool:
    """Re-check a divisor witness from scratch"""
    if generated_subset(Y, witness.subset) != tuple(sorted(witness.subset)):
        return False
    sub, _ = induced_substructure(Y, witness.subset)
    mapping = witness.surjection.map
    return is_morphism(sub, X, mapping) and len(set(mapping)) == X.size


# ---------------------------------------------------------------------------
# ISP membership
# ---------------------------------------------------------------------------

def isp_member(X: Structure, A: Structure) -> IspReport:
    """
    Decide whether X embeds in a finite power of A.

    True iff morphisms X -> A separate points and every relational failure;
    the report lists the separating morphisms used, in map order.
    """
    SX, SA = _pair(X, A)
    homs = hom_search(X, A, SearchMode.ALL)
    used: Dict[Map, Morphism] = {}

    def separator(test) -> Optional[Morphism]:
        for phi in homs:
            if test(phi.map):
                return phi
        return None

    for x, y in itertools.combinations(range(SX.size), 2):
        phi = separator(lambda m: m[x] != m[y])
        if phi is None:
            return IspReport(False, failure=f"points {x} and {y} are not separated")
        used.setdefault(phi.map, phi)
    for name, arity in SX.signature.rels:
        check_cap(f"tuples of {name}", SX.size ** arity, get_config().relation_cap)
        source, target = SX.rels[name], SA.rels[name]
        for t in itertools.product(range(SX.size), repeat=arity):
            if t in source:
                continue
            phi = separator(lambda m: tuple(m[v] for v in t) not in target)
            if phi is None:
                return IspReport(False, failure=f"{name} fails at {list(t)} but no morphism separates it")
            used.setdefault(phi.map, phi)
    return IspReport(True, family=[used[m] for m in sorted(used)])
