"""
Compatible relations and conjunct-atomic definability
Compatibility, subuniverse closure and enumeration, conjunct-atomic (CA)
definability and equivalence, direct decomposition, hom-set relations, the
equivalence-class census and the two hom-set definability criteria.

Tuples of A^k are indexed in lexicographic order (the same order as a
power structure), which lets atom extents be computed as numpy masks.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from .config import get_config
from .errors import ConsistencyError, MalformedInputError, check_cap
from .kernel import get_kernel
from .morphisms import Structure, generated_subset, hom_search
from .structures import BoundedLattice, FinStructure, OckhamAlgebra, induced_substructure

logger = logging.getLogger(__name__)

Tuple_ = Tuple[int, ...]


@dataclass(frozen=True)
class Relation:
    """A k-ary relation on a carrier of the given size"""
    size: int
    arity: int
    tuples: FrozenSet[Tuple_]

    def __post_init__(self):
        if self.arity < 1:
            raise MalformedInputError(f"Relations need a positive arity, got {self.arity}")
        if self.size < 1:
            raise MalformedInputError(f"Carrier must be non-empty, got size {self.size}")
        clean = set()
        for t in self.tuples:
            t = tuple(int(v) for v in t)
            if len(t) != self.arity:
                raise MalformedInputError(f"Tuple {list(t)} does not have arity {self.arity}")
            if any(not 0 <= v < self.size for v in t):
                raise MalformedInputError(f"Tuple {list(t)} leaves the carrier 0..{self.size - 1}")
            clean.add(t)
        object.__setattr__(self, "tuples", frozenset(clean))

    def __len__(self) -> int:
        return len(self.tuples)

    def __contains__(self, t: Sequence[int]) -> bool:
        return tuple(t) in self.tuples

    def __repr__(self) -> str:
        return f"Relation(arity={self.arity}, tuples={[list(t) for t in self.sorted_tuples]})"

    @cached_property
    def sorted_tuples(self) -> Tuple[Tuple_, ...]:
        return tuple(sorted(self.tuples))

    @property
    def sort_key(self) -> Tuple:
        return (self.arity, self.sorted_tuples)

    def is_full(self) -> bool:
        return len(self.tuples) == self.size ** self.arity

    @cached_property
    def codes(self) -> np.ndarray:
        """Lexicographic indices of the tuples in A^k, sorted"""
        if not self.tuples:
            return np.zeros(0, dtype=np.int64)
        return np.sort(np.array(self.sorted_tuples, dtype=np.int64) @ _powers(self.size, self.arity))

    def project(self, coords: Sequence[int]) -> "Relation":
        coords = tuple(coords)
        return Relation(self.size, len(coords), frozenset(tuple(t[c] for c in coords) for t in self.tuples))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "relation", "size": self.size, "arity": self.arity,
                "tuples": [list(t) for t in self.sorted_tuples]}


def _powers(base: int, k: int) -> np.ndarray:
    return base ** np.arange(k - 1, -1, -1, dtype=np.int64)


def full_tuples(size: int, k: int) -> np.ndarray:
    """All of A^k as an (size^k, k) array in lexicographic order"""
    check_cap(f"|A|^{k}", size ** k, get_config().relation_cap)
    grids = np.indices((size,) * k).reshape(k, -1).T
    return grids.astype(np.int64)


# ---------------------------------------------------------------------------
# Hosts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperationHost:
    """
    The operations a compatible relation must be closed under.

    Attributes:
        size: carrier is 0..size-1
        binary: size x size tables, as rows
        unary: one table per unary operation
        constants: elements whose constant tuples every relation contains
    """
    size: int
    binary: Tuple[Tuple[Tuple_, ...], ...] = ()
    unary: Tuple[Tuple_, ...] = ()
    constants: Tuple[int, ...] = ()

    @cached_property
    def binary_arrays(self) -> List[np.ndarray]:
        return [np.array(table, dtype=np.int64) for table in self.binary]

    @cached_property
    def unary_arrays(self) -> List[np.ndarray]:
        return [np.array(table, dtype=np.int64) for table in self.unary]

    @cached_property
    def commutative(self) -> List[bool]:
        return [bool((table == table.T).all()) for table in self.binary_arrays]


Host = Union[OperationHost, OckhamAlgebra, BoundedLattice, FinStructure]


def host_of(A: Host) -> OperationHost:
    """
    Operations of an algebra, a bounded lattice or a structure.

    Ockham algebras contribute join, meet, neg and both bounds; bounded
    lattices drop neg; a structure contributes its unary operations.
    """
    if isinstance(A, OperationHost):
        return A
    if isinstance(A, OckhamAlgebra):
        return OperationHost(A.size, (A.join_rows, A.meet_rows), (A.neg,), (A.bot, A.top))
    if isinstance(A, BoundedLattice):
        return OperationHost(A.size, (A.join_rows, A.meet_rows), (), (A.bot, A.top))
    if isinstance(A, FinStructure):
        return OperationHost(A.size, (), tuple(A.ops[name] for name in A.signature.op_names), ())
    raise MalformedInputError(f"Cannot host relations on {type(A).__name__}")


def _check_host(H: OperationHost, r: Relation) -> None:
    if r.size != H.size:
        raise MalformedInputError(f"Relation is over {r.size} elements but the host has {H.size}")


# ---------------------------------------------------------------------------
# Compatibility and closure
# ---------------------------------------------------------------------------

def is_compatible(A: Host, r: Relation) -> bool:
    """Non-empty, contains the constant tuples, closed under every operation of the host"""
    H = host_of(A)
    _check_host(H, r)
    if not r.tuples:
        return False
    if any((c,) * r.arity not in r.tuples for c in H.constants):
        return False
    T = np.array(r.sorted_tuples, dtype=np.int64)
    powers = _powers(H.size, r.arity)
    for table in H.unary_arrays:
        if not np.isin(table[T] @ powers, r.codes).all():
            return False
    for row in T:
        for table in H.binary_arrays:
            if not np.isin(table[row[None, :], T] @ powers, r.codes).all():
                return False
    return True


def generate_closure(A: Host, k: int, seeds: Iterable[Sequence[int]] = ()) -> Relation:
    """Least compatible k-ary relation containing the seeds"""
    H = host_of(A)
    check_cap(f"|A|^{k}", H.size ** k, get_config().relation_cap)
    members: List[Tuple_] = []
    found: Set[Tuple_] = set()
    pending: List[Tuple_] = [(c,) * k for c in H.constants]
    for seed in seeds:
        seed = tuple(int(v) for v in seed)
        if len(seed) != k or any(not 0 <= v < H.size for v in seed):
            raise MalformedInputError(f"Seed {list(seed)} is not in A^{k}")
        pending.append(seed)
    while pending:
        t = pending.pop()
        if t in found:
            continue
        found.add(t)
        members.append(t)
        for table in H.unary:
            pending.append(tuple(table[v] for v in t))
        for table, symmetric in zip(H.binary, H.commutative):
            for s in members:
                pending.append(tuple(table[a][b] for a, b in zip(t, s)))
                if not symmetric:
                    pending.append(tuple(table[b][a] for a, b in zip(t, s)))
    return Relation(H.size, k, frozenset(found))


class _IndexedPower:
    """Operations of the host lifted to indices of A^k"""

    def __init__(self, H: OperationHost, k: int):
        self.n = H.size ** k
        check_cap(f"|A|^{k}", self.n, get_config().relation_cap)
        C = full_tuples(H.size, k)
        powers = _powers(H.size, k)
        dtype = np.int16 if self.n < 2 ** 15 else np.int32
        self.unary = [(table[C] @ powers).tolist() for table in H.unary_arrays]
        self.binary = [
            ((table[C[:, None, :], C[None, :, :]] @ powers).astype(dtype), symmetric)
            for table, symmetric in zip(H.binary_arrays, H.commutative)
        ]
        self.constants = [int(np.full(k, c) @ powers) for c in H.constants]
        self.coords = C

    def close(self, bits: int) -> int:
        members = [i for i in range(self.n) if bits >> i & 1]
        pending = list(self.constants) + members
        closed = 0
        members = []
        while pending:
            i = pending.pop()
            if closed >> i & 1:
                continue
            closed |= 1 << i
            members.append(i)
            for table in self.unary:
                pending.append(table[i])
            for table, symmetric in self.binary:
                row = table[i]
                for j in members:
                    pending.append(int(row[j]))
                    if not symmetric:
                        pending.append(int(table[j, i]))
        return closed


def enumerate_compatible(A: Host, k: int) -> Iterator[Relation]:
    """
    All compatible k-ary relations, each exactly once, in lectic order
    (Next-Closure over generate_closure on tuple indices). The empty set
    is skipped for hosts without constants.
    """
    H = host_of(A)
    power = _IndexedPower(H, k)
    n = power.n
    current = power.close(0)
    count = 0
    while True:
        if current:
            yield _bits_to_relation(H.size, k, current, power.coords)
            count += 1
        for i in range(n - 1, -1, -1):
            if current >> i & 1:
                continue
            below = current & ((1 << i) - 1)
            candidate = power.close(below | 1 << i)
            if candidate & ((1 << i) - 1) == below:
                current = candidate
                break
        else:
            logger.debug(f"{count} compatible relations of arity {k} on {H.size} elements")
            return


def _bits_to_relation(size: int, k: int, bits: int, coords: np.ndarray) -> Relation:
    tuples = frozenset(tuple(int(v) for v in coords[i]) for i in range(len(coords)) if bits >> i & 1)
    return Relation(size, k, tuples)


# ---------------------------------------------------------------------------
# Conjunct-atomic definability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    """s(x_sigma(1), ..., x_sigma(l)) or x_i = x_j, with 0-based variables"""
    kind: str
    args: Tuple[int, ...]

    def text(self, symbol: str = "s") -> str:
        if self.kind == "eq":
            return f"x{self.args[0] + 1}=x{self.args[1] + 1}"
        return f"{symbol}(" + ",".join(f"x{i + 1}" for i in self.args) + ")"


@dataclass(frozen=True)
class CAFormula:
    """Conjunction of atoms over variables x1..xk; the empty conjunction is true"""
    arity: int
    atoms: Tuple[Atom, ...] = ()
    symbol: str = "s"

    def text(self) -> str:
        if not self.atoms:
            return "true"
        return " & ".join(atom.text(self.symbol) for atom in self.atoms)

    def evaluate(self, s: Relation) -> Relation:
        """The subset of A^k this formula defines from s"""
        return _mask_to_relation(s.size, self.arity, _formula_mask(self.atoms, s, self.arity))


def _atom_mask(atom: Atom, s: Relation, C: np.ndarray) -> np.ndarray:
    if atom.kind == "eq":
        i, j = atom.args
        return C[:, i] == C[:, j]
    codes = C[:, list(atom.args)] @ _powers(s.size, s.arity)
    return np.isin(codes, s.codes)


def _formula_mask(atoms: Sequence[Atom], s: Relation, k: int) -> np.ndarray:
    C = full_tuples(s.size, k)
    mask = np.ones(len(C), dtype=bool)
    for atom in atoms:
        mask &= _atom_mask(atom, s, C)
    return mask


def _mask_to_relation(size: int, k: int, mask: np.ndarray) -> Relation:
    C = full_tuples(size, k)
    return Relation(size, k, frozenset(tuple(int(v) for v in C[i]) for i in np.flatnonzero(mask)))


def containing_atoms(r: Relation, s: Relation) -> List[Atom]:
    """
    Every atom in s (and every equality) whose extent contains r.
    Relation atoms come in lexicographic order of their assignment, then equalities.
    """
    if r.size != s.size:
        raise MalformedInputError("Relations live on carriers of different sizes")
    k, l = r.arity, s.arity
    prefixes = [set() for _ in range(l + 1)]
    for t in s.tuples:
        for j in range(l + 1):
            prefixes[j].add(t[:j])
    rows = r.sorted_tuples
    atoms: List[Atom] = []

    def extend(sigma: List[int], partial: List[Tuple_]) -> None:
        depth = len(sigma)
        if depth == l:
            atoms.append(Atom("rel", tuple(sigma)))
            return
        for var in range(k):
            grown = [p + (row[var],) for p, row in zip(partial, rows)]
            if all(p in prefixes[depth + 1] for p in grown):
                sigma.append(var)
                extend(sigma, grown)
                sigma.pop()

    extend([], [() for _ in rows])
    for i, j in itertools.combinations(range(k), 2):
        if all(row[i] == row[j] for row in rows):
            atoms.append(Atom("eq", (i, j)))
    return atoms


def _reduced_atoms(r: Relation, s: Relation) -> Tuple[List[Atom], List[np.ndarray], np.ndarray]:
    """Containing atoms with full and duplicate extents dropped, plus their masks and r's mask"""
    C = full_tuples(r.size, r.arity)
    kept: List[Atom] = []
    masks: List[np.ndarray] = []
    seen: Set[bytes] = set()
    for atom in containing_atoms(r, s):
        mask = _atom_mask(atom, s, C)
        if mask.all():
            continue
        signature = np.packbits(mask).tobytes()
        if signature in seen:
            continue
        seen.add(signature)
        kept.append(atom)
        masks.append(mask)
    target = np.isin(C @ _powers(r.size, r.arity), r.codes)
    return kept, masks, target


def definable_hull(r: Relation, s: Relation) -> Relation:
    """Least relation CA-definable from s that contains r"""
    _, masks, target = _reduced_atoms(r, s)
    hull = np.ones(len(target), dtype=bool)
    for mask in masks:
        hull &= mask
    return _mask_to_relation(r.size, r.arity, hull)


def ca_definable(r: Relation, s: Relation, minimize: bool = True) -> Optional[CAFormula]:
    """
    A CA formula defining r from s, if one exists.

    r is definable iff it equals the intersection of all atoms containing it.
    With minimize set, atoms are dropped greedily (relation atoms from the
    last one backwards, then equalities) while the conjunction still defines r.
    """
    def compute():
        atoms, masks, target = _reduced_atoms(r, s)
        hull = np.ones(len(target), dtype=bool)
        for mask in masks:
            hull &= mask
        if not np.array_equal(hull, target):
            return None
        keep = list(range(len(atoms)))
        if minimize:
            order = [i for i in reversed(keep) if atoms[i].kind == "rel"] + \
                    [i for i in reversed(keep) if atoms[i].kind == "eq"]
            for i in order:
                rest = [j for j in keep if j != i]
                conj = np.ones(len(target), dtype=bool)
                for j in rest:
                    conj &= masks[j]
                if np.array_equal(conj, target):
                    keep = rest
        return CAFormula(r.arity, tuple(atoms[i] for i in keep))

    return get_kernel().cached(("ca", r, s, minimize), compute)


def equivalent(r: Relation, s: Relation) -> bool:
    """Each of r and s is CA-definable from the other"""
    return ca_definable(r, s, minimize=False) is not None and ca_definable(s, r, minimize=False) is not None


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------

@dataclass
class Decomposition:
    """r = p x q reassembled along the coordinate bipartition (first, second)"""
    first: Tuple[int, ...]
    second: Tuple[int, ...]
    p: Relation
    q: Relation


def decompose(r: Relation, proper: bool = False) -> Optional[Decomposition]:
    """
    First coordinate bipartition splitting r as a product, if any.

    Args:
        proper: also require both factors to be proper subsets of their full powers
    """
    if r.arity < 2:
        raise MalformedInputError("Decomposition needs arity at least 2")
    if not r.tuples:
        return None
    rest = list(range(1, r.arity))
    for size in range(0, len(rest)):
        for extra in itertools.combinations(rest, size):
            first = (0,) + extra
            second = tuple(c for c in rest if c not in extra)
            p, q = r.project(first), r.project(second)
            if len(p) * len(q) != len(r):
                continue
            if proper and (p.is_full() or q.is_full()):
                continue
            return Decomposition(first, second, p, q)
    return None


def product_relation(p: Relation, q: Relation, first: Sequence[int], second: Sequence[int]) -> Relation:
    """
    p x q with p on the coordinates `first` and q on `second`.

    Raises:
        MalformedInputError: coordinates do not partition 0..k-1 or do not match the arities
    """
    first, second = tuple(first), tuple(second)
    k = len(first) + len(second)
    if sorted(first + second) != list(range(k)):
        raise MalformedInputError(f"{list(first)} and {list(second)} do not partition 0..{k - 1}")
    if len(first) != p.arity or len(second) != q.arity or p.size != q.size:
        raise MalformedInputError("Factor arities or carriers do not match the coordinates")
    tuples = set()
    for a in p.tuples:
        for b in q.tuples:
            t = [0] * k
            for c, v in zip(first, a):
                t[c] = v
            for c, v in zip(second, b):
                t[c] = v
            tuples.add(tuple(t))
    return Relation(p.size, k, frozenset(tuples))


# ---------------------------------------------------------------------------
# Census
# ---------------------------------------------------------------------------

@dataclass
class CensusClass:
    representative: Relation
    count: int
    members: List[Relation] = field(default_factory=list)

    @property
    def arity(self) -> int:
        return self.representative.arity

    def to_dict(self) -> Dict[str, Any]:
        return {"representative": self.representative.to_dict(), "arity": self.arity, "count": self.count}


def _bucket(r: Relation) -> Tuple:
    return (r.arity, len(r), tuple(sorted(len(r.project([i])) for i in range(r.arity))))


def classify_relations(relations: Iterable[Relation]) -> List[CensusClass]:
    """
    Partition relations under `equivalent`.

    Each relation is compared with the class representatives, those sharing
    its (arity, cardinality, projection sizes) bucket first.
    """
    ordered = sorted(relations, key=lambda rel: rel.sort_key)
    classes: List[CensusClass] = []
    for r in ordered:
        bucket = _bucket(r)
        candidates = sorted(classes, key=lambda c: _bucket(c.representative) != bucket)
        for census_class in candidates:
            if equivalent(r, census_class.representative):
                census_class.count += 1
                census_class.members.append(r)
                break
        else:
            classes.append(CensusClass(r, 1, [r]))
    return sorted(classes, key=lambda c: c.representative.sort_key)


def census(A: Host, kmax: int, indecomposable_only: bool = False) -> List[CensusClass]:
    """
    Equivalence classes of the compatible relations of arity 1..kmax.

    A may be an Ockham algebra, a bounded lattice or a structure; relations
    are closed under whatever operations it carries.
    """
    H = host_of(A)
    relations = []
    for k in range(1, kmax + 1):
        for r in enumerate_compatible(H, k):
            if indecomposable_only and k >= 2 and decompose(r) is not None:
                continue
            relations.append(r)
    classes = classify_relations(relations)
    logger.info(f"Census up to arity {kmax}: {len(relations)} relations in {len(classes)} classes")
    return classes


# ---------------------------------------------------------------------------
# Hom-set relations and the definability criteria
# ---------------------------------------------------------------------------

def homset_relation(X: Structure, S: Iterable[int], A: Structure,
                    host: Optional[Host] = None) -> Relation:
    """
    {a restricted to S : a in hom(X, A)}, coordinates in ascending order of S.

    Raises:
        MalformedInputError: S empty or not generating X
        ConsistencyError: host given and the result is not compatible with it
    """
    S = tuple(sorted(set(int(x) for x in S)))
    if not S:
        raise MalformedInputError("The generating set must be non-empty")
    if len(generated_subset(X, S)) != X.size:
        raise MalformedInputError(f"{list(S)} does not generate the structure")
    homs = hom_search(X, A)
    r = Relation(A.size, len(S), frozenset(tuple(phi.map[x] for x in S) for phi in homs))
    if host is not None and not is_compatible(host, r):
        raise ConsistencyError("Hom-set relation is not compatible with the host")
    return r


def con1_criterion(X: Structure, S: Iterable[int], Y: Structure, T: Iterable[int], A: Structure) -> bool:
    """
    True iff every map S -> A not extending to a morphism X -> A is caught
    by some omega: Y -> X with omega(T) in S whose composite restricted to T
    does not extend to a morphism Y -> A.
    """
    S = tuple(sorted(set(S)))
    T = tuple(sorted(set(T)))
    check_cap("maps S -> A", A.size ** len(S), get_config().relation_cap)
    r = homset_relation(X, S, A)
    s = homset_relation(Y, T, A)
    position = {x: i for i, x in enumerate(S)}
    omegas = hom_search(Y, X, allowed={t: S for t in T})
    patterns = [tuple(position[omega.map[t]] for t in T) for omega in omegas]
    for phi in itertools.product(range(A.size), repeat=len(S)):
        if phi in r.tuples:
            continue
        if not any(tuple(phi[p] for p in pattern) not in s.tuples for pattern in patterns):
            return False
    return True


@dataclass
class Retraction:
    """rho: X -> Y fixing Y pointwise with rho(S) inside T"""
    subset: Tuple[int, ...]
    substructure: Any
    raw_map: Tuple[int, ...]
    map: Tuple[int, ...]


def con2_retraction(X: Union[FinStructure, Any], S: Iterable[int], Y: Iterable[int], T: Iterable[int],
                    A: Optional[Structure] = None) -> Optional[Retraction]:
    """
    A retraction of X onto its substructure Y sending S into T.

    Args:
        X: the structure
        S: generating set of X
        Y: op-closed subset of X
        T: subset of S inside Y
        A: when given, the induced definability of hom-set relations is checked

    Raises:
        ConsistencyError: a retraction exists but the definability check fails
    """
    S = tuple(sorted(set(S)))
    Y = tuple(sorted(set(Y)))
    T = tuple(sorted(set(T)))
    if not set(T) <= set(S) or not set(T) <= set(Y):
        raise MalformedInputError("T must lie inside both S and Y")
    substructure, _ = induced_substructure(X, Y)
    allowed: Dict[int, Set[int]] = {x: set(Y) for x in range(X.size)}
    for y in Y:
        allowed[y] = {y}
    for x in S:
        allowed[x] = allowed[x] & set(T)
    found = hom_search(X, X, "first", allowed=allowed)
    if not found:
        return None
    raw = found[0].map
    position = {y: i for i, y in enumerate(Y)}
    retraction = Retraction(Y, substructure, raw, tuple(position[v] for v in raw))
    if A is not None:
        big = homset_relation(X, S, A)
        small = homset_relation(substructure, [position[t] for t in T], A)
        if ca_definable(small, big, minimize=False) is None:
            raise ConsistencyError("Retraction found but the smaller hom-set relation is not CA-definable")
    return retraction


# ---------------------------------------------------------------------------
# Congruences
# ---------------------------------------------------------------------------

def set_partitions(n: int) -> Iterator[Tuple[int, ...]]:
    """Restricted growth strings of length n"""
    def grow(prefix: List[int], blocks: int) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for block in range(blocks + 1):
            prefix.append(block)
            yield from grow(prefix, max(blocks, block + 1))
            prefix.pop()

    if n == 0:
        yield ()
        return
    yield from grow([0], 1)


def congruences(A: Host) -> List[Relation]:
    """All congruences, as binary relations"""
    found = []
    for blocks in set_partitions(A.size):
        pairs = frozenset((a, b) for a in range(A.size) for b in range(A.size) if blocks[a] == blocks[b])
        theta = Relation(A.size, 2, pairs)
        if is_compatible(A, theta):
            found.append(theta)
    return found


def compose(theta: Relation, psi: Relation) -> FrozenSet[Tuple[int, int]]:
    """Relational product: a theta b psi c"""
    return frozenset((a, c) for a, b in theta.tuples for b2, c in psi.tuples if b == b2)


def nonpermuting_pair(A: OckhamAlgebra) -> Optional[Tuple[Relation, Relation]]:
    """First pair of congruences whose relational products differ"""
    thetas = congruences(A)
    for theta, psi in itertools.combinations(thetas, 2):
        if compose(theta, psi) != compose(psi, theta):
            return theta, psi
    return None
