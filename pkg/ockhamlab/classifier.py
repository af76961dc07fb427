"""
Classifier
Decides whether a finite Ockham algebra admits only finitely many compatible
relations, up to equivalence. Two independent criteria are run and must agree:

- the dual space is isomorphic to one of C_m, D_m, D_m^op (m odd)
- none of the eight obstacle spaces is a divisor of the dual space

When the answer is "infinitely many", an obstacle divisor is also built
constructively by a case analysis on the cycles of g.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional, Tuple, Union

from .duality import dual_algebra, dual_space
from .errors import ConsistencyError, MalformedInputError
from .kernel import get_kernel
from .morphisms import (
    DivisorWitness, Morphism, cycles, divisor, embedding_violation, generated_subset,
    generated_substructure, is_morphism, is_one_generated, isomorphic, verify_divisor,
)
from .relations import enumerate_compatible
from .structures import OckhamAlgebra, OckhamSpace, induced_substructure, space_from_pairs

logger = logging.getLogger(__name__)


class CatalogKind(str, Enum):
    C = "C"
    D = "D"
    DOP = "Dop"
    Y1 = "Y1"
    Y2 = "Y2"
    Y3 = "Y3"
    Y4 = "Y4"
    Y4OP = "Y4op"
    Y5 = "Y5"
    Y6 = "Y6"
    Y6OP = "Y6op"

    @property
    def parametric(self) -> bool:
        return self in (CatalogKind.C, CatalogKind.D, CatalogKind.DOP)


# (order pairs, g) on 0..size-1
_OBSTACLE_DATA: Dict[CatalogKind, Tuple[int, List[Tuple[int, int]], Tuple[int, ...]]] = {
    CatalogKind.Y1: (2, [], (0, 1)),
    CatalogKind.Y2: (2, [], (1, 1)),
    CatalogKind.Y3: (2, [(0, 1)], (1, 0)),
    CatalogKind.Y4: (3, [(0, 1), (1, 2)], (2, 2, 2)),
    CatalogKind.Y4OP: (3, [(0, 1), (1, 2)], (0, 0, 0)),
    CatalogKind.Y5: (3, [(0, 1), (1, 2)], (1, 1, 1)),
    CatalogKind.Y6: (3, [(0, 1), (1, 2)], (1, 1, 0)),
    CatalogKind.Y6OP: (3, [(0, 1), (1, 2)], (2, 1, 1)),
}

OBSTACLES: Tuple[CatalogKind, ...] = tuple(_OBSTACLE_DATA)

TAGS = ("Boolean", "Kleene", "DeMorgan", "Stone", "MS")


def _kind(kind: Union[str, CatalogKind]) -> CatalogKind:
    try:
        return CatalogKind(kind)
    except ValueError:
        names = ", ".join(k.value for k in CatalogKind)
        raise MalformedInputError(f"Unknown catalog kind {kind!r}; expected one of {names}") from None


def catalog_space(kind: Union[str, CatalogKind], m: Optional[int] = None) -> OckhamSpace:
    """
    The catalog and obstacle spaces.

    Args:
        kind: C, D, Dop or one of the obstacles Y1..Y6op
        m: odd positive parameter for C, D and Dop; must be omitted otherwise

    Raises:
        MalformedInputError: unknown kind, even or missing m, or m given to an obstacle
    """
    kind = _kind(kind)
    if not kind.parametric:
        if m is not None:
            raise MalformedInputError(f"{kind.value} takes no parameter, got m={m}")
        size, pairs, g = _OBSTACLE_DATA[kind]
        return space_from_pairs(size, pairs, g, [str(i) for i in range(size)])
    if m is None or m < 1 or m % 2 == 0:
        raise MalformedInputError(f"{kind.value}_m needs an odd positive m, got {m}")
    if kind == CatalogKind.C:
        return space_from_pairs(m, [], [(i + 1) % m for i in range(m)], [str(i) for i in range(m)])
    g = [1] + [i + 1 for i in range(1, m)] + [1]
    pairs = [(0, m)] if kind == CatalogKind.D else [(m, 0)]
    return space_from_pairs(m + 1, pairs, g, [str(i) for i in range(m + 1)])


def catalog_algebra(kind: Union[str, CatalogKind], m: Optional[int] = None) -> OckhamAlgebra:
    """K of a catalog or obstacle space"""
    return dual_algebra(catalog_space(kind, m))


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------

class Outcome(str, Enum):
    FINITELY_MANY = "FinitelyMany"
    INFINITELY_MANY = "InfinitelyMany"


@dataclass
class CatalogMatch:
    """X is isomorphic to the catalog space of this kind and parameter"""
    kind: CatalogKind
    m: int
    isomorphism: Morphism

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "m": self.m, "isomorphism": list(self.isomorphism.map)}


@dataclass
class ObstacleWitness:
    """An op-closed subset of X whose substructure maps onto an obstacle"""
    obstacle: CatalogKind
    subset: Tuple[int, ...]
    substructure: OckhamSpace
    surjection: Morphism

    @property
    def index(self) -> int:
        return OBSTACLES.index(self.obstacle) + 1

    def verify(self, X: OckhamSpace) -> bool:
        if generated_subset(X, self.subset) != tuple(sorted(self.subset)):
            return False
        sub, _ = induced_substructure(X, self.subset)
        if sub != self.substructure:
            return False
        target = catalog_space(self.obstacle)
        return is_morphism(sub, target, self.surjection.map) and len(set(self.surjection.map)) == target.size

    def to_dict(self) -> Dict[str, Any]:
        return {
            "obstacle": self.obstacle.value,
            "index": self.index,
            "subset": list(self.subset),
            "surjection": list(self.surjection.map),
        }


@dataclass
class Verdict:
    """
    Classification outcome with checkable evidence.

    Attributes:
        outcome: FinitelyMany or InfinitelyMany
        space: the classified space
        catalog: isomorphism evidence for FinitelyMany
        witness: constructive obstacle divisor for InfinitelyMany
        obstacles: every obstacle found a divisor by exhaustive search
    """
    outcome: Outcome
    space: OckhamSpace
    catalog: Optional[CatalogMatch] = None
    witness: Optional[ObstacleWitness] = None
    obstacles: Tuple[CatalogKind, ...] = field(default_factory=tuple)

    @property
    def finitely_many(self) -> bool:
        return self.outcome == Outcome.FINITELY_MANY

    def verify(self) -> bool:
        """Re-check the stored evidence from scratch"""
        if self.finitely_many:
            if self.catalog is None:
                return False
            target = catalog_space(self.catalog.kind, self.catalog.m)
            iso = self.catalog.isomorphism.map
            return len(set(iso)) == target.size and embedding_violation(self.space, target, iso) is None
        return self.witness is not None and self.witness.verify(self.space)

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {
            "outcome": self.outcome.value,
            "size": self.space.size,
            "obstacles": [o.value for o in self.obstacles],
        }
        if self.catalog is not None:
            result["catalog"] = self.catalog.to_dict()
        if self.witness is not None:
            result["witness"] = self.witness.to_dict()
        return result


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------

def catalog_match(X: OckhamSpace) -> Optional[CatalogMatch]:
    """Isomorphism onto C_m (|X| = m) or D_m, D_m^op (|X| = m + 1), m odd"""
    n = X.size
    candidates: List[Tuple[CatalogKind, int]] = []
    if n % 2 == 1:
        candidates.append((CatalogKind.C, n))
    if n >= 2 and (n - 1) % 2 == 1:
        candidates += [(CatalogKind.D, n - 1), (CatalogKind.DOP, n - 1)]
    for kind, m in candidates:
        iso = isomorphic(X, catalog_space(kind, m))
        if iso is not None:
            return CatalogMatch(kind, m, iso)
    return None


def _obstacle_divisor(item: Tuple[CatalogKind, OckhamSpace]) -> Optional[DivisorWitness]:
    kind, X = item
    return divisor(catalog_space(kind), X)


def obstacle_divisors(X: OckhamSpace) -> Dict[CatalogKind, DivisorWitness]:
    """Exhaustive divisor search for each of the eight obstacles"""
    found = get_kernel().batch_process([(kind, X) for kind in OBSTACLES], _obstacle_divisor)
    return {kind: w for kind, w in zip(OBSTACLES, found) if w is not None}


def classify_space(X: OckhamSpace) -> Verdict:
    """
    Classify a space by both criteria.

    Raises:
        ConsistencyError: the criteria disagree, or the constructive witness
            fails to re-verify
    """
    match = catalog_match(X)
    divisors = obstacle_divisors(X)
    for kind, w in divisors.items():
        if not verify_divisor(catalog_space(kind), X, w):
            raise ConsistencyError(f"Divisor witness for {kind.value} does not re-verify")
    if match is not None:
        if divisors:
            names = ", ".join(k.value for k in divisors)
            raise ConsistencyError(f"X is isomorphic to {match.kind.value}_{match.m} but has obstacle divisors {names}")
        logger.info(f"FinitelyMany: isomorphic to {match.kind.value}_{match.m}")
        return Verdict(Outcome.FINITELY_MANY, X, catalog=match)
    if not divisors:
        raise ConsistencyError("X matches no catalog space but no obstacle divides it")
    witness = obstacle_witness(X)
    if witness.obstacle not in divisors:
        raise ConsistencyError(f"Constructed witness {witness.obstacle.value} missed by the exhaustive search")
    logger.info(f"InfinitelyMany: {witness.obstacle.value} divides X")
    return Verdict(Outcome.INFINITELY_MANY, X, witness=witness, obstacles=tuple(divisors))


def classify_algebra(A: OckhamAlgebra) -> Verdict:
    """
    Classify an algebra through its dual space.

    Raises:
        MalformedInputError: A is trivial
    """
    if A.is_trivial:
        raise MalformedInputError("A non-trivial algebra is required")
    return classify_space(dual_space(A))


# ---------------------------------------------------------------------------
# Constructive obstacle witness
# ---------------------------------------------------------------------------

def _witness(X: OckhamSpace, kind: CatalogKind, images: Dict[int, int]) -> ObstacleWitness:
    subset = tuple(sorted(images))
    sub, elements = induced_substructure(X, subset)
    surjection = Morphism(sub, catalog_space(kind), tuple(images[x] for x in elements))
    witness = ObstacleWitness(kind, subset, sub, surjection)
    if not witness.verify(X):
        raise ConsistencyError(f"Constructed {kind.value} witness on {list(subset)} does not verify")
    return witness


def _above_some(X: OckhamSpace, x: int, C: Tuple[int, ...]) -> bool:
    return any(X.leq[c, x] for c in C)


def _below_some(X: OckhamSpace, x: int, C: Tuple[int, ...]) -> bool:
    return any(X.leq[x, c] for c in C)


def obstacle_witness(X: OckhamSpace) -> ObstacleWitness:
    """
    Build an obstacle divisor of X by case analysis.

    Even cycle gives Y3; two odd cycles give Y1; with a single odd cycle C,
    a one-generated X gives Y2, Y6 or Y6op from its tail, and otherwise
    either a one-generated substructure is used or two points outside C
    mapping into C give Y4, Y4op or Y5.

    Raises:
        MalformedInputError: X is a catalog space
    """
    if catalog_match(X) is not None:
        raise MalformedInputError("Catalog spaces have no obstacle divisor")
    found = cycles(X)

    even = [c for c in found if not c.is_odd]
    if even:
        elements = even[0].elements
        # start the parity count at a point maximal within the cycle
        top = next(x for x in elements if not any(X.leq[x, y] and x != y for y in elements))
        images = {}
        x = top
        for k in range(len(elements)):
            images[x] = 1 if k % 2 == 0 else 0
            x = X.g[x]
        return _witness(X, CatalogKind.Y3, images)

    if len(found) >= 2:
        first, second = found[0].elements, found[1].elements
        images = {x: 0 for x in first}
        images.update({x: 1 for x in second})
        return _witness(X, CatalogKind.Y1, images)

    C = found[0].elements
    in_cycle = set(C)
    if is_one_generated(X) is not None:
        return _one_generated_witness(X, C)

    # a point two steps from the cycle generates a one-generated non-catalog part
    for z in range(X.size):
        if z not in in_cycle and X.g[z] not in in_cycle:
            sub, elements = generated_substructure(X, [z])
            inner = _one_generated_witness(sub, tuple(elements.index(c) for c in C))
            return _witness(X, inner.obstacle,
                            {elements[i]: v for i, v in zip(inner.subset, inner.surjection.map)})

    x, y = [z for z in range(X.size) if z not in in_cycle][:2]
    if not _above_some(X, x, C) and not _above_some(X, y, C):
        if X.leq[y, x]:
            x, y = y, x
        images = {c: 2 for c in C}
        images.update({y: 1, x: 0})
        return _witness(X, CatalogKind.Y4, images)
    if not _below_some(X, x, C) and not _below_some(X, y, C):
        if X.leq[x, y]:
            x, y = y, x
        images = {c: 0 for c in C}
        images.update({y: 1, x: 2})
        return _witness(X, CatalogKind.Y4OP, images)
    if _above_some(X, x, C):
        x, y = y, x
    images = {c: 1 for c in C}
    images.update({x: 0, y: 2})
    return _witness(X, CatalogKind.Y5, images)


def _one_generated_witness(X: OckhamSpace, C: Tuple[int, ...]) -> ObstacleWitness:
    """Y2, Y6 or Y6op for a one-generated X with unique odd cycle C"""
    in_cycle = set(C)
    x = next(z for z in range(X.size) if z not in in_cycle and X.g[z] in in_cycle)
    if not _above_some(X, x, C) and not _below_some(X, x, C):
        images = {c: 1 for c in C}
        images[x] = 0
        return _witness(X, CatalogKind.Y2, images)
    try:
        y = next(z for z in range(X.size) if X.g[z] == x)
    except StopIteration:
        raise MalformedInputError("X is isomorphic to a catalog space") from None
    images = {c: 1 for c in C}
    if _below_some(X, x, C):
        images.update({y: 2, x: 0})
        return _witness(X, CatalogKind.Y6, images)
    images.update({x: 2, y: 0})
    return _witness(X, CatalogKind.Y6OP, images)


# ---------------------------------------------------------------------------
# Quasi-primality and subvarieties
# ---------------------------------------------------------------------------

def _is_product(r) -> bool:
    return len(r.project([0])) * len(r.project([1])) == len(r)


def _is_partial_automorphism(r) -> bool:
    firsts = [a for a, _ in r.tuples]
    seconds = [b for _, b in r.tuples]
    return len(set(firsts)) == len(firsts) and len(set(seconds)) == len(seconds)


def is_quasiprimal(A: OckhamAlgebra) -> bool:
    """
    Every subuniverse of A^2 is a product of two subuniverses or the graph
    of a partial automorphism.

    Raises:
        ConsistencyError: the answer differs from "H(A) is isomorphic to C_m, m odd"
    """
    result = True
    for r in enumerate_compatible(A, 2):
        if not _is_product(r) and not _is_partial_automorphism(r):
            logger.debug(f"Binary subuniverse {sorted(r.tuples)} is neither a product nor a graph")
            result = False
            break
    X = dual_space(A)
    expected = X.size % 2 == 1 and isomorphic(X, catalog_space(CatalogKind.C, X.size)) is not None
    if result != expected:
        raise ConsistencyError(f"Binary criterion says {result} but the dual space test says {expected}")
    return result


def subvariety_tags(X: OckhamSpace) -> FrozenSet[str]:
    """Which of the Boolean, Kleene, De Morgan, Stone and MS subvarieties the dual algebra lies in"""
    n = range(X.size)
    g = X.g
    tags = set()
    if all(g[x] == x for x in n):
        tags.add("Boolean")
    if all(g[g[x]] == x for x in n):
        tags.add("DeMorgan")
        if all(X.leq[x, g[x]] or X.leq[g[x], x] for x in n):
            tags.add("Kleene")
    maximal = set(X.maximal)
    if all([y for y in X.up_set(x) if y in maximal] == [g[x]] for x in n):
        tags.add("Stone")
    if all(X.leq[x, g[g[x]]] for x in n):
        tags.add("MS")
    return frozenset(tags)
