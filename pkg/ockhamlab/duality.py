"""
Finite restricted Priestley duality
The functors H (algebra -> space) and K (space -> algebra) on objects and
morphisms, the unit and counit isomorphisms, and algebra-side morphism
helpers used to move questions across the duality.

Elements of H(A) and K(X) are 0/1 maps, listed in lexicographic order of
their bit-strings and labelled by them.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from .config import get_config
from .errors import ConsistencyError, MalformedInputError, check_cap
from .morphisms import Morphism, SearchMode, divisor, hom_search, unreflected_tuple, violated_constraint
from .structures import OckhamAlgebra, OckhamSpace, covers_of, product_algebra, subalgebra

logger = logging.getLogger(__name__)

Bits = Tuple[int, ...]


def bit_string(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


# ---------------------------------------------------------------------------
# H: algebras to spaces
# ---------------------------------------------------------------------------

def lattice_homs(A: OckhamAlgebra) -> List[Bits]:
    """
    Bounded-lattice homomorphisms A -> 2 as bit tuples, sorted.

    In a finite distributive lattice these are the characteristic maps of
    the principal filters of join-irreducible elements.
    """
    check_cap("algebra carrier", A.size, get_config().structure_cap)
    lower_covers = covers_of(A.leq).sum(axis=0)
    homs = []
    for j in range(A.size):
        if j != A.bot and lower_covers[j] == 1:
            homs.append(tuple(int(b) for b in A.leq[j]))
    return sorted(homs)


def lattice_homs_naive(A: OckhamAlgebra) -> List[Bits]:
    """Filter all 2^|A| subsets; slow oracle for lattice_homs"""
    check_cap("algebra carrier", A.size, get_config().algebra_cap)
    found = []
    for bits in itertools.product((0, 1), repeat=A.size):
        if bits[A.bot] != 0 or bits[A.top] != 1:
            continue
        if all(bits[A.join_rows[a][b]] == (bits[a] | bits[b]) and bits[A.meet_rows[a][b]] == (bits[a] & bits[b])
               for a in range(A.size) for b in range(A.size)):
            found.append(bits)
    return found


def dual_space(A: OckhamAlgebra) -> OckhamSpace:
    """
    H(A): lattice homomorphisms A -> 2 ordered pointwise, with
    g(x) the complement of x composed with neg.
    """
    homs = lattice_homs(A)
    index = {bits: i for i, bits in enumerate(homs)}
    points = np.array(homs, dtype=np.int64).reshape(len(homs), A.size)
    leq = (points[:, None, :] <= points[None, :, :]).all(axis=2)
    g = []
    for bits in homs:
        image = tuple(1 - bits[A.neg[a]] for a in range(A.size))
        if image not in index:
            raise ConsistencyError(f"g({bit_string(bits)}) = {bit_string(image)} is not a lattice homomorphism")
        g.append(index[image])
    logger.debug(f"H of a {A.size}-element algebra has {len(homs)} points")
    return OckhamSpace(len(homs), leq, tuple(g), tuple(bit_string(b) for b in homs))


# ---------------------------------------------------------------------------
# K: spaces to algebras
# ---------------------------------------------------------------------------

def up_sets(X: OckhamSpace) -> List[Bits]:
    """Order-preserving maps X -> {0 < 1} in lexicographic order"""
    n = X.size
    leq = X.leq
    found: List[Bits] = []
    bits = [0] * n

    def extend(x: int) -> None:
        if x == n:
            found.append(tuple(bits))
            return
        for value in (0, 1):
            bits[x] = value
            consistent = True
            for y in range(x):
                if leq[y, x] and bits[y] > value or leq[x, y] and value > bits[y]:
                    consistent = False
                    break
            if consistent:
                extend(x + 1)
        bits[x] = 0

    extend(0)
    return found


def dual_algebra(X: OckhamSpace) -> OckhamAlgebra:
    """
    K(X): order-preserving maps X -> 2 with pointwise lattice operations,
    f(a) the complement of a composed with g, constants as bounds.
    """
    check_cap("space carrier", X.size, get_config().structure_cap)
    maps = up_sets(X)
    check_cap("dual algebra carrier", len(maps), get_config().structure_cap)
    index = {bits: i for i, bits in enumerate(maps)}
    n = len(maps)
    table = np.array(maps, dtype=np.int64).reshape(n, X.size)
    join = np.zeros((n, n), dtype=np.int64)
    meet = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            join[i, j] = index[tuple(int(v) for v in table[i] | table[j])]
            meet[i, j] = index[tuple(int(v) for v in table[i] & table[j])]
    neg = tuple(index[tuple(1 - bits[X.g[x]] for x in range(X.size))] for bits in maps)
    bot, top = index[(0,) * X.size], index[(1,) * X.size]
    return OckhamAlgebra(n, join, meet, neg, bot, top, tuple(bit_string(b) for b in maps))


def bits_of(obj: Union[OckhamAlgebra, OckhamSpace], x: int) -> Bits:
    """Bit-string of an element of H(A) or K(X)"""
    return tuple(int(c) for c in obj.label(x))


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------

def dual_morphism(phi: Morphism) -> Morphism:
    """
    H(phi): H(B) -> H(A), x -> x o phi, for an algebra homomorphism A -> B;
    K(psi): K(Y) -> K(X), a -> a o psi, for a space morphism X -> Y.

    Raises:
        MalformedInputError: phi is not a morphism
    """
    source, target = phi.source, phi.target
    broken = violated_constraint(source, target, phi.map)
    if broken is not None:
        raise MalformedInputError(f"Not a morphism: {broken[0]} fails at {list(broken[1])}")
    if isinstance(source, OckhamAlgebra):
        HA, HB = dual_space(source), dual_space(target)
        index = {bits_of(HA, i): i for i in range(HA.size)}
        mapping = tuple(index[tuple(bits_of(HB, x)[phi.map[a]] for a in range(source.size))] for x in range(HB.size))
        return Morphism(HB, HA, mapping)
    if isinstance(source, OckhamSpace):
        KX, KY = dual_algebra(source), dual_algebra(target)
        index = {bits_of(KX, i): i for i in range(KX.size)}
        mapping = tuple(index[tuple(bits_of(KY, a)[phi.map[x]] for x in range(source.size))] for a in range(KY.size))
        return Morphism(KY, KX, mapping)
    raise MalformedInputError("dual_morphism needs a morphism of algebras or of spaces")


def unit_map(A: OckhamAlgebra) -> Morphism:
    """e_A: A -> KH(A), e(a)(x) = x(a)"""
    HA = dual_space(A)
    KHA = dual_algebra(HA)
    index = {bits_of(KHA, i): i for i in range(KHA.size)}
    points = [bits_of(HA, x) for x in range(HA.size)]
    mapping = []
    for a in range(A.size):
        bits = tuple(x[a] for x in points)
        if bits not in index:
            raise ConsistencyError(f"e({A.label(a)}) = {bit_string(bits)} is not an element of KH(A)")
        mapping.append(index[bits])
    return Morphism(A, KHA, tuple(mapping))


def counit_map(X: OckhamSpace) -> Morphism:
    """eps_X: X -> HK(X), eps(x)(a) = a(x)"""
    KX = dual_algebra(X)
    HKX = dual_space(KX)
    index = {bits_of(HKX, i): i for i in range(HKX.size)}
    maps = [bits_of(KX, a) for a in range(KX.size)]
    mapping = []
    for x in range(X.size):
        bits = tuple(a[x] for a in maps)
        if bits not in index:
            raise ConsistencyError(f"eps({X.label(x)}) = {bit_string(bits)} is not a point of HK(X)")
        mapping.append(index[bits])
    return Morphism(X, HKX, tuple(mapping))


@dataclass
class DualityWitness:
    """Unit or counit of the duality, verified to be an isomorphism"""
    algebra: Optional[OckhamAlgebra]
    space: Optional[OckhamSpace]
    unit: Optional[Morphism] = None
    counit: Optional[Morphism] = None


def round_trip(obj: Union[OckhamAlgebra, OckhamSpace]) -> DualityWitness:
    """
    Build e_A or eps_X and check it is an isomorphism.

    Raises:
        ConsistencyError: the map is not bijective, not a morphism, or does
            not reflect the order
    """
    if isinstance(obj, OckhamAlgebra):
        e = unit_map(obj)
        _check_iso(e, "e_A")
        return DualityWitness(obj, dual_space(obj), unit=e)
    if isinstance(obj, OckhamSpace):
        eps = counit_map(obj)
        _check_iso(eps, "eps_X")
        return DualityWitness(dual_algebra(obj), obj, counit=eps)
    raise MalformedInputError("round_trip needs an algebra or a space")


def _check_iso(phi: Morphism, name: str) -> None:
    if not phi.is_injective() or not phi.is_surjective():
        raise ConsistencyError(f"{name} is not bijective: {list(phi.map)}")
    broken = violated_constraint(phi.source, phi.target, phi.map)
    if broken is not None:
        raise ConsistencyError(f"{name} does not preserve {broken[0]} at {list(broken[1])}")
    unreflected = unreflected_tuple(phi.source, phi.target, phi.map)
    if unreflected is not None:
        raise ConsistencyError(f"{name} does not reflect {unreflected[0]} at {list(unreflected[1])}")


# ---------------------------------------------------------------------------
# Algebra-side helpers
# ---------------------------------------------------------------------------

def algebra_homomorphisms(A: OckhamAlgebra, B: OckhamAlgebra, mode: str = "all") -> List[Morphism]:
    """Homomorphisms preserving join, meet, neg and both bounds"""
    return hom_search(A, B, mode)


def endomorphisms(A: OckhamAlgebra) -> List[Morphism]:
    return hom_search(A, A, SearchMode.ALL)


def subuniverses(A: OckhamAlgebra) -> List[Tuple[int, ...]]:
    """All subuniverses, smallest first"""
    from .relations import enumerate_compatible

    found = [tuple(sorted(t[0] for t in r.tuples)) for r in enumerate_compatible(A, 1)]
    return sorted(found, key=lambda s: (len(s), s))


@dataclass
class AlgebraDivisor:
    subset: Tuple[int, ...]
    subalgebra: OckhamAlgebra
    surjection: Morphism


def algebra_divisor(A: OckhamAlgebra, B: OckhamAlgebra) -> Optional[AlgebraDivisor]:
    """Decide A in HS(B) on the algebra side"""
    for subset in subuniverses(B):
        if len(subset) < A.size:
            continue
        sub, _ = subalgebra(B, subset)
        found = hom_search(sub, A, SearchMode.SURJECTIVE, limit=1)
        if found:
            return AlgebraDivisor(subset, sub, found[0])
    return None


def lift_relation(r, B: OckhamAlgebra, witness: AlgebraDivisor):
    """
    Preimage of a relation on A under the surjection of an A in HS(B)
    witness, carried into B through the subalgebra.
    """
    from .relations import Relation

    sub, h = witness.subalgebra, witness.surjection
    if r.size != h.target.size:
        raise MalformedInputError(f"Relation is over {r.size} elements but the witness maps onto {h.target.size}")
    check_cap(f"|C|^{r.arity}", sub.size ** r.arity, get_config().relation_cap)
    tuples = frozenset(
        tuple(witness.subset[v] for v in t)
        for t in itertools.product(range(sub.size), repeat=r.arity)
        if tuple(h.map[v] for v in t) in r.tuples
    )
    return Relation(B.size, r.arity, tuples)


@dataclass
class TransferReport:
    """Census classes of A lifted along A in HS(B)"""
    divisor: bool
    classes: int
    pairs_checked: int
    separated: bool

    def to_dict(self) -> dict:
        return {"divisor": self.divisor, "classes": self.classes,
                "pairs_checked": self.pairs_checked, "separated": self.separated}


def transfer_check(A: OckhamAlgebra, B: OckhamAlgebra, kmax: int = 2) -> TransferReport:
    """
    If A is in HS(B), non-equivalent relations on A stay non-equivalent
    once lifted to B, so B has at least as many classes as A.

    A in HS(B) is decided on the duals with divisor; the lift uses the
    algebra-side witness.

    Raises:
        ConsistencyError: the two divisor tests disagree, or a lift is not compatible with B
    """
    from .relations import census, equivalent, is_compatible

    on_duals = divisor(dual_space(A), dual_space(B)) is not None
    witness = algebra_divisor(A, B)
    if on_duals != (witness is not None):
        raise ConsistencyError(f"Divisor on duals says {on_duals}, on algebras {witness is not None}")
    if witness is None:
        return TransferReport(False, 0, 0, False)
    classes = census(A, kmax)
    lifted = [lift_relation(c.representative, B, witness) for c in classes]
    for s in lifted:
        if not is_compatible(B, s):
            raise ConsistencyError(f"Lifted relation of arity {s.arity} is not compatible with B")
    pairs = list(itertools.combinations(lifted, 2))
    separated = all(not equivalent(s, t) for s, t in pairs)
    logger.info(f"Transfer: {len(classes)} classes, {len(pairs)} pairs, separated={separated}")
    return TransferReport(True, len(classes), len(pairs), separated)


def jointly_surjective(maps: Sequence[Morphism]) -> bool:
    """The images of maps with a common target cover it"""
    if not maps:
        return False
    covered: Set[int] = set()
    for phi in maps:
        covered |= phi.image
    return len(covered) == maps[0].target.size


def is_order_preserving_g(X: OckhamSpace) -> bool:
    return all(X.leq[X.g[x], X.g[y]] for x, y in X.leq_pairs)


@dataclass
class BinaryReconstruction:
    """phi_i = H(rho_i) o eps_X for a binary subalgebra r of K(X)^2"""
    relation_algebra: OckhamAlgebra
    phi1: Morphism
    phi2: Morphism
    reconstructed: frozenset
    matches: bool
    jointly_surjective: bool


def binary_reconstruction(X: OckhamSpace, pairs) -> BinaryReconstruction:
    """
    Rebuild a binary compatible relation on K(X) from two space morphisms
    into its dual: r = {(a o phi1, a o phi2) : a in KH(r)}.

    Args:
        X: the space
        pairs: the relation, as a set of (a, b) pairs of K(X) indices
    """
    KX = dual_algebra(X)
    pairs = frozenset((int(a), int(b)) for a, b in pairs)
    square = product_algebra(KX, KX)
    indices = [a * KX.size + b for a, b in sorted(pairs)]
    R, elements = subalgebra(square, indices)
    projections = [
        Morphism(R, KX, tuple(divmod(e, KX.size)[i] for e in elements))
        for i in (0, 1)
    ]
    eps = counit_map(X)
    phis = [eps.then(dual_morphism(rho)) for rho in projections]
    HR = phis[0].target
    KHR = dual_algebra(HR)
    KX_index = {bits_of(KX, a): a for a in range(KX.size)}
    rebuilt = set()
    for alpha in range(KHR.size):
        bits = bits_of(KHR, alpha)
        first = tuple(bits[phis[0].map[x]] for x in range(X.size))
        second = tuple(bits[phis[1].map[x]] for x in range(X.size))
        rebuilt.add((KX_index[first], KX_index[second]))
    rebuilt = frozenset(rebuilt)
    return BinaryReconstruction(R, phis[0], phis[1], rebuilt, rebuilt == pairs, jointly_surjective(phis))
