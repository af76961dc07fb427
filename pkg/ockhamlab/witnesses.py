"""
Infinitude witnesses
Fixed alter egos over small hosts, the crown and fence families, the maps
psi, rho and phi that drive the infinitude argument, the hypothesis check
over all morphisms between family members, and direct evidence that the
hom-set relations of successive members are pairwise inequivalent.
"""
import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Set, Tuple

from .classifier import CatalogKind, catalog_algebra
from .errors import ConsistencyError, MalformedInputError
from .kernel import get_kernel
from .morphisms import Morphism, embedding_violation, hom_search, is_morphism, isomorphic, violated_constraint
from .relations import Relation, equivalent, homset_relation, nonpermuting_pair
from .structures import FinStructure, OckhamAlgebra, Signature, permute_algebra, power_index, power_structure, product_algebra

logger = logging.getLogger(__name__)

# r: order or pre-order, s: distinguished subset
UNARY_MARK_SIGNATURE = Signature(rels=(("r", 2), ("s", 1)))
# r: order, s: quasi-order
QUASI_ORDER_SIGNATURE = Signature(rels=(("r", 2), ("s", 2)))

HOSTS = ("kleene", "a2", "a5", "a6")
CATALOG = ("kleene_ego", "gen1_bridge", "a2_ego", "gen2_bridge", "a56_ego")


def _relabel(A: OckhamAlgebra, labels: Sequence[str]) -> OckhamAlgebra:
    return dataclasses.replace(A, labels=tuple(labels))


def host_algebra(name: str) -> OckhamAlgebra:
    """
    Host algebras with their elements named 0, a, b, 1 bottom-up.

    kleene is K(Y3) on 0 < a < 1; a2 is K(Y2) with a = 10 and b = 01;
    a5 and a6 are K(Y5) and K(Y6), 4-element chains 0 < a < b < 1.
    """
    if name == "kleene":
        return _relabel(catalog_algebra(CatalogKind.Y3), ("0", "a", "1"))
    if name == "a2":
        return _relabel(permute_algebra(catalog_algebra(CatalogKind.Y2), [0, 2, 1, 3]), ("0", "a", "b", "1"))
    if name == "a5":
        return _relabel(catalog_algebra(CatalogKind.Y5), ("0", "a", "b", "1"))
    if name == "a6":
        return _relabel(catalog_algebra(CatalogKind.Y6), ("0", "a", "b", "1"))
    raise MalformedInputError(f"Unknown host algebra {name!r}; expected one of {', '.join(HOSTS)}")


def _structure(signature: Signature, labels: Sequence[str], rels: Dict[str, Sequence[Tuple[str, ...]]]) -> FinStructure:
    index = {label: i for i, label in enumerate(labels)}
    tuples = {}
    for name, arity in signature.rels:
        found = {tuple(index[v] for v in t) for t in rels[name]}
        if arity == 2:
            found |= {(x, x) for x in range(len(labels))}
        tuples[name] = frozenset(found)
    return FinStructure(signature, len(labels), {}, tuples, tuple(labels))


def witness_catalog(name: str) -> FinStructure:
    """
    The fixed alter egos and bridge structures.

    Raises:
        MalformedInputError: unknown name
    """
    if name == "kleene_ego":
        return _structure(UNARY_MARK_SIGNATURE, ("0", "a", "1"),
                          {"r": [("0", "a"), ("1", "a")], "s": [("0",), ("1",)]})
    if name == "gen1_bridge":
        return _structure(UNARY_MARK_SIGNATURE, ("0", "a", "1"),
                          {"r": [("0", "a"), ("1", "a")], "s": [("0",)]})
    if name == "a2_ego":
        return _structure(UNARY_MARK_SIGNATURE, ("0", "a", "b", "1"),
                          {"r": [("0", "a"), ("b", "1")], "s": [("0",), ("1",)]})
    if name in ("gen2_bridge", "a56_ego"):
        labels = ("0", "a", "1", "b") if name == "gen2_bridge" else ("0", "a", "b", "1")
        order = [("0", "a"), ("1", "b")]
        return _structure(QUASI_ORDER_SIGNATURE, labels, {"r": order, "s": order + [("a", "0")]})
    raise MalformedInputError(f"Unknown witness structure {name!r}; expected one of {', '.join(CATALOG)}")


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def crown(n: int) -> FinStructure:
    """Even points below their two cyclic neighbours on 0..2n-1, s = {0}"""
    if n < 2:
        raise MalformedInputError(f"Crowns need n >= 2, got {n}")
    size = 2 * n
    order = {(x, x) for x in range(size)}
    for i in range(0, size, 2):
        order |= {(i, (i + 1) % size), (i, (i - 1) % size)}
    return FinStructure(UNARY_MARK_SIGNATURE, size, {}, {"r": frozenset(order), "s": frozenset({(0,)})})


def fence_ends(n: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """(L, U) with L = {0, 2n} and U the rest"""
    return (0, 2 * n), tuple(range(1, 2 * n))


def fence(n: int) -> FinStructure:
    """Zigzag 0 < 1 > 2 < ... on 0..2n with s = L^2 + U^2 + L x U"""
    if n < 1:
        raise MalformedInputError(f"Fences need n >= 1, got {n}")
    size = 2 * n + 1
    order = {(x, x) for x in range(size)}
    for i in range(0, size, 2):
        order |= {(i, j) for j in (i - 1, i + 1) if 0 <= j < size}
    low, high = fence_ends(n)
    quasi = {(x, y) for x in low for y in low} | {(x, y) for x in high for y in high} | \
            {(x, y) for x in low for y in high}
    return FinStructure(QUASI_ORDER_SIGNATURE, size, {}, {"r": frozenset(order), "s": frozenset(quasi)})


@dataclass
class EmbeddingCheck:
    ok: bool
    failure: Optional[str] = None


def embedding_check(bridge: FinStructure, ego: FinStructure, images: Sequence[Sequence[int]]) -> EmbeddingCheck:
    """
    Check that x -> images[x] embeds the bridge into a power of the ego.

    Args:
        images: per bridge element, its coordinates as ego indices
    """
    power = len(images[0]) if images else 0
    if len(images) != bridge.size or power < 1 or any(len(c) != power for c in images):
        return EmbeddingCheck(False, "images must give the same number of coordinates for every element")
    target = power_structure(ego, power)
    mapping = tuple(power_index(coords, ego.size) for coords in images)
    failure = embedding_violation(bridge, target, mapping)
    return EmbeddingCheck(failure is None, failure)


@dataclass
class WitnessFamily:
    """
    Crown or fence family over a fixed alter ego.

    Attributes:
        kind: crown or fence
        ego_name: kleene, a2 or a56
        ego: the alter ego
        hosts: algebras the ego is an alter ego of
        bridge: structure between the family members and the ego
        embedding: coordinates of each bridge element in the ego power
    """
    kind: str
    ego_name: str
    ego: FinStructure
    hosts: Tuple[str, ...]
    bridge: FinStructure
    embedding: Tuple[Tuple[int, ...], ...]
    first: int = field(default=2)

    def member(self, n: int) -> FinStructure:
        return crown(n) if self.kind == "crown" else fence(n)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "ego": self.ego_name, "hosts": list(self.hosts),
                "embedding": [list(c) for c in self.embedding]}


def _coords(ego: FinStructure, labels: Sequence[Sequence[str]]) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(ego.labels.index(v) for v in coords) for coords in labels)


def witness_family(kind: str, ego_name: str) -> WitnessFamily:
    """
    Crowns go with the kleene or a2 egos via gen1_bridge in the square;
    fences go with a56 via gen2_bridge as a substructure.

    Raises:
        MalformedInputError: unknown or mismatched kind and ego
    """
    if kind == "crown" and ego_name == "kleene":
        ego = witness_catalog("kleene_ego")
        images = _coords(ego, [("0", "0"), ("a", "a"), ("1", "a")])
        family = WitnessFamily(kind, ego_name, ego, ("kleene",), witness_catalog("gen1_bridge"), images, 2)
    elif kind == "crown" and ego_name == "a2":
        ego = witness_catalog("a2_ego")
        images = _coords(ego, [("0", "1"), ("a", "1"), ("a", "b")])
        family = WitnessFamily(kind, ego_name, ego, ("a2",), witness_catalog("gen1_bridge"), images, 2)
    elif kind == "fence" and ego_name == "a56":
        ego = witness_catalog("a56_ego")
        images = _coords(ego, [("0",), ("a",), ("1",), ("b",)])
        family = WitnessFamily(kind, ego_name, ego, ("a5", "a6"), witness_catalog("gen2_bridge"), images, 1)
    else:
        raise MalformedInputError(f"No witness family for {kind!r} over {ego_name!r}")
    check = embedding_check(family.bridge, family.ego, family.embedding)
    if not check.ok:
        raise ConsistencyError(f"Bridge does not embed for {kind}/{ego_name}: {check.failure}")
    return family


# ---------------------------------------------------------------------------
# psi, rho and phi
# ---------------------------------------------------------------------------

@dataclass
class NonMorphism:
    """A map together with the constraint it breaks"""
    map: Tuple[int, ...]
    relation: str
    violated: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"map": list(self.map), "violates": {"relation": self.relation, "tuple": list(self.violated)}}


def _certify(X: FinStructure, Y: FinStructure, mapping: Tuple[int, ...], what: str) -> NonMorphism:
    violated = violated_constraint(X, Y, mapping)
    if violated is None:
        raise ConsistencyError(f"{what} is a morphism")
    return NonMorphism(mapping, violated[0], violated[1])


def psi_map(family: WitnessFamily, n: int) -> NonMorphism:
    """
    Crown: n -> 1 and everything else -> 0. Fence: 2n -> 1 and everything
    else -> b. Neither is a morphism into the bridge.
    """
    X = family.member(n)
    labels = family.bridge.labels
    if family.kind == "crown":
        special, high, low = n, labels.index("1"), labels.index("0")
    else:
        special, high, low = 2 * n, labels.index("1"), labels.index("b")
    mapping = tuple(high if x == special else low for x in range(X.size))
    return _certify(X, family.bridge, mapping, f"psi_{n}")


def rho_map(family: WitnessFamily, n: int) -> Morphism:
    """
    First morphism bridge -> ego (in map order) whose composite with psi_n
    is not a morphism.

    Raises:
        ConsistencyError: none exists
    """
    X = family.member(n)
    psi = psi_map(family, n).map
    for rho in hom_search(family.bridge, family.ego):
        if not is_morphism(X, family.ego, tuple(rho.map[v] for v in psi)):
            return rho
    raise ConsistencyError(f"No morphism from the bridge breaks psi_{n}")


def phi_map(family: WitnessFamily, n: int) -> NonMorphism:
    """rho_n after psi_n, certified as a non-morphism into the ego"""
    X = family.member(n)
    rho = rho_map(family, n).map
    mapping = tuple(rho[v] for v in psi_map(family, n).map)
    return _certify(X, family.ego, mapping, f"phi_{n}")


def _is_morphism_item(item: Tuple[FinStructure, FinStructure, Tuple[int, ...]]) -> bool:
    return is_morphism(*item)


def infinitude_hypothesis_check(family: WitnessFamily, k: int, l: int) -> bool:
    """
    Every morphism omega: X_k -> X_l composed with phi_l is a morphism into the ego.

    Raises:
        MalformedInputError: k > l or below the family minimum
    """
    if k > l:
        raise MalformedInputError(f"Need k <= l, got k={k}, l={l}")
    Xk, Xl = family.member(k), family.member(l)
    phi = phi_map(family, l).map
    omegas = hom_search(Xk, Xl)
    items = [(Xk, family.ego, tuple(phi[v] for v in omega.map)) for omega in omegas]
    results = get_kernel().batch_process(items, _is_morphism_item)
    logger.info(f"{family.kind}/{family.ego_name}: {len(omegas)} maps X_{k} -> X_{l}, {sum(results)} pass")
    return all(results)


@dataclass
class GrowthEvidence:
    """Hom-set relations r_n of the family members, pairwise inequivalent"""
    family: WitnessFamily
    relations: Dict[int, Relation]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family.to_dict(),
            "arities": {str(n): r.arity for n, r in self.relations.items()},
            "sizes": {str(n): len(r) for n, r in self.relations.items()},
        }


def growth_evidence(family: WitnessFamily, n_max: int) -> GrowthEvidence:
    """
    r_n = hom-set relation of X_n on its whole carrier, for the family's
    first n up to n_max.

    Raises:
        ConsistencyError: two of them are equivalent
        ResourceCapError: |ego|^|X_n| above the relation cap
    """
    relations: Dict[int, Relation] = {}
    for n in range(family.first, n_max + 1):
        X = family.member(n)
        relations[n] = homset_relation(X, range(X.size), family.ego)
    ns = sorted(relations)
    for i, n in enumerate(ns):
        for n2 in ns[i + 1:]:
            if equivalent(relations[n], relations[n2]):
                raise ConsistencyError(f"r_{n} and r_{n2} are equivalent")
    return GrowthEvidence(family, relations)


# ---------------------------------------------------------------------------
# Separation maps and obstacle anchors
# ---------------------------------------------------------------------------

def _up(X: FinStructure, x: int) -> Set[int]:
    return {y for y in range(X.size) if (x, y) in X.rels["r"]}


def crown_separation_maps(n: int) -> Dict[str, Morphism]:
    """
    Maps from the crown into the Kleene ego separating its order:
    alpha_x sends the up-set of x to a, beta sends 0 to 0 and the
    neighbours of 0 to a, gamma sends only 0 to 0.
    """
    X = crown(n)
    ego = witness_catalog("kleene_ego")
    zero, a, one = 0, 1, 2
    maps: Dict[str, Tuple[int, ...]] = {}
    for x in range(1, X.size):
        up = _up(X, x)
        maps[f"alpha_{x}"] = tuple(a if y in up else zero for y in range(X.size))
    maps["beta"] = tuple(zero if y == 0 else a if y in (1, X.size - 1) else one for y in range(X.size))
    maps["gamma"] = tuple(zero if y == 0 else a for y in range(X.size))
    return {name: Morphism(X, ego, m) for name, m in maps.items()}


def fence_separation_maps(n: int) -> Dict[str, Morphism]:
    """alpha_x sends the up-set of x to a; beta sends U to b and L to 1"""
    X = fence(n)
    ego = witness_catalog("a56_ego")
    zero, a, b, one = 0, 1, 2, 3
    low, _ = fence_ends(n)
    maps: Dict[str, Tuple[int, ...]] = {}
    for x in range(X.size):
        up = _up(X, x)
        maps[f"alpha_{x}"] = tuple(a if y in up else zero for y in range(X.size))
    maps["beta"] = tuple(one if y in low else b for y in range(X.size))
    return {name: Morphism(X, ego, m) for name, m in maps.items()}


def obstacle_anchors() -> Dict[str, bool]:
    """K(Y1) is the square of the 2-element Boolean algebra; K(Y4) has non-permuting congruences"""
    boolean = catalog_algebra(CatalogKind.C, 1)
    square = isomorphic(catalog_algebra(CatalogKind.Y1), product_algebra(boolean, boolean)) is not None
    stone = nonpermuting_pair(catalog_algebra(CatalogKind.Y4)) is not None
    return {"Y1_boolean_square": square, "Y4_nonpermuting": stone}


def family_report(family: WitnessFamily, n: int, check: Optional[int] = None) -> Dict[str, Any]:
    """psi, rho and phi for X_n, plus the hypothesis check from X_check when given"""
    report: Dict[str, Any] = {
        "family": family.to_dict(),
        "n": n,
        "size": family.member(n).size,
        "psi": psi_map(family, n).to_dict(),
        "rho": list(rho_map(family, n).map),
        "phi": phi_map(family, n).to_dict(),
    }
    if check is not None:
        report["hypothesis"] = {"k": check, "l": n, "holds": infinitude_hypothesis_check(family, check, n)}
    return report

