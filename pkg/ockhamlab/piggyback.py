"""
Alternating alter egos and their dual class
Builds alter egos by the piggyback construction, checks alter-ego
compatibility, characterizes the dual class of the alternating alter ego
S_m intrinsically, decomposes members into u-connected shapes, reduces
(structure, generating set) pairs to normal form and checks the bound on
the number of relation classes.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .classifier import CatalogKind, catalog_space
from .duality import bit_string, dual_algebra, is_order_preserving_g, up_sets
from .errors import ConsistencyError, MalformedInputError
from .generators import dual_class_parts, generating_sets, is_generating
from .kernel import get_kernel
from .morphisms import IspReport, Morphism, embedding_violation, generated_subset, isp_member, violated_constraint
from .relations import Relation, classify_relations, equivalent, homset_relation, is_compatible
from .structures import UG_SIGNATURE, FinStructure, OckhamAlgebra, OckhamSpace, induced_substructure

logger = logging.getLogger(__name__)


@dataclass
class AlterEgo:
    """
    A (u, leq)-structure on the carrier of its host algebra.

    Attributes:
        structure: carrier labelled by the bit-strings of the host elements
        algebra: the host K(X)
        base_point: the point of X at which elements are evaluated
    """
    structure: FinStructure
    algebra: OckhamAlgebra
    base_point: int = 0

    @property
    def size(self) -> int:
        return self.structure.size

    def index_of(self, bits: str) -> int:
        """Carrier index of a bit-string label"""
        try:
            return self.structure.labels.index(bits)
        except ValueError:
            raise MalformedInputError(f"{bits} is not an element of the alter ego") from None

    def u(self, bits: str) -> str:
        return self.structure.label(self.structure.ops["u"][self.index_of(bits)])

    def precedes(self, first: str, second: str) -> bool:
        return (self.index_of(first), self.index_of(second)) in self.structure.rels["leq"]


def is_alter_ego(A: OckhamAlgebra, M: FinStructure) -> bool:
    """
    Every relation of M and the graph of every operation of M is compatible with A.

    Raises:
        MalformedInputError: carriers of different sizes
    """
    S = M.as_structure()
    if S.size != A.size:
        raise MalformedInputError(f"Structure has {S.size} elements but the algebra has {A.size}")
    for name, arity in S.signature.rels:
        if not is_compatible(A, Relation(A.size, arity, S.rels[name])):
            logger.debug(f"Relation {name} is not compatible")
            return False
    for name, table in S.ops.items():
        graph = Relation(A.size, 2, frozenset((x, y) for x, y in enumerate(table)))
        if not is_compatible(A, graph):
            logger.debug(f"Graph of {name} is not compatible")
            return False
    return True


def _orbit(X: OckhamSpace, x0: int) -> Tuple[List[int], int, int]:
    """Orbit of x0 under g with its pre-period and period"""
    seen: Dict[int, int] = {}
    path: List[int] = []
    x = x0
    while x not in seen:
        seen[x] = len(path)
        path.append(x)
        x = X.g[x]
    preperiod = seen[x]
    return path, preperiod, len(path) - preperiod


def piggyback_alter_ego(X: OckhamSpace, x0: int = 0) -> AlterEgo:
    """
    Alter ego on K(X) for a space one-generated by x0 with g order-preserving.

    u(a) = a o g, and a precedes b when a(g^k(x0)) <= b(g^k(x0)) for even k
    and >= for odd k. The orbit is read up to its pre-period plus two
    periods, which covers both parities of every point on the cycle.
    Separation is checked through u: the values of u^k(a) at x0 along the
    orbit determine a.

    Raises:
        MalformedInputError: g not order-preserving, or x0 does not generate X
        ConsistencyError: separation through u fails, or the result is not an alter ego
    """
    if not 0 <= x0 < X.size:
        raise MalformedInputError(f"Base point {x0} is not in 0..{X.size - 1}")
    if not is_order_preserving_g(X):
        raise MalformedInputError("g must be order-preserving")
    if len(generated_subset(X, [x0])) != X.size:
        raise MalformedInputError(f"{x0} does not generate the space")
    algebra = dual_algebra(X)
    maps = up_sets(X)
    index = {bits: i for i, bits in enumerate(maps)}
    path, preperiod, period = _orbit(X, x0)
    points = [path[k] if k < len(path) else path[preperiod + (k - preperiod) % period]
              for k in range(preperiod + 2 * period)]

    u = tuple(index[tuple(bits[X.g[x]] for x in range(X.size))] for bits in maps)
    signatures = set()
    for a in range(len(maps)):
        values, e = [], a
        for _ in points:
            values.append(maps[e][x0])
            e = u[e]
        signatures.add(tuple(values))
    if len(signatures) != len(maps):
        raise ConsistencyError("Values of u^k(a) at the base point do not separate K(X)")

    leq = set()
    for i, a in enumerate(maps):
        for j, b in enumerate(maps):
            if all(a[x] <= b[x] if k % 2 == 0 else a[x] >= b[x] for k, x in enumerate(points)):
                leq.add((i, j))
    structure = FinStructure(UG_SIGNATURE, len(maps), {"u": u}, {"leq": frozenset(leq)},
                             tuple(bit_string(bits) for bits in maps))
    if not is_alter_ego(algebra, structure):
        raise ConsistencyError("Piggyback structure is not compatible with K(X)")
    logger.debug(f"Piggyback alter ego on {len(maps)} elements, orbit {preperiod}+{period}")
    return AlterEgo(structure, algebra, x0)


def alternating_alter_ego(m: int) -> AlterEgo:
    """
    The alternating alter ego S_m on K(D_m): a precedes b iff a(0) <= b(0)
    and they agree everywhere else.

    Raises:
        MalformedInputError: m even or not positive
        ConsistencyError: the simplified order differs from the piggyback one
    """
    def compute() -> AlterEgo:
        X = catalog_space(CatalogKind.D, m)
        maps = up_sets(X)
        leq = frozenset(
            (i, j) for i, a in enumerate(maps) for j, b in enumerate(maps)
            if a[0] <= b[0] and a[1:] == b[1:]
        )
        general = piggyback_alter_ego(X, 0)
        if general.structure.rels["leq"] != leq:
            raise ConsistencyError(f"Simplified and alternating orders differ for m={m}")
        return general

    return get_kernel().cached(("alternating", m), compute)


# ---------------------------------------------------------------------------
# Z-structures
# ---------------------------------------------------------------------------

@dataclass
class ZStructure:
    """Z_0 or Z_k with its embedding into S_m"""
    k: int
    m: int
    structure: FinStructure
    embedding: Morphism


def z_structure(k: int, m: int) -> ZStructure:
    """
    Z_0 is a below 1 with u constant 1. Z_k is the antichain 0, a0..a(k-1)
    with u(0) = 0 and u(aj) = a(j-1 mod k); aj embeds as the map that is 1
    exactly at the points i = j (mod k).

    Raises:
        MalformedInputError: m even, or k neither 0 nor a divisor of m
    """
    ego = alternating_alter_ego(m)
    if k < 0 or k > 0 and m % k != 0:
        raise MalformedInputError(f"k must be 0 or divide m={m}, got {k}")
    points = m + 1
    if k == 0:
        structure = FinStructure(UG_SIGNATURE, 2, {"u": (1, 1)}, {"leq": frozenset({(0, 0), (1, 1), (0, 1)})},
                                 ("a", "1"))
        images = ["0" + "1" * m, "1" * points]
    else:
        u = (0,) + tuple(1 + (j - 1) % k for j in range(k))
        structure = FinStructure(UG_SIGNATURE, k + 1, {"u": u}, {"leq": frozenset((x, x) for x in range(k + 1))},
                                 ("0",) + tuple(f"a{j}" for j in range(k)))
        images = ["0" * points] + ["".join("1" if i % k == j else "0" for i in range(points)) for j in range(k)]
    mapping = tuple(ego.index_of(bits) for bits in images)
    failure = embedding_violation(structure, ego.structure, mapping)
    if failure is not None:
        raise ConsistencyError(f"Z_{k} does not embed in S_{m}: {failure}")
    return ZStructure(k, m, structure, Morphism(structure, ego.structure, mapping))


# ---------------------------------------------------------------------------
# Dual class membership and shapes
# ---------------------------------------------------------------------------

CONDITIONS = ("order", "u_constant_on_order", "below_u_power")
DERIVED_CONDITIONS = ("greatest_in_component", "u_maximal", "maximal_iff_fixed")


@dataclass
class MembershipReport:
    member: bool
    conditions: Dict[str, bool] = field(default_factory=dict)
    failure: Optional[str] = None
    isp: Optional[IspReport] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"member": self.member, "conditions": dict(self.conditions), "failure": self.failure}


def _check_ug(M: FinStructure) -> FinStructure:
    S = M.as_structure()
    if S.signature != UG_SIGNATURE:
        raise MalformedInputError(f"Expected the (u, leq) signature, got {S.signature}")
    return S


def _u_power(u: Sequence[int], x: int, m: int) -> int:
    for _ in range(m):
        x = u[x]
    return x


def _comparability_graph(S: FinStructure, nodes: Optional[Sequence[int]] = None) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(S.size) if nodes is None else nodes)
    graph.add_edges_from((x, y) for x, y in S.rels["leq"] if x != y and x in graph and y in graph)
    return graph


def dual_class_member(M: FinStructure, m: int, check_isp: bool = True) -> MembershipReport:
    """
    Intrinsic test for membership in the dual class of S_m.

    Conditions: leq is an order; x <= y implies u(x) = u(y); x <= u^m(x).
    For members the derived facts are checked too: every order component
    has a greatest element, u lands on maximal elements, and x is maximal
    iff u^m(x) = x.

    Args:
        check_isp: also compare against embeddability in a power of S_m

    Raises:
        MalformedInputError: wrong signature
        ConsistencyError: a derived fact fails, or the two tests disagree
    """
    S = _check_ug(M)
    n = range(S.size)
    leq = S.rels["leq"]
    u = S.ops["u"]
    conditions: Dict[str, bool] = {}
    failure = None

    conditions["order"] = (
        all((x, x) in leq for x in n)
        and all(x == y for x, y in leq if (y, x) in leq)
        and all((x, z) in leq for x, y in leq for y2, z in leq if y == y2)
    )
    conditions["u_constant_on_order"] = all(u[x] == u[y] for x, y in leq)
    conditions["below_u_power"] = all((x, _u_power(u, x, m)) in leq for x in n)
    member = all(conditions.values())
    if not member:
        failure = next(name for name in CONDITIONS if not conditions[name])
    else:
        maximal = {x for x in n if not any((x, y) in leq for y in n if y != x)}
        graph = _comparability_graph(S)
        conditions["greatest_in_component"] = all(
            any(all((x, top) in leq for x in part) for top in part) for part in nx.connected_components(graph)
        )
        conditions["u_maximal"] = all(u[x] in maximal for x in n)
        conditions["maximal_iff_fixed"] = all((x in maximal) == (_u_power(u, x, m) == x) for x in n)
        broken = [name for name in DERIVED_CONDITIONS if not conditions[name]]
        if broken:
            raise ConsistencyError(f"Dual class member violates derived conditions {broken}")

    report = MembershipReport(member, conditions, failure)
    if check_isp:
        report.isp = isp_member(S, alternating_alter_ego(m).structure)
        if report.isp.member != member:
            raise ConsistencyError(f"Intrinsic test says {member} but embeddability says {report.isp.member}")
    return report


@dataclass
class Shape:
    """u-cycle of maxima m0..m(k-1) with their down-sets P0..P(k-1)"""
    k: int
    maxima: Tuple[int, ...]
    components: Tuple[Tuple[int, ...], ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "maxima": list(self.maxima), "components": [list(p) for p in self.components]}


@dataclass
class ShapePart:
    """A u-connected part, its carrier in the original structure and its shape in local indices"""
    elements: Tuple[int, ...]
    substructure: FinStructure
    shape: Shape


def _shape(S: FinStructure, m: int) -> Shape:
    u = S.ops["u"]
    leq = S.rels["leq"]
    start = min(x for x in range(S.size) if _u_power(u, x, m) == x)
    maxima = [start]
    while u[maxima[-1]] != start:
        maxima.append(u[maxima[-1]])
    k = len(maxima)
    if m % k:
        raise ConsistencyError(f"Cycle of maxima has length {k}, which does not divide {m}")
    components = tuple(tuple(x for x in range(S.size) if (x, top) in leq) for top in maxima)
    covered = [x for part in components for x in part]
    if sorted(covered) != list(range(S.size)):
        raise ConsistencyError("Down-sets of the maxima do not partition the part")
    for i, part in enumerate(components):
        if any(u[x] != maxima[(i + 1) % k] for x in part):
            raise ConsistencyError(f"u does not send component {i} to the next maximum")
    return Shape(k, tuple(maxima), components)


def shape_decompose(M: FinStructure, m: int) -> List[ShapePart]:
    """
    Split a member of the dual class into u-connected parts with their shapes.

    Raises:
        MalformedInputError: M is not a member
    """
    S = _check_ug(M)
    report = dual_class_member(S, m, check_isp=False)
    if not report.member:
        raise MalformedInputError(f"Not a dual class member: {report.failure} fails")
    graph = nx.Graph()
    graph.add_nodes_from(range(S.size))
    graph.add_edges_from((x, y) for x, y in enumerate(S.ops["u"]))
    parts = []
    for part in sorted((tuple(sorted(c)) for c in nx.connected_components(graph)), key=min):
        sub, elements = induced_substructure(S, part)
        parts.append(ShapePart(elements, sub, _shape(sub, m)))
    return parts


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------

@dataclass
class NormalizationStep:
    """One component reduced by the given case, as original indices"""
    case: int
    top: int
    kept: Tuple[int, ...]
    removed: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"case": self.case, "top": self.top, "kept": list(self.kept), "removed": list(self.removed)}


@dataclass
class Normalization:
    """(Y, T) with Y a retract of the input; elements[i] is the original point behind i"""
    structure: FinStructure
    generators: Tuple[int, ...]
    elements: Tuple[int, ...]
    steps: List[NormalizationStep] = field(default_factory=list)
    retraction: Tuple[int, ...] = ()

    @property
    def changed(self) -> bool:
        return bool(self.steps)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "size": self.structure.size,
            "generators": list(self.generators),
            "elements": list(self.elements),
            "steps": [step.to_dict() for step in self.steps],
        }


def _height(S: FinStructure, part: Sequence[int]) -> int:
    dag = nx.DiGraph()
    dag.add_nodes_from(part)
    dag.add_edges_from((x, y) for x, y in S.rels["leq"] if x != y and x in dag and y in dag)
    return nx.dag_longest_path_length(dag)


def _reduce_component(S: FinStructure, part: Tuple[int, ...], top: int,
                      in_generators: bool) -> Tuple[int, Dict[int, int]]:
    """Case number and the images of the component's points (0 when already normal)"""
    leq = S.rels["leq"]
    rest = [x for x in part if x != top]
    identity = {x: x for x in part}
    height = _height(S, part)
    if height == 0:
        return 0, identity
    if height == 1:
        if in_generators and len(part) >= 3:
            a = rest[0]
            return 1, {**{x: a for x in rest}, top: top}
        if not in_generators and len(part) >= 4:
            a, c = rest[0], rest[1]
            return 2, {**{x: a for x in rest}, c: c, top: top}
        return 0, identity
    b = next(x for x in rest if any((y, x) in leq for y in rest if y != x))
    a = next(y for y in rest if y != b and (y, b) in leq)
    below = _comparability_graph(S, rest)
    if in_generators or nx.is_connected(below):
        images = {x: b if (b, x) in leq else a for x in rest}
        images[top] = top
        case = 3 if in_generators else 4
    else:
        first = nx.node_connected_component(below, b)
        c = next(x for x in rest if x not in first)
        images = {x: (b if (b, x) in leq else a) if x in first else c for x in rest}
        images[top] = top
        case = 5
    if set(images.values()) == set(part):
        return 0, identity
    return case, images


def normalize(M: FinStructure, S: Sequence[int], m: int, verify: bool = True) -> Normalization:
    """
    Reduce (M, S) to an equivalent pair whose order components all have
    one of the eight normal forms.

    Components are handled by ascending least element. Removed points are
    sent to the kept point a, b or c of their case, a winning ties.

    Args:
        M: u-connected member of the dual class of S_m
        S: generating set of M
        verify: check that the hom-set relations into S_m are equivalent

    Raises:
        MalformedInputError: M not a u-connected member, or S not generating
        ConsistencyError: the retraction or the equivalence check fails
    """
    M = _check_ug(M)
    generators = tuple(sorted(set(int(x) for x in S)))
    parts = shape_decompose(M, m)
    if len(parts) != 1:
        raise MalformedInputError(f"Expected a u-connected structure, found {len(parts)} parts")
    if not is_generating(M, generators):
        raise MalformedInputError(f"{list(generators)} does not generate the structure")
    shape = parts[0].shape

    retraction = list(range(M.size))
    steps: List[NormalizationStep] = []
    order = sorted(range(shape.k), key=lambda i: min(shape.components[i]))
    for i in order:
        part, top = shape.components[i], shape.maxima[i]
        case, images = _reduce_component(M, part, top, top in generators)
        if case == 0:
            continue
        for x, y in images.items():
            retraction[x] = y
        kept = tuple(sorted(set(images.values())))
        steps.append(NormalizationStep(case, top, kept, tuple(x for x in part if x not in kept)))
        logger.debug(f"Component of {top} reduced by case {case} to {list(kept)}")

    if violated_constraint(M, M, retraction) is not None:
        raise ConsistencyError("Normalizing map is not a morphism")
    keep = tuple(sorted(set(retraction)))
    Y, elements = induced_substructure(M, keep)
    position = {x: i for i, x in enumerate(elements)}
    T = tuple(position[x] for x in generators if x in position)
    if any(retraction[x] not in generators for x in generators):
        raise ConsistencyError("Normalizing map does not keep the generators inside the generators")
    if not is_generating(Y, T):
        raise ConsistencyError("Kept generators do not generate the reduced structure")
    result = Normalization(Y, T, elements, steps, tuple(retraction))
    if verify and steps:
        ego = alternating_alter_ego(m).structure
        if not equivalent(homset_relation(M, generators, ego), homset_relation(Y, T, ego)):
            raise ConsistencyError("Normal form is not equivalent to the input")
    return result


# ---------------------------------------------------------------------------
# Class count bound
# ---------------------------------------------------------------------------

@dataclass
class CensusBoundReport:
    m: int
    size_cap: int
    pairs: int
    classes: int
    bound: int
    normal_representatives: bool

    @property
    def ok(self) -> bool:
        return self.classes <= self.bound and self.normal_representatives

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m, "size_cap": self.size_cap, "pairs": self.pairs,
            "classes": self.classes, "bound": self.bound,
            "normal_representatives": self.normal_representatives,
        }


def census_bound_check(m: int, size_cap: int) -> CensusBoundReport:
    """
    Classify the hom-set relations of all u-connected dual class members up
    to size_cap with all their generating sets, and check the class count
    against m * 8^m.

    Raises:
        ConsistencyError: the bound fails, or some class holds no normal pair
    """
    ego = alternating_alter_ego(m).structure
    sources: Dict[Relation, List[Tuple[FinStructure, Tuple[int, ...]]]] = {}
    pairs = 0
    for M in dual_class_parts(m, size_cap):
        for S in generating_sets(M):
            r = homset_relation(M, S, ego)
            sources.setdefault(r, []).append((M, S))
            pairs += 1
    classes = classify_relations(sources)
    bound = m * 8 ** m
    if len(classes) > bound:
        raise ConsistencyError(f"{len(classes)} classes exceed the bound {bound}")
    for census_class in classes:
        candidates = [pair for r in census_class.members for pair in sources[r]]
        if not any(not normalize(M, S, m, verify=False).changed for M, S in candidates):
            raise ConsistencyError(f"No normal pair in the class of {census_class.representative}")
    logger.info(f"m={m}, size<={size_cap}: {pairs} pairs in {len(classes)} classes (bound {bound})")
    return CensusBoundReport(m, size_cap, pairs, len(classes), bound, True)
