"""
Test Relations
Compatibility, enumeration, CA definability, decomposition, census and
the hom-set criteria
"""
import itertools

import pytest

from ockhamlab.config import LabConfig, set_config
from ockhamlab.duality import algebra_divisor, dual_space, lift_relation, transfer_check
from ockhamlab.errors import MalformedInputError, ResourceCapError
from ockhamlab.morphisms import divisor
from ockhamlab.piggyback import alternating_alter_ego
from ockhamlab.relations import (
    Atom, CAFormula, Relation, ca_definable, census, con1_criterion, con2_retraction, congruences,
    containing_atoms, decompose, definable_hull, enumerate_compatible, equivalent, full_tuples,
    generate_closure, homset_relation, host_of, is_compatible, nonpermuting_pair, product_relation, set_partitions,
)
from ockhamlab.structures import (
    UG_SIGNATURE, FinStructure, algebra_from_order, induced_substructure, lattice_from_order, product_algebra,
)

KLEENE = algebra_from_order(3, [(0, 1), (1, 2)], (2, 1, 0))
B2 = algebra_from_order(2, [(0, 1)], (1, 0))
B4 = algebra_from_order(4, [(0, 1), (0, 2), (1, 3), (2, 3)], (3, 2, 1, 0))
STONE = algebra_from_order(3, [(0, 1), (1, 2)], (2, 0, 0))
LATTICE2 = lattice_from_order(2, [(0, 1)])

LEQ = Relation(2, 2, frozenset({(0, 0), (0, 1), (1, 1)}))
RHO = Relation(2, 4, frozenset({(0, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 1), (0, 1, 1, 1), (1, 1, 1, 1)}))
FULL2 = Relation(2, 2, frozenset(itertools.product(range(2), repeat=2)))

FAN = FinStructure(
    UG_SIGNATURE, 4, {"u": (3, 3, 3, 3)},
    {"leq": {(0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (1, 3), (2, 3)}},
)


def test_relation_checks_tuples():
    with pytest.raises(MalformedInputError):
        Relation(2, 2, frozenset({(0, 2)}))
    with pytest.raises(MalformedInputError):
        Relation(2, 2, frozenset({(0,)}))
    assert FULL2.is_full()
    assert LEQ.project([1]).tuples == frozenset({(0,), (1,)})


def test_compatibility_and_closure():
    """Compatible relations contain the constants and are closed under the operations"""
    diagonal = Relation(3, 2, frozenset((a, a) for a in range(3)))
    order = Relation(3, 2, frozenset((a, b) for a in range(3) for b in range(3) if a <= b))
    assert is_compatible(KLEENE, diagonal)
    assert not is_compatible(KLEENE, order)
    assert generate_closure(KLEENE, 1).tuples == frozenset({(0,), (2,)})
    assert len(generate_closure(KLEENE, 1, [(1,)])) == 3
    with pytest.raises(MalformedInputError):
        generate_closure(KLEENE, 1, [(3,)])
    print("[OK] Compatibility")


def test_enumeration_matches_brute_force():
    """Next-Closure lists every binary subuniverse of the Kleene square once"""
    found = list(enumerate_compatible(KLEENE, 2))
    assert len(found) == len(set(found))
    square = list(itertools.product(range(3), repeat=2))
    brute = set()
    for bits in range(1 << len(square)):
        r = Relation(3, 2, frozenset(t for i, t in enumerate(square) if bits >> i & 1))
        if is_compatible(KLEENE, r):
            brute.add(r)
    assert set(found) == brute
    assert len(list(enumerate_compatible(B2, 2))) == 2
    print(f"[OK] {len(found)} binary compatible relations on the Kleene chain")


def test_containing_atoms():
    """Atoms come in lexicographic order of their variable assignment"""
    atoms = containing_atoms(LEQ, LEQ)
    assert atoms == [Atom("rel", (0, 0)), Atom("rel", (0, 1)), Atom("rel", (1, 1))]
    diagonal = Relation(2, 2, frozenset({(0, 0), (1, 1)}))
    assert Atom("eq", (0, 1)) in containing_atoms(diagonal, LEQ)


def test_order_and_rho_are_equivalent():
    """The order of the 2-element lattice and its 4-ary companion define each other"""
    forward = ca_definable(LEQ, RHO)
    backward = ca_definable(RHO, LEQ)
    assert forward is not None and backward is not None
    assert forward.evaluate(RHO) == LEQ
    assert backward.evaluate(LEQ) == RHO
    assert equivalent(LEQ, RHO)
    assert definable_hull(LEQ, RHO) == LEQ
    print(f"[OK] <= from rho: {forward.text()}")
    print(f"[OK] rho from <=: {backward.text().replace('s(', '<=(')}")


def test_full_relation_defines_nothing_proper():
    """Only `true` and equalities come out of a full relation"""
    assert ca_definable(LEQ, FULL2) is None
    formula = ca_definable(FULL2, LEQ)
    assert formula is not None
    assert formula.text() == "true"
    assert not equivalent(LEQ, FULL2)
    assert CAFormula(2).evaluate(LEQ) == FULL2


def test_decompose_and_product():
    """Products are found along the first splitting bipartition"""
    assert decompose(LEQ) is None
    assert decompose(RHO) is None
    split = decompose(FULL2)
    assert split.first == (0,) and split.second == (1,)
    assert decompose(FULL2, proper=True) is None

    diagonal = Relation(2, 2, frozenset({(0, 0), (1, 1)}))
    r = product_relation(LEQ, diagonal, (0, 2), (1, 3))
    assert len(r) == 6
    found = decompose(r, proper=True)
    assert (found.first, found.second) == ((0, 2), (1, 3))
    assert product_relation(found.p, found.q, found.first, found.second) == r
    with pytest.raises(MalformedInputError):
        product_relation(LEQ, diagonal, (0, 1), (1, 3))
    with pytest.raises(MalformedInputError):
        decompose(Relation(2, 1, frozenset({(0,)})))
    print("[OK] Decomposition")


def test_boolean_census_is_one_class():
    """Every compatible relation of the 2-element Boolean algebra is defined by equalities"""
    classes = census(B2, 2)
    assert len(classes) == 1
    assert classes[0].count == 3
    assert classes[0].representative.arity == 1
    assert len(census(B2, 2, indecomposable_only=True)) == 1


def test_kleene_census_separates_arities():
    """The Kleene chain has more than one class and every class is counted"""
    classes = census(KLEENE, 2)
    total = len(list(enumerate_compatible(KLEENE, 1))) + len(list(enumerate_compatible(KLEENE, 2)))
    assert sum(c.count for c in classes) == total
    assert len(classes) > 1
    for census_class in classes:
        for member in census_class.members:
            assert equivalent(member, census_class.representative)


def test_homset_relations_and_criteria():
    """The retraction of the fan onto its top edge agrees with CA definability"""
    S1 = alternating_alter_ego(1).structure
    r = homset_relation(FAN, [0, 1, 2, 3], S1)
    assert len(r) == 9
    with pytest.raises(MalformedInputError):
        homset_relation(FAN, [0, 1], S1)

    edge, _ = induced_substructure(FAN, [0, 3])
    s = homset_relation(edge, [0, 1], S1)
    assert equivalent(r, s)
    assert con1_criterion(FAN, [0, 1, 2, 3], edge, [0, 1], S1) == (ca_definable(r, s) is not None)
    assert con1_criterion(edge, [0, 1], FAN, [0, 1, 2, 3], S1) == (ca_definable(s, r) is not None)

    retraction = con2_retraction(FAN, [0, 1, 2, 3], [0, 3], [0, 3], S1)
    assert retraction.raw_map == (0, 0, 0, 3)
    assert retraction.map == (0, 0, 0, 1)
    print("[OK] Hom-set criteria")


def test_congruences():
    assert len(list(set_partitions(3))) == 5
    assert len(list(set_partitions(4))) == 15
    assert len(congruences(KLEENE)) == 2
    assert nonpermuting_pair(KLEENE) is None


def test_relation_cap():
    set_config(LabConfig().with_caps(relation=8))
    with pytest.raises(ResourceCapError):
        full_tuples(3, 2)


def test_lattice_host_admits_the_order():
    """Without neg the order on the 2-element lattice is compatible; with it, it is not"""
    assert is_compatible(LATTICE2, LEQ)
    assert is_compatible(LATTICE2, RHO)
    assert not is_compatible(B2, LEQ)
    assert generate_closure(LATTICE2, 2, [(0, 1)]) == LEQ
    assert generate_closure(B2, 2, [(0, 1)]) == FULL2
    assert [len(r) for r in enumerate_compatible(LATTICE2, 1)] == [2]
    assert len(list(enumerate_compatible(LATTICE2, 2))) == 4
    # one sublattice of 2^3 per preorder on three points
    assert len(list(enumerate_compatible(LATTICE2, 3))) == 29
    assert host_of(LATTICE2).unary == ()
    assert host_of(LATTICE2).constants == (0, 1)


def test_lattice_census_has_two_classes():
    """Every compatible relation of the 2-element lattice is interdefinable with <= or with {0,1}"""
    classes = census(LATTICE2, 3)
    assert len(classes) == 2
    assert classes[0].representative == Relation(2, 1, frozenset({(0,), (1,)}))
    assert classes[1].representative == LEQ
    # equivalence relations on the coordinates give the first class, other preorders the second
    assert [c.count for c in classes] == [8, 26]
    print("[OK] Lattice census")


def test_stone_census_golden():
    """The 3-element Stone chain has 13 compatible relations up to arity 2, in 5 classes"""
    assert alternating_alter_ego(1).algebra == STONE
    classes = census(STONE, 2)
    assert [c.count for c in classes] == [3, 5, 1, 2, 2]
    assert [c.arity for c in classes] == [1, 1, 2, 2, 2]
    assert classes[0].representative == Relation(3, 1, frozenset({(0,), (1,), (2,)}))
    assert classes[1].representative == Relation(3, 1, frozenset({(0,), (2,)}))
    assert classes[2].representative == Relation(3, 2, frozenset({(0, 0), (1, 1), (1, 2), (2, 1), (2, 2)}))
    assert classes[3].representative == Relation(3, 2, frozenset({(0, 0), (1, 1), (1, 2), (2, 2)}))
    assert classes[4].representative == Relation(3, 2, frozenset({(0, 0), (1, 2), (2, 2)}))
    print("[OK] Stone census")


def test_indecomposable_census_keeps_every_class():
    """Dropping products loses no class on the 2-element lattice or the Stone chain"""
    assert len(census(LATTICE2, 3, indecomposable_only=True)) == len(census(LATTICE2, 3)) == 2
    reduced = census(STONE, 2, indecomposable_only=True)
    assert len(reduced) == len(census(STONE, 2)) == 5
    assert [c.count for c in reduced] == [2, 2, 1, 2, 2]


@pytest.mark.slow
def test_indecomposable_census_at_arity_three():
    full = census(STONE, 3)
    reduced = census(STONE, 3, indecomposable_only=True)
    assert 5 <= len(reduced) <= len(full)


def test_structure_host_closes_under_its_operations():
    """A structure contributes its unary operations and no constants"""
    found = list(enumerate_compatible(FAN, 1))
    assert len(found) == 8
    assert all((3,) in r for r in found)
    assert host_of(FAN).constants == ()
    assert generate_closure(FAN, 1, [(0,)]).tuples == frozenset({(0,), (3,)})
    with pytest.raises(MalformedInputError):
        host_of("not a host")
    with pytest.raises(MalformedInputError):
        lattice_from_order(2, [])


def test_transfer_from_two_to_four_element_boolean():
    """B2 divides B4, and B4 has at least as many classes"""
    assert divisor(dual_space(B2), dual_space(B4)) is not None
    witness = algebra_divisor(B2, B4)
    lifted = lift_relation(Relation(2, 1, frozenset({(0,), (1,)})), B4, witness)
    assert lifted == Relation(4, 1, frozenset({(0,), (3,)}))
    report = transfer_check(B2, B4, 2)
    assert report.divisor and report.separated
    assert report.classes == 1
    assert len(census(B2, 2)) <= len(census(B4, 2))


def test_transfer_separates_kleene_classes_in_its_square():
    """Distinct classes of the Kleene chain stay distinct once lifted into its square"""
    square = product_algebra(KLEENE, KLEENE)
    report = transfer_check(KLEENE, square, 2)
    assert report.divisor
    assert report.pairs_checked == report.classes * (report.classes - 1) // 2 >= 1
    assert report.separated
    assert not transfer_check(KLEENE, B2).divisor
    print("[OK] Transfer")
