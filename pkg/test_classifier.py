"""
Test Classifier
Catalog spaces, both finiteness criteria, constructive witnesses,
quasi-primality and subvariety tags
"""
import pytest

from ockhamlab.classifier import (
    OBSTACLES, CatalogKind, Outcome, catalog_algebra, catalog_match, catalog_space, classify_algebra,
    classify_space, is_quasiprimal, obstacle_divisors, obstacle_witness, subvariety_tags,
)
from ockhamlab.errors import MalformedInputError
from ockhamlab.generators import spaces_up_to_iso
from ockhamlab.structures import algebra_from_order, space_from_pairs

KLEENE = algebra_from_order(3, [(0, 1), (1, 2)], (2, 1, 0))
STONE = algebra_from_order(3, [(0, 1), (1, 2)], (2, 0, 0))
B2 = algebra_from_order(2, [(0, 1)], (1, 0))
B4 = algebra_from_order(4, [(0, 1), (0, 2), (1, 3), (2, 3)], (3, 2, 1, 0))


def test_catalog_spaces():
    """C_m is a g-cycle, D_m hangs 0 below m with g(0) = 1"""
    C3 = catalog_space("C", 3)
    assert C3.g == (1, 2, 0) and C3.is_antichain()
    D3 = catalog_space(CatalogKind.D, 3)
    assert D3.g == (1, 2, 3, 1)
    assert D3.le(0, 3)
    assert catalog_space("Dop", 3).le(3, 0)
    assert catalog_space("Y6").g == (1, 1, 0)
    assert catalog_algebra("D", 1).size == 3
    assert len(OBSTACLES) == 8
    print("[OK] Catalog")


@pytest.mark.parametrize("kind,m", [("C", 2), ("D", 0), ("Dop", None), ("Y1", 3), ("Z", None)])
def test_catalog_rejects_bad_parameters(kind, m):
    with pytest.raises(MalformedInputError):
        catalog_space(kind, m)


@pytest.mark.parametrize("kind,m", [("C", 1), ("C", 3), ("D", 1), ("D", 3), ("D", 5), ("Dop", 3)])
def test_catalog_spaces_have_finitely_many(kind, m):
    """Every catalog space is matched and has no obstacle divisor"""
    X = catalog_space(kind, m)
    verdict = classify_space(X)
    assert verdict.outcome == Outcome.FINITELY_MANY
    assert verdict.catalog.kind == CatalogKind(kind)
    assert verdict.catalog.m == m
    assert verdict.verify()
    assert obstacle_divisors(X) == {}


@pytest.mark.parametrize("kind", [k.value for k in OBSTACLES])
def test_obstacles_witness_themselves(kind):
    """The constructive witness for an obstacle is the identity onto it"""
    X = catalog_space(kind)
    verdict = classify_space(X)
    assert verdict.outcome == Outcome.INFINITELY_MANY
    assert verdict.witness.obstacle == CatalogKind(kind)
    assert verdict.witness.surjection.map == tuple(range(X.size))
    assert CatalogKind(kind) in verdict.obstacles
    assert verdict.verify()


def test_d5_verdict_document():
    """The verdict for D_5 carries its catalog evidence"""
    X = space_from_pairs(6, [(0, 5)], [1, 2, 3, 4, 5, 1])
    data = classify_space(X).to_dict()
    assert data["outcome"] == "FinitelyMany"
    assert data["catalog"]["kind"] == "D"
    assert data["catalog"]["m"] == 5
    assert data["obstacles"] == []
    print("[OK] D_5 is FinitelyMany")


def test_even_cycle_gives_y3():
    """C_2 is not in the catalog; its even cycle maps onto Y3"""
    C2 = space_from_pairs(2, [], [1, 0])
    assert catalog_match(C2) is None
    witness = obstacle_witness(C2)
    assert witness.obstacle == CatalogKind.Y3
    assert witness.subset == (0, 1)
    assert witness.verify(C2)
    assert witness.to_dict()["index"] == 3


def test_two_cycles_give_y1():
    X = space_from_pairs(4, [(0, 3)], [1, 2, 3, 1])
    X2 = space_from_pairs(5, [(0, 3)], [1, 2, 3, 1, 4])
    assert classify_space(X).finitely_many
    witness = obstacle_witness(X2)
    assert witness.obstacle == CatalogKind.Y1
    with pytest.raises(MalformedInputError):
        obstacle_witness(X)


def test_algebras():
    """Classification through the dual space"""
    assert classify_algebra(B2).finitely_many
    assert classify_algebra(STONE).finitely_many
    kleene = classify_algebra(KLEENE)
    assert kleene.outcome == Outcome.INFINITELY_MANY
    assert kleene.witness.obstacle == CatalogKind.Y3
    boolean4 = classify_algebra(B4)
    assert boolean4.witness.obstacle == CatalogKind.Y1
    trivial = algebra_from_order(1, [], (0,), check=False)
    with pytest.raises(MalformedInputError):
        classify_algebra(trivial)
    print("[OK] Algebra verdicts")


def test_quasiprimal():
    """Quasi-primal exactly when the dual space is an odd cycle"""
    assert is_quasiprimal(B2)
    assert is_quasiprimal(catalog_algebra("C", 3))
    assert not is_quasiprimal(catalog_algebra("D", 1))
    assert not is_quasiprimal(KLEENE)


def test_subvariety_tags():
    assert subvariety_tags(catalog_space("C", 1)) == frozenset({"Boolean", "Kleene", "DeMorgan", "Stone", "MS"})
    assert subvariety_tags(catalog_space("Y3")) == frozenset({"Kleene", "DeMorgan", "MS"})
    assert subvariety_tags(space_from_pairs(2, [], [1, 0])) == frozenset({"DeMorgan", "MS"})
    assert subvariety_tags(catalog_space("D", 1)) == frozenset({"Stone", "MS"})


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_criteria_agree_on_all_small_spaces(n):
    """Both criteria agree and the evidence re-verifies for every space up to four points"""
    finite = 0
    for X in spaces_up_to_iso(n):
        verdict = classify_space(X)
        assert verdict.verify()
        finite += verdict.finitely_many
    print(f"[OK] n={n}: {finite} of {len(spaces_up_to_iso(n))} spaces have finitely many")
