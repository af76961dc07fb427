"""
Test Duality
H and K on objects and morphisms, unit and counit, algebra-side helpers
"""
import pytest

from ockhamlab.config import LabConfig, set_config
from ockhamlab.duality import (
    algebra_divisor, binary_reconstruction, bits_of, dual_algebra, dual_morphism, dual_space,
    endomorphisms, is_order_preserving_g, lattice_homs, lattice_homs_naive, round_trip, subuniverses, up_sets,
)
from ockhamlab.errors import ResourceCapError
from ockhamlab.generators import spaces_up_to_iso
from ockhamlab.morphisms import Morphism, isomorphic
from ockhamlab.structures import algebra_from_order, space_from_pairs, validate_ockham_algebra

KLEENE = algebra_from_order(3, [(0, 1), (1, 2)], (2, 1, 0), labels=("0", "a", "1"))
B2 = algebra_from_order(2, [(0, 1)], (1, 0))
C2 = space_from_pairs(2, [], [1, 0])
D3 = space_from_pairs(4, [(0, 3)], [1, 2, 3, 1])


def test_dual_space_of_kleene():
    """H of the 3-element Kleene chain is a 2-chain with g swapping its ends"""
    H = dual_space(KLEENE)
    assert H.labels == ("001", "011")
    assert H.le(0, 1)
    assert H.g == (1, 0)
    assert not is_order_preserving_g(H)
    print("[OK] H(Kleene)")


def test_dual_algebra_of_c2():
    """K of the swapped antichain is the 4-element lattice with two fixed points"""
    K = dual_algebra(C2)
    assert K.labels == ("00", "01", "10", "11")
    assert K.neg == (3, 1, 2, 0)
    assert validate_ockham_algebra(K).ok
    assert is_order_preserving_g(C2)
    assert len(up_sets(D3)) == 12
    print("[OK] K(C2)")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_round_trips(n):
    """The counit and the unit are isomorphisms for every small space"""
    for X in spaces_up_to_iso(n):
        witness = round_trip(X)
        assert witness.counit.is_injective()
        A = dual_algebra(X)
        assert lattice_homs(A) == lattice_homs_naive(A)
        assert round_trip(A).unit.is_surjective()
        assert isomorphic(dual_space(A), X) is not None


def test_bits_of():
    H = dual_space(KLEENE)
    assert bits_of(H, 1) == (0, 1, 1)


def test_dual_morphisms_of_identities():
    """Identities go to identities"""
    K = dual_algebra(C2)
    identity = Morphism(C2, C2, (0, 1))
    assert dual_morphism(identity).map == tuple(range(K.size))
    swap = Morphism(C2, C2, (1, 0))
    assert dual_morphism(swap).map == (0, 2, 1, 3)
    assert dual_morphism(Morphism(KLEENE, KLEENE, (0, 1, 2))).map == (0, 1)


def test_algebra_side_helpers():
    assert subuniverses(KLEENE) == [(0, 2), (0, 1, 2)]
    assert len(endomorphisms(KLEENE)) == 1
    witness = algebra_divisor(B2, KLEENE)
    assert witness is not None
    assert witness.subset == (0, 2)
    assert algebra_divisor(KLEENE, B2) is None


def test_binary_reconstruction():
    """The diagonal and the full square are rebuilt from their two space maps"""
    K = dual_algebra(C2)
    diagonal = {(a, a) for a in range(K.size)}
    result = binary_reconstruction(C2, diagonal)
    assert result.matches
    assert result.jointly_surjective
    square = {(a, b) for a in range(K.size) for b in range(K.size)}
    assert binary_reconstruction(C2, square).matches
    print("[OK] Binary reconstruction")


def test_algebra_caps():
    """The brute-force oracle has its own, smaller cap"""
    set_config(LabConfig().with_caps(algebra=2))
    assert dual_space(KLEENE).size == 2
    with pytest.raises(ResourceCapError):
        lattice_homs_naive(KLEENE)
    set_config(LabConfig().with_caps(structure=2))
    with pytest.raises(ResourceCapError):
        dual_space(KLEENE)
