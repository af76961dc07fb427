"""
Test Piggyback
Alternating alter egos, Z-structures, dual class membership, shapes,
normal forms and the class count bound
"""
import pytest

from ockhamlab.classifier import catalog_space
from ockhamlab.errors import MalformedInputError
from ockhamlab.piggyback import (
    alternating_alter_ego, census_bound_check, dual_class_member, is_alter_ego, normalize,
    piggyback_alter_ego, shape_decompose, z_structure,
)
from ockhamlab.structures import UG_SIGNATURE, FinStructure, algebra_from_order, space_from_pairs


def ug(size, u, strict):
    """(u, leq)-structure from a table and strict order pairs"""
    leq = {(x, x) for x in range(size)} | set(strict)
    return FinStructure(UG_SIGNATURE, size, {"u": tuple(u)}, {"leq": leq})


FAN = ug(4, [3, 3, 3, 3], [(0, 3), (1, 3), (2, 3)])


def test_s1():
    """S_1 lives on 00, 01, 11 with 01 below 11"""
    ego = alternating_alter_ego(1)
    assert ego.structure.labels == ("00", "01", "11")
    assert ego.u("01") == "11"
    assert ego.u("00") == "00"
    assert ego.precedes("01", "11")
    assert not ego.precedes("00", "01")
    assert is_alter_ego(ego.algebra, ego.structure)
    with pytest.raises(MalformedInputError):
        ego.index_of("10")
    print("[OK] S_1")


def test_s3():
    ego = alternating_alter_ego(3)
    assert ego.size == 12
    assert ego.u("1001") == "0010"
    assert ego.precedes("0111", "1111")
    assert not ego.precedes("0110", "0111")
    assert alternating_alter_ego(3) is ego


def test_piggyback_preconditions():
    """g must preserve the order and the base point must generate"""
    with pytest.raises(MalformedInputError):
        piggyback_alter_ego(catalog_space("Y3"))
    with pytest.raises(MalformedInputError):
        piggyback_alter_ego(catalog_space("D", 3), 1)
    with pytest.raises(MalformedInputError):
        alternating_alter_ego(2)
    C1 = space_from_pairs(1, [], [0])
    ego = piggyback_alter_ego(C1)
    assert ego.size == 2
    assert ego.structure.rels["leq"] == frozenset({(0, 0), (1, 1)})


def test_is_alter_ego_rejects_incompatible_order():
    kleene = algebra_from_order(3, [(0, 1), (1, 2)], (2, 1, 0))
    chain = ug(3, [0, 1, 2], [(0, 1), (1, 2), (0, 2)])
    assert not is_alter_ego(kleene, chain)
    with pytest.raises(MalformedInputError):
        is_alter_ego(kleene, FAN)


@pytest.mark.parametrize("k,size", [(0, 2), (1, 2), (3, 4)])
def test_z_structures_embed(k, size):
    """Z_0 and Z_k for k dividing m embed in S_m"""
    z = z_structure(k, 3)
    assert z.structure.size == size
    assert z.embedding.is_injective()


def test_z_structure_parameters():
    with pytest.raises(MalformedInputError):
        z_structure(2, 3)
    z = z_structure(0, 1)
    assert alternating_alter_ego(1).structure.label(z.embedding.map[0]) == "01"


def test_dual_class_membership():
    """Intrinsic conditions agree with embeddability in a power of S_m"""
    report = dual_class_member(FAN, 1)
    assert report.member
    assert report.isp.member
    assert report.conditions["maximal_iff_fixed"]

    chain = ug(2, [0, 1], [(0, 1)])
    report = dual_class_member(chain, 1)
    assert not report.member
    assert report.failure == "u_constant_on_order"
    assert not report.isp.member

    assert dual_class_member(z_structure(3, 3).structure, 3).member
    print("[OK] Dual class membership")


def test_shape_decompose():
    """u-connected parts with their cycles of maxima"""
    parts = shape_decompose(FAN, 1)
    assert len(parts) == 1
    assert parts[0].shape.k == 1
    assert parts[0].shape.maxima == (3,)
    assert parts[0].shape.components == ((0, 1, 2, 3),)

    parts = shape_decompose(z_structure(3, 3).structure, 3)
    assert [p.elements for p in parts] == [(0,), (1, 2, 3)]
    assert parts[1].shape.k == 3
    assert parts[1].shape.maxima == (0, 2, 1)

    with pytest.raises(MalformedInputError):
        shape_decompose(ug(2, [0, 1], [(0, 1)]), 1)


def test_normalize_fan_with_top_generator():
    """A fan under a generating top shrinks to one edge"""
    result = normalize(FAN, [0, 1, 2, 3], 1)
    assert result.changed
    assert result.steps[0].case == 1
    assert result.elements == (0, 3)
    assert result.generators == (0, 1)
    assert result.steps[0].removed == (1, 2)
    assert not normalize(result.structure, result.generators, 1).changed
    print("[OK] Fan with generating top")


def test_normalize_fan_without_top_generator():
    result = normalize(FAN, [0, 1, 2], 1)
    assert result.steps[0].case == 2
    assert result.elements == (0, 1, 3)
    assert result.retraction == (0, 1, 0, 3)
    assert not normalize(result.structure, result.generators, 1).changed


@pytest.mark.parametrize("size,strict,gens,case,kept", [
    # 0 < 1 < 3 and 2 < 3, top generating
    (4, [(0, 1), (1, 3), (0, 3), (2, 3)], [0, 1, 2, 3], 3, (0, 1, 3)),
    # 0 < 1, 0 < 2 under the top, below part connected
    (4, [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)], [0, 1, 2], 4, (0, 1, 3)),
    # 0 < 1 under the top next to 2 and 3, below part disconnected
    (5, [(0, 1), (0, 4), (1, 4), (2, 4), (3, 4)], [0, 1, 2, 3], 5, (0, 1, 2, 4)),
])
def test_normalize_tall_components(size, strict, gens, case, kept):
    """Components of height two or more keep at most a, b, c and the top"""
    M = ug(size, [size - 1] * size, strict)
    result = normalize(M, gens, 1)
    assert [step.case for step in result.steps] == [case]
    assert result.steps[0].kept == kept
    again = normalize(result.structure, result.generators, 1)
    assert not again.changed


def test_normalize_preconditions():
    with pytest.raises(MalformedInputError):
        normalize(FAN, [0, 1], 1)
    with pytest.raises(MalformedInputError):
        normalize(z_structure(3, 3).structure, [0, 1], 3)
    chain = ug(3, [2, 2, 2], [(0, 1), (1, 2), (0, 2)])
    assert not normalize(chain, [0, 1, 2], 1).changed


def test_census_bound_small():
    """Few classes among the small members for m = 1"""
    report = census_bound_check(1, 3)
    assert report.ok
    assert report.bound == 8
    assert 0 < report.classes <= report.pairs
    print(f"[OK] m=1: {report.pairs} pairs in {report.classes} classes")


@pytest.mark.slow
@pytest.mark.parametrize("m,size_cap", [(1, 5), (3, 3)])
def test_census_bound(m, size_cap):
    report = census_bound_check(m, size_cap)
    assert report.ok
    assert report.classes <= m * 8 ** m


def test_piggyback_order_is_separated_by_u():
    """The values of u^k(a) at the base point tell the elements of K(D_3) apart"""
    S = piggyback_alter_ego(catalog_space("D", 3), 0).structure
    u = S.ops["u"]
    seen = set()
    for a in range(S.size):
        values, e = [], a
        for _ in range(2 * S.size):
            values.append(S.labels[e][0])
            e = u[e]
        seen.add(tuple(values))
    assert len(seen) == S.size
    leq = S.rels["leq"]
    assert all(a == b for a, b in leq if (b, a) in leq)
