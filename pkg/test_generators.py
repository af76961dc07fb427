"""
Test Generators
Counts of small orders, spaces and dual class members
"""
import pytest

from ockhamlab.errors import MalformedInputError
from ockhamlab.generators import (
    dual_class_parts, generating_sets, is_generating, orders_up_to_iso, rooted_orders, spaces_up_to_iso,
    ug_structures,
)
from ockhamlab.piggyback import dual_class_member
from ockhamlab.structures import UG_SIGNATURE, FinStructure, validate_ockham_space


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 5), (4, 16)])
def test_orders_up_to_iso(n, count):
    """Unlabelled posets on n points"""
    assert len(orders_up_to_iso(n)) == count


@pytest.mark.slow
def test_orders_on_five_points():
    assert len(orders_up_to_iso(5)) == 63


def test_rooted_orders():
    """Every rooted order has n-1 as its greatest element"""
    assert rooted_orders(1) == ((),)
    assert rooted_orders(2) == (((0, 1),),)
    assert len(rooted_orders(4)) == 5
    for pairs in rooted_orders(4):
        assert all((x, 3) in pairs for x in range(3))


def test_small_spaces():
    """Six spaces on two points: three on the antichain, three on the chain"""
    assert len(spaces_up_to_iso(1)) == 1
    spaces = spaces_up_to_iso(2)
    assert len(spaces) == 6
    assert all(validate_ockham_space(X).ok for X in spaces_up_to_iso(3))
    assert len(ug_structures(2)) == 7
    with pytest.raises(MalformedInputError):
        spaces_up_to_iso(5)
    print("[OK] Small spaces")


def test_dual_class_parts():
    """Members are u-connected and satisfy the intrinsic conditions"""
    parts = dual_class_parts(1, 3)
    assert len(parts) == 4
    assert len(dual_class_parts(3, 3)) == 5
    for M in parts:
        assert dual_class_member(M, 1, check_isp=False).member
    for M in dual_class_parts(3, 4):
        assert dual_class_member(M, 3, check_isp=False).member
    with pytest.raises(MalformedInputError):
        dual_class_parts(2, 3)
    print("[OK] Dual class parts")


def test_generating_sets():
    fan = FinStructure(
        UG_SIGNATURE, 4, {"u": (3, 3, 3, 3)},
        {"leq": {(0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (1, 3), (2, 3)}},
    )
    assert generating_sets(fan) == [(0, 1, 2), (0, 1, 2, 3)]
    assert is_generating(fan, [0, 1, 2])
    assert not is_generating(fan, [])
    assert not is_generating(fan, [0, 3])
