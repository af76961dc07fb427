"""
Enumerators for exhaustive cross-checks
Small posets, Ockham spaces and (u, leq)-structures up to isomorphism,
u-connected members of the dual class of the alternating alter ego, and
generating sets.
"""
import itertools
import logging
from functools import lru_cache
from typing import List, Sequence, Tuple

from .errors import MalformedInputError
from .morphisms import generated_subset
from .structures import UG_SIGNATURE, FinStructure, OckhamSpace, order_closure

logger = logging.getLogger(__name__)

Pairs = Tuple[Tuple[int, int], ...]

# Carriers above this are too slow for permutation canonical forms
MAX_ENUMERATION_SIZE = 5


def _check_size(n: int, limit: int = MAX_ENUMERATION_SIZE) -> None:
    if not 1 <= n <= limit:
        raise MalformedInputError(f"Enumeration size must be between 1 and {limit}, got {n}")


def _relabel(pairs: Sequence[Tuple[int, int]], perm: Sequence[int]) -> Pairs:
    return tuple(sorted((perm[x], perm[y]) for x, y in pairs))


def _strict_pairs(n: int, pairs: Sequence[Tuple[int, int]]) -> Pairs:
    leq = order_closure(n, pairs)
    return tuple((x, y) for x in range(n) for y in range(n) if x != y and leq[x, y])


@lru_cache(maxsize=None)
def orders_up_to_iso(n: int) -> Tuple[Pairs, ...]:
    """
    Partial orders on 0..n-1 up to isomorphism, as sorted strict pairs.

    Every order has a linear extension, so only subsets of pairs (i, j)
    with i < j are closed and tested.
    """
    _check_size(n)
    candidates = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    seen = set()
    found: List[Pairs] = []
    for mask in range(1 << len(candidates)):
        chosen = [candidates[i] for i in range(len(candidates)) if mask >> i & 1]
        strict = _strict_pairs(n, chosen)
        if len(strict) != len(chosen):
            continue
        canonical = min(_relabel(strict, p) for p in perms)
        if canonical not in seen:
            seen.add(canonical)
            found.append(canonical)
    logger.debug(f"{len(found)} orders on {n} points")
    return tuple(sorted(found, key=lambda pairs: (len(pairs), pairs)))


def rooted_orders(n: int) -> Tuple[Pairs, ...]:
    """Orders on 0..n-1 with greatest element n-1, up to isomorphism"""
    _check_size(n)
    if n == 1:
        return ((),)
    top = n - 1
    return tuple(tuple(sorted(pairs + tuple((x, top) for x in range(top)))) for pairs in orders_up_to_iso(n - 1))


def _order_reversing_maps(n: int, strict: Pairs) -> List[Tuple[int, ...]]:
    leq = order_closure(n, strict)
    maps = []
    for g in itertools.product(range(n), repeat=n):
        if all(leq[g[y], g[x]] for x, y in strict):
            maps.append(g)
    return maps


def _canonical_space(n: int, strict: Pairs, g: Sequence[int], perms) -> Tuple:
    best = None
    for p in perms:
        image = [0] * n
        for x in range(n):
            image[p[x]] = p[g[x]]
        form = (_relabel(strict, p), tuple(image))
        if best is None or form < best:
            best = form
    return best


@lru_cache(maxsize=None)
def spaces_up_to_iso(n: int) -> Tuple[OckhamSpace, ...]:
    """All Ockham spaces on n points up to isomorphism"""
    _check_size(n, 4)
    perms = list(itertools.permutations(range(n)))
    seen = set()
    found = []
    for strict in orders_up_to_iso(n):
        for g in _order_reversing_maps(n, strict):
            form = _canonical_space(n, strict, g, perms)
            if form in seen:
                continue
            seen.add(form)
            found.append(OckhamSpace(n, order_closure(n, form[0]), form[1]))
    logger.info(f"{len(found)} Ockham spaces on {n} points")
    return tuple(found)


def _ug(n: int, strict: Sequence[Tuple[int, int]], u: Sequence[int]) -> FinStructure:
    leq = order_closure(n, strict)
    pairs = frozenset((x, y) for x in range(n) for y in range(n) if leq[x, y])
    return FinStructure(UG_SIGNATURE, n, {"u": tuple(u)}, {"leq": pairs})


@lru_cache(maxsize=None)
def ug_structures(n: int) -> Tuple[FinStructure, ...]:
    """Structures with a unary u and an order leq on n points, up to isomorphism"""
    _check_size(n, 4)
    perms = list(itertools.permutations(range(n)))
    seen = set()
    found = []
    for strict in orders_up_to_iso(n):
        for u in itertools.product(range(n), repeat=n):
            form = _canonical_space(n, strict, u, perms)
            if form in seen:
                continue
            seen.add(form)
            found.append(_ug(n, form[0], form[1]))
    return tuple(found)


# ---------------------------------------------------------------------------
# Dual class of the alternating alter ego
# ---------------------------------------------------------------------------

def _compositions(total: int, parts: int) -> List[Tuple[int, ...]]:
    if parts == 1:
        return [(total,)] if total >= 1 else []
    return [(first,) + rest for first in range(1, total) for rest in _compositions(total - first, parts - 1)]


def _assemble(components: Sequence[Pairs]) -> FinStructure:
    """Components in cyclic order; u sends component i to the top of component i+1"""
    sizes = [max((y for _, y in pairs), default=0) + 1 for pairs in components]
    offsets = list(itertools.accumulate([0] + sizes[:-1]))
    tops = [offset + size - 1 for offset, size in zip(offsets, sizes)]
    k = len(components)
    u: List[int] = []
    strict = []
    for i, (pairs, offset, size) in enumerate(zip(components, offsets, sizes)):
        u += [tops[(i + 1) % k]] * size
        strict += [(x + offset, y + offset) for x, y in pairs]
    return _ug(sum(sizes), strict, u)


def dual_class_parts(m: int, size_cap: int) -> List[FinStructure]:
    """
    u-connected finite members of the dual class of the m-th alternating
    alter ego with at most size_cap elements.

    Each is a u-cycle of length k dividing m through the tops of k rooted
    components, every element of a component mapping to the next top.
    Cyclic rotations are identified.

    Raises:
        MalformedInputError: even m or a non-positive cap
    """
    if m < 1 or m % 2 == 0:
        raise MalformedInputError(f"m must be odd and positive, got {m}")
    if size_cap < 1:
        raise MalformedInputError(f"Size cap must be positive, got {size_cap}")
    found: List[FinStructure] = []
    for k in (d for d in range(1, m + 1) if m % d == 0):
        seen = set()
        for total in range(k, size_cap + 1):
            for sizes in _compositions(total, k):
                if max(sizes) > MAX_ENUMERATION_SIZE:
                    continue
                for choice in itertools.product(*(rooted_orders(s) for s in sizes)):
                    rotations = [choice[i:] + choice[:i] for i in range(k)]
                    canonical = min(rotations)
                    if canonical in seen:
                        continue
                    seen.add(canonical)
                    found.append(_assemble(canonical))
    logger.info(f"{len(found)} u-connected dual class members for m={m} up to size {size_cap}")
    return found


def generating_sets(M: FinStructure) -> List[Tuple[int, ...]]:
    """Subsets generating M under its operations, smallest first"""
    result = []
    for size in range(1, M.size + 1):
        for S in itertools.combinations(range(M.size), size):
            if len(generated_subset(M, S)) == M.size:
                result.append(S)
    return result


def is_generating(M: FinStructure, S: Sequence[int]) -> bool:
    return bool(S) and len(generated_subset(M, S)) == M.size

