"""Independent reference implementations used as test oracles.

These deliberately avoid the optimized code paths: a plain FIFO breadth-first
search for distances, permutation brute force for anagram offsets, and a
region-boundary walk for digitized rays. The self-test suite and the test
suite compare them against the production implementations.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .groups import GroupElement, MarkedGroup


def naive_ball(group: MarkedGroup, radius: int) -> dict[tuple, int]:
    """Textbook FIFO BFS over the Cayley graph; key -> distance."""
    gens = [g for _, g in group.generator_items()]
    e = group.identity
    dist = {e.key(): 0}
    queue = deque([(e, 0)])
    while queue:
        g, d = queue.popleft()
        if d == radius:
            continue
        for s in gens:
            h = g * s
            k = h.key()
            if k not in dist:
                dist[k] = d + 1
                queue.append((h, d + 1))
    return dist


def naive_length(group: MarkedGroup, g: GroupElement, radius: int) -> int | None:
    """Word length via naive_ball, None if above the radius."""
    return naive_ball(group, radius).get(g.key())


def brute_force_anagram_offsets(group: MarkedGroup, word: Sequence[str]) -> set[int]:
    """Central offsets of all reorderings of ``word``, by full enumeration.

    Returns offsets in units of the positive generator of the commutator
    subgroup. Only sensible for short words (|word| <= 8 or so).
    """
    from itertools import permutations

    unit = group.commutator_unit
    if unit is None:
        raise ValueError("needs a non-degenerate Heisenberg marked group")
    base = group.evaluate(word)
    offsets = set()
    for perm in set(permutations(word)):
        g = group.evaluate(perm)
        diff = g.c - base.c
        assert g.a == base.a and g.b == base.b and diff % unit == 0
        offsets.add(diff // unit)
    return offsets


def brute_force_digitized(direction: tuple[int, int], n: int) -> tuple[str, ...]:
    """First-quadrant digitized ray by explicit square classification.

    Classifies every square center in a window by which side of the ray it
    lies on (on-line centers alternate starting below), then reads the
    boundary staircase column by column as the largest classified-below
    height. Independent of the incremental construction used in production.
    """
    a, b = direction
    assert a > 0 and b > 0
    width = n + 2
    max_below: dict[int, int] = {}
    ties: list[tuple[int, int]] = []
    for i in range(width):
        jhi = (b * (2 * i + 1)) // (2 * a) + 2
        best = None
        for j in range(-2, jhi + 1):
            lhs = b * (2 * i + 1)
            rhs = a * (2 * j + 1)
            if lhs > rhs:
                best = j if best is None else max(best, j)
            elif lhs == rhs:
                ties.append((i, j))
        max_below[i] = best if best is not None else -1
    # on-line squares alternate below/above along the ray, nearest first,
    # starting with below
    ties.sort()
    for idx, (i, j) in enumerate(ties):
        if idx % 2 == 0:
            max_below[i] = max(max_below[i], j)
    letters: list[str] = []
    height = 0
    for i in range(width):
        top = max_below[i] + 1  # the path's horizontal run in column i
        while height < top and len(letters) < n:
            letters.append("y")
            height += 1
        if len(letters) < n:
            letters.append("x")
    return tuple(letters[:n])
