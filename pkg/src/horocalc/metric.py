"""Exact word metrics on implicit Cayley graphs: balls, lengths, geodesic tests.

The length engine is a bidirectional level-synchronous search pruned by the
abelianized gauge, which lower-bounds word length (each generator projects
into the unit ball of the gauge). The heuristic is admissible, so results
are exact and "exceeds budget" is a proved claim whenever the frontiers were
exhausted rather than capped.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .errors import BudgetExceededError, DegenerateInputError
from .groups import GroupElement, MarkedGroup
from .polytope import IMPROPER, Face, Polytope

DEFAULT_STATE_CAP = 2_000_000


@dataclass
class DistanceTable:
    """Exact ball: canonical element key -> word length, complete up to radius."""

    group_hash: str
    radius: int
    entries: dict[tuple, int]

    def distance(self, key: tuple) -> int | None:
        return self.entries.get(key)

    def sphere_sizes(self) -> list[int]:
        out = [0] * (self.radius + 1)
        for d in self.entries.values():
            out[d] += 1
        return out

    def __len__(self):
        return len(self.entries)


@lru_cache(maxsize=64)
def projected_polytope(group: MarkedGroup) -> Polytope:
    """Convex hull of the abelianized generators, with labeled point lookup."""
    pts = [g.abelianized() for _, g in group.generator_items()]
    return Polytope(pts)


@lru_cache(maxsize=64)
def _gauge_ceil_fn(group: MarkedGroup) -> Callable[[tuple[int, ...]], int] | None:
    """ceil(gauge(v)) as pure integer arithmetic, or None when unavailable."""
    poly = projected_polytope(group)
    if poly.dim != poly.ambient:
        return None
    try:
        facets = poly.integer_facets()
    except DegenerateInputError:
        return None
    if any(c <= 0 for _, c in facets):
        return None

    def gauge_ceil(v: tuple[int, ...]) -> int:
        best = 0
        for cov, off in facets:
            num = sum(a * b for a, b in zip(cov, v))
            if num > 0:
                q = -(-num // off)
                if q > best:
                    best = q
        return best

    return gauge_ceil


def gauge_lower_bound(group: MarkedGroup, g: GroupElement) -> int:
    """ceil of the abelianized gauge: a proved lower bound for word length."""
    fn = _gauge_ceil_fn(group)
    if fn is None:
        return 0
    return fn(g.abelianized())


def ball(group: MarkedGroup, radius: int, max_entries: int | None = None) -> DistanceTable:
    """Complete exact ball of the given radius around the identity.

    Level-synchronous expansion over canonical keys; the table content is
    deterministic. ``max_entries`` turns memory pressure into a typed error
    carrying the last completed radius.
    """
    if radius < 0:
        raise DegenerateInputError("radius must be >= 0")
    gens = [g for _, g in group.generator_items()]
    e = group.identity
    entries: dict[tuple, int] = {e.key(): 0}
    frontier: list[GroupElement] = [e]
    for r in range(1, radius + 1):
        nxt: list[GroupElement] = []
        for g in frontier:
            for s in gens:
                h = g * s
                k = h.key()
                if k not in entries:
                    entries[k] = r
                    nxt.append(h)
        if max_entries is not None and len(entries) > max_entries:
            raise BudgetExceededError(
                f"ball exceeded {max_entries} entries at radius {r}",
                partial=DistanceTable(group.group_hash, r - 1,
                                      {k: d for k, d in entries.items() if d < r}),
            )
        frontier = nxt
    return DistanceTable(group.group_hash, radius, entries)


@dataclass
class LengthResult:
    """Outcome of a bounded word-length query.

    ``status``: ``exact`` (length holds), ``exceeds_budget`` (proved
    > budget), or ``inconclusive`` (state cap hit before a verdict).
    """

    status: str
    length: int | None
    budget: int
    lower_bound: int
    expanded: int

    @property
    def exact(self) -> bool:
        return self.status == "exact"


def word_length(
    group: MarkedGroup,
    g: GroupElement,
    budget: int,
    state_cap: int | None = DEFAULT_STATE_CAP,
) -> LengthResult:
    """Exact word length of g if <= budget, bidirectional search otherwise proved.

    Both frontiers prune states whose depth plus remaining gauge exceeds the
    budget; that never discards a viable path, so an exhausted search is a
    proof of ``exceeds_budget``.
    """
    if budget < 0:
        raise DegenerateInputError("budget must be >= 0")
    lower = gauge_lower_bound(group, g)
    if g.is_identity():
        return LengthResult("exact", 0, budget, lower, 0)
    if lower > budget:
        return LengthResult("exceeds_budget", None, budget, lower, 0)

    gauge_fn = _gauge_ceil_fn(group)
    gens = [s for _, s in group.generator_items()]
    e = group.identity
    target_ab = g.abelianized()

    fwd: dict[tuple, int] = {e.key(): 0}
    bwd: dict[tuple, int] = {g.key(): 0}
    fwd_frontier: list[GroupElement] = [e]
    bwd_frontier: list[GroupElement] = [g]
    df = db = 0
    best = None
    expanded = 0

    def fwd_h(elem: GroupElement) -> int:
        if gauge_fn is None:
            return 0
        ab = elem.abelianized()
        return gauge_fn(tuple(t - a for t, a in zip(target_ab, ab)))

    def bwd_h(elem: GroupElement) -> int:
        if gauge_fn is None:
            return 0
        return gauge_fn(elem.abelianized())

    while True:
        if best is not None and best <= budget and df + db >= best:
            return LengthResult("exact", best, budget, lower, expanded)
        if df + db >= budget:
            # every length <= df+db would have produced a meeting by now
            return LengthResult("exceeds_budget", None, budget, lower, expanded)
        if not fwd_frontier and not bwd_frontier:
            if best is not None and best <= budget:
                return LengthResult("exact", best, budget, lower, expanded)
            return LengthResult("exceeds_budget", None, budget, lower, expanded)

        forward = bool(fwd_frontier) and (not bwd_frontier or len(fwd) <= len(bwd))
        if forward:
            frontier, seen, other, depth, h = fwd_frontier, fwd, bwd, df + 1, fwd_h
        else:
            frontier, seen, other, depth, h = bwd_frontier, bwd, fwd, db + 1, bwd_h
        nxt: list[GroupElement] = []
        for node in frontier:
            for s in gens:
                child = node * s
                k = child.key()
                if k in seen:
                    continue
                if depth + h(child) > budget:
                    continue
                seen[k] = depth
                expanded += 1
                od = other.get(k)
                if od is not None:
                    cand = depth + od
                    if best is None or cand < best:
                        best = cand
                nxt.append(child)
        if state_cap is not None and len(fwd) + len(bwd) > state_cap:
            levels = (depth + db) if forward else (df + depth)
            if best is not None and best <= budget and levels >= best:
                return LengthResult("exact", best, budget, lower, expanded)
            return LengthResult("inconclusive", best, budget, lower, expanded)
        if forward:
            fwd_frontier, df = nxt, depth
        else:
            bwd_frontier, db = nxt, depth


def distance(
    group: MarkedGroup,
    g: GroupElement,
    h: GroupElement,
    budget: int,
    state_cap: int | None = DEFAULT_STATE_CAP,
) -> LengthResult:
    """d(g, h) = |g^{-1} h| under left invariance."""
    return word_length(group, g.inverse() * h, budget, state_cap)


@dataclass(frozen=True)
class Certificate:
    """Face certificate for geodesity: all letters project into a proper face."""

    certified: bool
    face: Face | None = None


def geodesic_certificate_by_face(group: MarkedGroup, word: Sequence[str]) -> Certificate:
    """Certified when the abelianized letters share a proper face of the hull.

    Then any functional supporting that face evaluates to exactly 1 per
    letter, so the abelianized gauge of every prefix equals its length and
    the word is geodesic. ``Unknown`` (certified=False) is not a refutation.
    """
    if not word:
        return Certificate(True, None)
    poly = projected_polytope(group)
    pts = {group.generator(letter).abelianized() for letter in word}
    face = poly.minimal_face_of_points(list(pts))
    if face is IMPROPER:
        return Certificate(False, None)
    return Certificate(True, face)


def is_geodesic_word(
    group: MarkedGroup,
    word: Sequence[str],
    state_cap: int | None = DEFAULT_STATE_CAP,
) -> bool:
    """True iff every prefix evaluates to an element of length = prefix length."""
    if geodesic_certificate_by_face(group, word).certified:
        return True
    g = group.identity
    for i, letter in enumerate(word, start=1):
        g = g * group.generator(letter)
        res = word_length(group, g, budget=i, state_cap=state_cap)
        if res.status == "inconclusive":
            raise BudgetExceededError(f"state cap hit while checking prefix {i}")
        if not (res.exact and res.length == i):
            return False
    return True
