"""Weighted balanced separators from a tree decomposition.

For a graph with a decomposition of width ``t`` and nonnegative weights the
separator ``S`` has at most ``t + 1`` vertices, no edge joins ``L`` and
``R``, every component of ``G - S`` weighs at most ``w(V)/2``, and both sides
weigh between a third and two thirds of ``w(V) - w(S)``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..graph import Graph, components
from .decomposition import TreeDecomposition, validate_decomposition

CHECK_INVARIANTS = bool(os.environ.get("BIDEPTAS_CHECK"))

# graphs this small get an exhaustive fallback over all candidate separators
EXHAUSTIVE_N = 18
# bags around the centroid searched before widening to the whole tree
NEAR_BAGS = 8


class SeparatorError(ValueError):
    pass


@dataclass(frozen=True)
class TriPartition:
    left: frozenset[int]
    sep: frozenset[int]
    right: frozenset[int]
    w_left: float
    w_sep: float
    w_right: float
    balanced: bool = True  # False when only the component bound could be met

    @property
    def w_total(self):
        return self.w_left + self.w_sep + self.w_right


def _weights(g: Graph, w) -> list:
    if isinstance(w, Mapping):
        out = [w.get(v, 0) for v in range(g.n)]
    else:
        out = list(w)
        if len(out) != g.n:
            raise SeparatorError(f"{len(out)} weights for {g.n} vertices")
    for v, x in enumerate(out):
        if x < 0:
            raise SeparatorError(f"negative weight {x} on vertex {v}")
    return out


def separator_violations(g: Graph, part: TriPartition, w, t: int) -> list[str]:
    """Recompute the three separator conditions from scratch."""
    w = _weights(g, w)
    errs = []
    L, S, R = part.left, part.sep, part.right
    if L & S or L & R or S & R or len(L | S | R) != g.n:
        errs.append("L, S, R do not partition V")
    if len(S) > t + 1:
        errs.append(f"|S| = {len(S)} > t + 1 = {t + 1}")
    for v in L:
        if any(u in R for u in g.adj[v]):
            errs.append(f"edge between L and R at {v}")
            break
    total = sum(w)
    for comp in components(g, set(range(g.n)) - S):
        cw = sum(w[v] for v in comp)
        if 2 * cw > total:
            errs.append(f"component of weight {cw} > w(V)/2 = {total / 2}")
            break
    rest = total - sum(w[v] for v in S)
    if rest > 0:
        for name, side in (("L", L), ("R", R)):
            sw = sum(w[v] for v in side)
            if not (rest <= 3 * sw <= 2 * rest):
                errs.append(f"w({name}) = {sw} outside [{rest / 3}, {2 * rest / 3}]")
    return errs


def _pack(comps):
    """Split weighted components into two sides inside the 1/3..2/3 window.

    ``comps`` holds ``(weight, vertices)`` pairs.  Returns ``(L, R)`` or None.
    """
    rest = sum(cw for cw, _ in comps)
    comps = sorted(comps, key=lambda x: (-x[0], min(x[1])))
    left, right = [], []
    if rest > 0:
        top = comps[0][0]
        if 3 * top > 2 * rest:
            return None
        if 3 * top >= rest:
            left = [comps[0][1]]
            right = [c for _, c in comps[1:]]
            return left, right
    wl = wr = 0
    for cw, c in comps:
        if wl <= wr:
            left.append(c)
            wl += cw
        else:
            right.append(c)
            wr += cw
    return left, right


def _try(g, w, total, sep, allow_unbalanced=False):
    pool = set(range(g.n)) - sep
    comps = []
    for comp in components(g, pool):
        cw = sum(w[v] for v in comp)
        if 2 * cw > total:
            return None
        comps.append((cw, comp))
    packed = _pack(comps) if comps else ([], [])
    balanced = packed is not None
    if not balanced:
        if not allow_unbalanced:
            return None
        packed = _pack_any(comps)
    left = frozenset().union(*packed[0])
    right = frozenset().union(*packed[1])
    return TriPartition(
        left, frozenset(sep), right,
        sum(w[v] for v in left), sum(w[v] for v in sep), sum(w[v] for v in right),
        balanced,
    )


def _pack_any(comps):
    comps = sorted(comps, key=lambda x: (-x[0], min(x[1])))
    return [comps[0][1]], [c for _, c in comps[1:]]


def _centroid(g, td, w, total):
    """Bag whose removal leaves branches of weight at most ``total/2``."""
    k = len(td.bags)
    nb = td.tree_adjacency()
    parent = [-1] * k
    parent[0] = 0
    order = [0]
    for t in order:
        for c in sorted(nb[t]):
            if parent[c] == -1:
                parent[c] = t
                order.append(c)
    top = {}
    for t in order:
        for v in td.bags[t]:
            top.setdefault(v, t)
    below = [0] * k
    for v, t in top.items():
        below[t] += w[v]
    for t in reversed(order[1:]):
        below[parent[t]] += below[t]
    cur = 0
    while True:
        heavy = [c for c in sorted(nb[cur]) if c != parent[cur] and 2 * below[c] > total]
        if not heavy:
            return cur, parent
        cur = heavy[0]


def balanced_separator(g: Graph, td: TreeDecomposition, w: Sequence | Mapping,
                       strict: bool = True, check: bool | None = None,
                       search_bags: int | None = None, prefer=None) -> TriPartition:
    """Balanced (L, S, R) partition with ``|S| <= width + 1``.

    Subsets of the centroid bag are tried smallest first, then subsets of
    bags near it (and on graphs of at most ``EXHAUSTIVE_N`` vertices, every
    set of at most ``t + 1`` vertices).  A candidate is accepted when every
    component of ``G - S`` weighs at most ``w(V)/2`` and the components can
    be packed into the 1/3..2/3 window.  When no candidate works a :class:`SeparatorError` is raised,
    or with ``strict=False`` the centroid partition is returned with
    ``balanced=False``; it still satisfies the first two conditions.
    ``search_bags`` caps how many bags the fallback visits (None: all).
    With a ``prefer`` key, every valid candidate from the nearby bags is
    scored and the smallest key wins instead of the first one found.
    """
    w = _weights(g, w)
    if check is None:
        check = CHECK_INVARIANTS
    if check:
        bad = validate_decomposition(g, td)
        if bad:
            raise SeparatorError(f"invalid decomposition: {bad[0]}")
    t = td.width
    total = sum(w)
    if g.n == 0:
        return TriPartition(frozenset(), frozenset(), frozenset(), 0, 0, 0)

    b, parent = _centroid(g, td, w, total)
    near = search_bags if search_bags is not None else NEAR_BAGS
    part = _search(g, td, w, total, b, near, prefer)
    if part is None and search_bags is None:
        part = _search(g, td, w, total, b, None)
    if part is None:
        if strict:
            raise SeparatorError(
                "no separator of size <= t+1 meets both the component bound and "
                "the 1/3..2/3 window for these weights")
        part = _try(g, w, total, set(td.bags[b]), allow_unbalanced=True)
    if check:
        errs = separator_violations(g, part, w, t)
        if not part.balanced:
            errs = [e for e in errs if not e.startswith("w(")]
        if errs:
            raise AssertionError(f"separator invariant broken: {errs}")
    return part


def _search(g, td, w, total, start, max_bags=None, prefer=None):
    """Smallest-first search over subsets of bags near ``start``."""
    t = td.width
    nb = td.tree_adjacency()
    seen = {start}
    queue = [start]
    i = 0
    while i < len(queue) and (max_bags is None or i < max_bags):
        for c in sorted(nb[queue[i]]):
            if c not in seen:
                seen.add(c)
                queue.append(c)
        i += 1
    bags = [sorted(td.bags[node]) for node in queue[:i]]
    tried = set()
    best = None
    for size in range(t + 2):
        for bag in bags:
            for sub in itertools.combinations(bag, size):
                key = frozenset(sub)
                if key in tried:
                    continue
                tried.add(key)
                part = _try(g, w, total, set(sub))
                if part is None:
                    continue
                if prefer is None:
                    return part
                score = prefer(part)
                if best is None or score < best[0]:
                    best = (score, part)
    if best is not None:
        return best[1]
    if g.n <= EXHAUSTIVE_N and max_bags is None:
        for size in range(0, min(t + 1, g.n) + 1):
            for sub in itertools.combinations(range(g.n), size):
                key = frozenset(sub)
                if key in tried:
                    continue
                tried.add(key)
                part = _try(g, w, total, set(sub))
                if part is not None:
                    return part
    return None
