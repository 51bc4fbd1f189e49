"""Exact treewidth for small graphs, used as a verification oracle.

Decision procedure for ``tw(G) <= k``: a connected set ``C`` whose
neighbourhood has at most ``k`` vertices is *good* when some ``v`` in ``C``
(the last vertex of ``C`` to be eliminated) splits ``C - v`` into components
that all have at most ``k`` neighbours and are good themselves.  Every
component of ``G`` is good exactly when an elimination ordering of width at
most ``k`` exists.  Results are memoised per set; the minor-min-width bound
and the min-fill heuristic bracket the values of ``k`` that get tried.
"""

from __future__ import annotations

import sys

from ..graph import Graph
from .decomposition import TreeDecomposition, decomposition_from_ordering, min_fill_ordering


class TreewidthBudgetError(RuntimeError):
    """The search expanded more sets than its budget allows."""


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _minor_min_width(adj, remaining):
    """Minor-min-width lower bound: contract min-degree vertices away."""
    nb = {v: adj[v] & remaining for v in _bits(remaining)}
    lb = 0
    while len(nb) > 1:
        v = min(nb, key=lambda x: (nb[x].bit_count(), x))
        dv = nb[v].bit_count()
        lb = max(lb, dv)
        if dv == 0:
            del nb[v]
            continue
        # contract into the neighbour sharing fewest neighbours
        u = min(_bits(nb[v]), key=lambda x: ((nb[x] & nb[v]).bit_count(), x))
        merged = (nb[u] | nb[v]) & ~((1 << u) | (1 << v))
        for w in _bits(nb[v]):
            if w != u:
                nb[w] = (nb[w] & ~(1 << v)) | (1 << u)
        for w in _bits(nb[u]):
            if w != v:
                nb[w] &= ~(1 << v)
        nb[u] = merged
        del nb[v]
    return lb


class _Decider:
    def __init__(self, adj, k, max_sets):
        self.adj = adj
        self.k = k
        self.max_sets = max_sets
        self.memo = {}

    def nbr(self, c):
        nb = 0
        for u in _bits(c):
            nb |= self.adj[u]
        return nb & ~c

    def comps(self, c):
        out = []
        adj = self.adj
        while c:
            low = c & -c
            comp = frontier = low
            while frontier:
                nb = 0
                for u in _bits(frontier):
                    nb |= adj[u]
                frontier = nb & c & ~comp
                comp |= frontier
            out.append(comp)
            c &= ~comp
        return out

    def good(self, c, nc):
        if c.bit_count() + nc.bit_count() <= self.k + 1:
            return True
        hit = self.memo.get(c)
        if hit is not None:
            return hit[0]
        if len(self.memo) >= self.max_sets:
            raise TreewidthBudgetError(f"exact treewidth search exceeded {self.max_sets} sets")
        # try vertices touching the boundary first; they keep pieces small
        order = sorted(_bits(c), key=lambda v: (-(self.adj[v] & nc).bit_count(), v))
        for v in order:
            pieces = []
            for d in self.comps(c & ~(1 << v)):
                nd = self.nbr(d)
                if nd.bit_count() > self.k:
                    break
                pieces.append((d, nd))
            else:
                if all(self.good(d, nd) for d, nd in pieces):
                    self.memo[c] = (True, v, pieces)
                    return True
        self.memo[c] = (False,)
        return False

    def ordering(self, c, nc, out):
        if c.bit_count() + nc.bit_count() <= self.k + 1:
            out.extend(_bits(c))
            return
        _, v, pieces = self.memo[c]
        for d, nd in pieces:
            self.ordering(d, nd, out)
        out.append(v)


def _order_width(adj, order):
    adj = list(adj)
    width = 0
    for v in order:
        nv = adj[v]
        width = max(width, nv.bit_count())
        for u in _bits(nv):
            adj[u] = (adj[u] | nv) & ~((1 << u) | (1 << v))
    return width


def exact_treewidth(g: Graph, ub: int | None = None, max_sets: int = 2_000_000):
    """Exact treewidth and an optimal decomposition.

    Returns ``(width, td)`` when the treewidth is at most ``ub`` (default
    ``n - 1``) and ``None`` when it exceeds ``ub``.  Raises
    :class:`TreewidthBudgetError` once more than ``max_sets`` sets have been
    examined for a single value of k.
    """
    if ub is None:
        ub = max(g.n - 1, 0)
    if g.n == 0:
        return 0, TreeDecomposition((frozenset(),), ())
    adj = [0] * g.n
    for v in range(g.n):
        for u in g.adj[v]:
            adj[v] |= 1 << u
    full = (1 << g.n) - 1
    heur = min_fill_ordering(g)
    hw = _order_width(adj, heur)
    lb = _minor_min_width(adj, full)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * g.n + 100))
    try:
        for k in range(lb, min(hw, ub + 1)):
            dec = _Decider(adj, k, max_sets)
            roots = dec.comps(full)
            if all(dec.good(c, 0) for c in roots):
                order = []
                for c in roots:
                    dec.ordering(c, 0, order)
                td = decomposition_from_ordering(g, order)
                assert td.width <= k, (td.width, k)
                return td.width, td
    finally:
        sys.setrecursionlimit(limit)
    if hw > ub:
        return None
    return hw, decomposition_from_ordering(g, heur)


def treewidth(g: Graph, max_sets: int = 2_000_000) -> int:
    return exact_treewidth(g, None, max_sets)[0]
