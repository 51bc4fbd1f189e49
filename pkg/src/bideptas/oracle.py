"""Brute-force exact solvers on bitmasks, the ground truth for small graphs.

Subset problems enumerate candidates by size (ascending for minimisation,
descending for maximisation) and, within a size, in lexicographic order, so
the witness returned is the lexicographically smallest optimal one.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .graph import Graph
from .model import InfeasibleError, Solution

MAX_N = 16

SUBSET_PROBLEMS = ("vc", "fvs", "ds", "ds-annotated", "cvc", "cvc-annotated",
                   "partial-vc", "maxleaf-annotated")
PROBLEMS = SUBSET_PROBLEMS + ("cycle-packing", "max-leaf")


class OracleError(ValueError):
    pass


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _masks(g: Graph):
    adj = [0] * g.n
    for v in range(g.n):
        for u in g.adj[v]:
            adj[v] |= 1 << u
    return adj


def _comps(adj, within):
    out = []
    while within:
        comp = frontier = within & -within
        while frontier:
            nb = 0
            for u in _bits(frontier):
                nb |= adj[u]
            frontier = nb & within & ~comp
            comp |= frontier
        out.append(comp)
        within &= ~comp
    return out


def _edges_inside(adj, mask):
    return sum((adj[v] & mask).bit_count() for v in _bits(mask)) // 2


def _predicate(problem, g, adj, R, budget, connected):
    full = (1 << g.n) - 1
    rmask = sum(1 << v for v in R)

    def vc(s):
        return all(adj[v] & ~s == 0 for v in _bits(full & ~s))

    if problem == "vc":
        return vc
    if problem == "fvs":
        def fvs(s):
            rest = full & ~s
            return _edges_inside(adj, rest) == rest.bit_count() - len(_comps(adj, rest))
        return fvs
    if problem in ("ds", "ds-annotated"):
        free = rmask if problem == "ds-annotated" else 0

        def ds(s):
            return all(adj[v] & s for v in _bits(full & ~s & ~free))
        return ds
    if problem in ("cvc", "cvc-annotated"):
        single = connected or problem == "cvc"

        def cvc(s):
            if not vc(s):
                return False
            comps = _comps(adj, s)
            if single:
                return len(comps) <= 1
            return all(c & rmask for c in comps)
        return cvc
    if problem == "partial-vc":
        def pvc(s):
            return g.m - _edges_inside(adj, full & ~s) >= budget
        return pvc
    if problem == "maxleaf-annotated":
        def ml(s):
            for v in _bits(s & ~rmask):
                if adj[v] & ~s == 0:
                    return False
            comps = _comps(adj, full & ~s)
            if connected:
                return len(comps) == 1
            return all(c & rmask for c in comps)
        return ml
    raise OracleError(f"unknown problem {problem!r}")


def _subset_search(n, pred, maximize):
    sizes = range(n, -1, -1) if maximize else range(n + 1)
    for k in sizes:
        for combo in combinations(range(n), k):
            s = 0
            for v in combo:
                s |= 1 << v
            if pred(s):
                return frozenset(combo)
    return None


def _cycle_packing(g, adj):
    """Maximum vertex-disjoint cycle packing.

    Branches on the lowest remaining vertex: discard it, or use it on a
    chordless cycle inside the remaining vertices.  Chordless cycles suffice
    because any cycle's vertex set contains one.
    """

    def chordless_through(v, allowed):
        out = []
        others = allowed & ~(1 << v)
        nv = adj[v] & others

        def extend(path, pmask, inner):
            last = path[-1]
            for u in _bits(adj[last] & others & ~pmask):
                if adj[u] & inner:
                    continue  # chord to an earlier path vertex
                if adj[u] & (1 << v):
                    if u > path[0]:
                        out.append(path + [u])
                    continue
                extend(path + [u], pmask | (1 << u), inner | (1 << last))

        for first in _bits(nv):
            extend([first], 1 << first, 0)
        return [[v] + p for p in out]

    @lru_cache(maxsize=None)
    def best(remaining):
        if remaining.bit_count() < 3:
            return 0, ()
        v = (remaining & -remaining).bit_length() - 1
        top, pack = best(remaining & ~(1 << v))
        bound = remaining.bit_count() // 3
        if top == bound:
            return top, pack
        for cyc in chordless_through(v, remaining):
            cmask = sum(1 << u for u in cyc)
            if 1 + (remaining & ~cmask).bit_count() // 3 <= top:
                continue
            val, rest = best(remaining & ~cmask)
            if val + 1 > top:
                top, pack = val + 1, (tuple(cyc),) + rest
                if top == bound:
                    break
        return top, pack

    val, pack = best((1 << g.n) - 1)
    best.cache_clear()
    return val, [list(c) for c in pack]


def _max_leaf(g, adj):
    if g.n <= 1:
        return {"edges": [], "leaves": []}
    if g.n == 2:
        return {"edges": [(0, 1)], "leaves": [0, 1]}
    full = (1 << g.n) - 1

    def ok(s):
        rest = full & ~s
        if not rest:
            return False
        for v in _bits(s):
            if adj[v] & rest == 0:
                return False
        return len(_comps(adj, rest)) == 1

    leaves = _subset_search(g.n, ok, maximize=True)
    rest = [v for v in range(g.n) if v not in leaves]
    edges = []
    seen = {rest[0]}
    queue = [rest[0]]
    for v in queue:
        for u in g.adj[v]:
            if u not in seen and u not in leaves:
                seen.add(u)
                queue.append(u)
                edges.append((min(u, v), max(u, v)))
    for v in sorted(leaves):
        u = next(u for u in g.adj[v] if u not in leaves)
        edges.append((min(u, v), max(u, v)))
    deg = [0] * g.n
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    return {"edges": sorted(edges), "leaves": [v for v in range(g.n) if deg[v] == 1]}


def brute_force(problem: str, g: Graph, budget: int | None = None, R=(),
                connected: bool = False) -> Solution:
    """Exact optimum of ``problem`` on ``g`` (at most 16 vertices)."""
    if problem not in PROBLEMS:
        raise OracleError(f"unknown problem {problem!r}")
    if g.n > MAX_N:
        raise OracleError(f"oracle is capped at n <= {MAX_N}, got n={g.n}")
    adj = _masks(g)
    if problem == "cycle-packing":
        val, cycles = _cycle_packing(g, adj)
        return Solution(problem, cycles, val, True, "oracle")
    if problem == "max-leaf":
        if g.n and len(_comps(adj, (1 << g.n) - 1)) != 1:
            raise OracleError("max-leaf needs a connected graph")
        w = _max_leaf(g, adj)
        return Solution(problem, w, len(w["leaves"]), True, "oracle")
    if problem == "partial-vc":
        if budget is None or budget < 0:
            raise OracleError("partial-vc needs a budget t >= 0")
        if budget > g.m:
            raise InfeasibleError(f"budget t={budget} exceeds |E|={g.m}")
    pred = _predicate(problem, g, adj, frozenset(R), budget, connected)
    s = _subset_search(g.n, pred, maximize=problem == "maxleaf-annotated")
    if s is None:
        raise InfeasibleError(f"{problem} instance has no feasible solution")
    return Solution(problem, s, len(s), True, "oracle")


def max_independent_set(g: Graph) -> int:
    if g.n > MAX_N:
        raise OracleError(f"oracle is capped at n <= {MAX_N}")
    adj = _masks(g)
    for k in range(g.n, -1, -1):
        for combo in combinations(range(g.n), k):
            s = sum(1 << v for v in combo)
            if all(adj[v] & s == 0 for v in combo):
                return k
    return 0


def max_induced_forest(g: Graph) -> int:
    if g.n > MAX_N:
        raise OracleError(f"oracle is capped at n <= {MAX_N}")
    adj = _masks(g)
    for k in range(g.n, -1, -1):
        for combo in combinations(range(g.n), k):
            s = sum(1 << v for v in combo)
            if _edges_inside(adj, s) == k - len(_comps(adj, s)):
                return k
    return 0
