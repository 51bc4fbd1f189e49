"""Feasibility predicates, computed from plain vertex sets.

These deliberately share no code with the DP tables or the bitmask oracle so
that every solver output can be re-verified by a second route.
"""

from __future__ import annotations

from .graph import Graph, components, is_connected, is_forest


def is_vertex_cover(g: Graph, s) -> bool:
    s = set(s)
    return all(u in s or v in s for u, v in g.edges())


def covered_edges(g: Graph, s) -> int:
    s = set(s)
    return sum(1 for u, v in g.edges() if u in s or v in s)


def is_feedback_vertex_set(g: Graph, s) -> bool:
    return is_forest(g, s)


def is_dominating(g: Graph, s, r_free=()) -> bool:
    """Every vertex outside ``s`` and ``r_free`` has a neighbour in ``s``."""
    s = set(s)
    free = set(r_free)
    return all(v in s or v in free or any(u in s for u in g.adj[v]) for v in range(g.n))


def is_cvc_annotated(g: Graph, s, r, connected: bool = False) -> bool:
    s = set(s)
    if not is_vertex_cover(g, s):
        return False
    comps = components(g, s)
    if connected:
        return len(comps) <= 1
    r = set(r)
    return all(c & r for c in comps)


def is_connected_vertex_cover(g: Graph, s) -> bool:
    return is_cvc_annotated(g, s, (), connected=True)


def is_maxleaf_annotated(g: Graph, s, r, connected: bool = False) -> bool:
    s = set(s)
    r = set(r)
    for v in s:
        if v not in r and all(u in s for u in g.adj[v]):
            return False
    rest = set(range(g.n)) - s
    comps = components(g, rest)
    if connected:
        return len(comps) == 1
    return all(c & r for c in comps)


def is_cycle_packing(g: Graph, cycles) -> bool:
    seen = set()
    for cyc in cycles:
        cyc = list(cyc)
        if len(cyc) < 3 or len(set(cyc)) != len(cyc):
            return False
        if seen & set(cyc):
            return False
        seen.update(cyc)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if not g.has_edge(a, b):
                return False
    return True


def tree_leaves(n: int, edges) -> frozenset[int]:
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return frozenset(v for v in range(n) if deg[v] == 1)


def is_spanning_tree(g: Graph, edges) -> bool:
    edges = list(edges)
    if any(not g.has_edge(u, v) for u, v in edges):
        return False
    if len(edges) != max(g.n - 1, 0):
        return False
    t = Graph(g.n, [(min(u, v), max(u, v)) for u, v in edges])
    return is_connected(t)


def check(problem: str, g: Graph, witness, R=(), budget=None, connected=False):
    """``(feasible, objective)`` of ``witness`` for ``problem`` on ``g``."""
    if problem == "vc":
        return is_vertex_cover(g, witness), len(witness)
    if problem == "fvs":
        return is_feedback_vertex_set(g, witness), len(witness)
    if problem == "ds":
        return is_dominating(g, witness), len(witness)
    if problem == "ds-annotated":
        return is_dominating(g, witness, R), len(witness)
    if problem == "cvc":
        return is_connected_vertex_cover(g, witness), len(witness)
    if problem == "cvc-annotated":
        return is_cvc_annotated(g, witness, R, connected), len(witness)
    if problem == "maxleaf-annotated":
        return is_maxleaf_annotated(g, witness, R, connected), len(witness)
    if problem == "partial-vc":
        return covered_edges(g, witness) >= budget, len(witness)
    if problem == "cycle-packing":
        return is_cycle_packing(g, witness), len(witness)
    if problem == "max-leaf":
        edges = witness["edges"]
        ok = is_spanning_tree(g, edges)
        leaves = tree_leaves(g.n, edges)
        return ok and leaves == frozenset(witness["leaves"]), len(leaves)
    raise ValueError(f"unknown problem {problem!r}")
