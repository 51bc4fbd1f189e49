"""Treewidth modulators of size O(OPT) for the supported problems."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, components, is_connected, is_forest, neighborhood
from .model import AnnotatedInstance
from .treewidth.decomposition import heuristic_decomposition
from .treewidth.nice import make_nice

log = logging.getLogger(__name__)


class TransversalError(ValueError):
    pass


def vc_matching_transversal(g: Graph) -> frozenset[int]:
    """Endpoints of a greedy maximal matching (edges scanned in sorted order)."""
    matched = set()
    for u, v in g.edges():
        if u not in matched and v not in matched:
            matched.update((u, v))
    return frozenset(matched)


def _semidisjoint_cycle(nbrs, alive):
    """A cycle on which at most one vertex has degree above two, or None.

    Assumes every alive vertex has degree at least two.
    """
    seen = set()
    for s in sorted(alive):
        if s in seen or len(nbrs[s]) != 2:
            continue
        # walk the chain of degree-2 vertices through s in both directions
        chain = [s]
        seen.add(s)
        ends = []
        for first in sorted(nbrs[s]):
            prev, cur = s, first
            path = []
            while len(nbrs[cur]) == 2 and cur != s:
                path.append(cur)
                seen.add(cur)
                a, b = nbrs[cur]
                prev, cur = cur, (b if a == prev else a)
            if cur == s:
                return chain + path  # an isolated cycle
            ends.append((cur, path))
        (e1, p1), (e2, p2) = ends
        if e1 == e2:
            return [e1] + list(reversed(p1)) + chain + p2
    return None


def fvs_2approx(g: Graph) -> frozenset[int]:
    """Local-ratio 2-approximation for minimum feedback vertex set."""
    nbrs = {v: set(g.adj[v]) for v in range(g.n)}
    w = {v: Fraction(1) for v in range(g.n)}
    alive = set(range(g.n))
    stack = []

    def remove(v):
        alive.discard(v)
        for u in nbrs[v]:
            nbrs[u].discard(v)
        nbrs[v] = set()

    def cleanup(cands):
        cands = list(cands)
        while cands:
            v = cands.pop()
            if v in alive and len(nbrs[v]) <= 1:
                near = list(nbrs[v])
                remove(v)
                cands.extend(near)

    cleanup(range(g.n))
    while alive:
        cyc = _semidisjoint_cycle(nbrs, alive)
        if cyc is not None:
            gamma = min(w[v] for v in cyc)
            for v in cyc:
                w[v] -= gamma
            touched = cyc
        else:
            gamma = min(w[v] / (len(nbrs[v]) - 1) for v in alive)
            for v in alive:
                w[v] -= gamma * (len(nbrs[v]) - 1)
            touched = list(alive)
        zero = sorted(v for v in touched if v in alive and w[v] == 0)
        near = set()
        for v in zero:
            stack.append(v)
            near.update(nbrs[v])
            remove(v)
        cleanup(near - set(zero))

    # reverse delete: drop stacked vertices that are not needed
    sol = set(stack)
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges():
        if u not in sol and v not in sol:
            parent[find(u)] = find(v)
    for v in reversed(stack):
        roots = [find(u) for u in g.adj[v] if u not in sol]
        if len(roots) == len(set(roots)):
            sol.discard(v)
            for r in roots:
                parent[r] = v
    return frozenset(sol)


def maxleaf_transversal(g: Graph) -> frozenset[int]:
    """All vertices of degree at least three; what remains has max degree two."""
    if not is_connected(g):
        raise TransversalError("max-leaf transversal needs a connected graph")
    return frozenset(v for v in range(g.n) if g.degree(v) >= 3)


@dataclass
class EtaTransversal:
    x: frozenset[int]
    rounds: int
    fallback: bool


def eta_transversal_approx(g: Graph, gamma_cap: int = 0, width_cap: int = 6) -> EtaTransversal:
    """Generic 1-transversal by subset enumeration (exponential in ``gamma_cap``).

    Each round enumerates vertex sets ``Z`` of size at most ``gamma_cap`` in
    the remaining graph and takes the first component ``C`` of the remaining
    graph minus ``Z`` that contains a cycle and has heuristic width at most
    ``width_cap``.  An optimal feedback vertex set of ``G[C]`` and ``N(C)`` are
    added to the answer.  When no such pair exists the rest is covered by
    :func:`fvs_2approx` and the result is flagged.
    """
    from .twsolvers import dp_solve

    if gamma_cap < 0 or gamma_cap > 2:
        raise TransversalError("gamma_cap must lie in 0..2")
    x = set()
    rounds = 0
    while True:
        rest = [v for v in range(g.n) if v not in x]
        if is_forest(g, x):
            return EtaTransversal(frozenset(x), rounds, False)
        found = None
        for size in range(gamma_cap + 1):
            for z in itertools.combinations(rest, size):
                pool = set(rest) - set(z)
                for comp in components(g, pool):
                    sub, labels = g.induced(comp)
                    if sub.m < sub.n:
                        continue  # a tree
                    td = heuristic_decomposition(sub)
                    if td.width > width_cap:
                        continue
                    found = (comp, sub, labels, td)
                    break
                if found:
                    break
            if found:
                break
        if found is None:
            extra_g, labels = g.without(x)
            extra = {labels[v] for v in fvs_2approx(extra_g)}
            return EtaTransversal(frozenset(x | extra), rounds, True)
        comp, sub, labels, td = found
        sol = dp_solve(AnnotatedInstance("fvs", sub), make_nice(td))
        x.update(labels[v] for v in sol.witness)
        x.update(neighborhood(g, comp) - x)
        rounds += 1


BUILT_IN = {
    "vc": ("matching", 0),
    "cvc": ("matching", 0),
    "fvs": ("local-ratio", 1),
    "cycle-packing": ("local-ratio", 1),
    "max-leaf": ("degree", 2),
}


def build_transversal(problem: str, g: Graph) -> tuple[frozenset[int], int]:
    """``(X, eta)`` with ``tw(G - X) <= eta`` for a built-in problem."""
    if problem not in BUILT_IN:
        raise TransversalError(
            f"no built-in transversal for {problem!r}; supply one with --transversal-file")
    kind, eta = BUILT_IN[problem]
    if kind == "matching":
        return vc_matching_transversal(g), eta
    if kind == "local-ratio":
        return fvs_2approx(g), eta
    return maxleaf_transversal(g), eta
