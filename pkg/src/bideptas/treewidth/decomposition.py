from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..graph import Graph


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed ``0..len(bags)-1`` joined by undirected tree edges."""

    bags: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def build(cls, bags: Iterable[Iterable[int]], edges: Iterable[tuple[int, int]]):
        return cls(tuple(frozenset(b) for b in bags), tuple((int(a), int(b)) for a, b in edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def tree_adjacency(self) -> list[list[int]]:
        nb = [[] for _ in self.bags]
        for a, b in self.edges:
            nb[a].append(b)
            nb[b].append(a)
        return nb

    def relabel(self, labels: Sequence[int]) -> "TreeDecomposition":
        """Map bag contents through ``labels`` (subgraph id -> host id)."""
        return TreeDecomposition(
            tuple(frozenset(labels[v] for v in b) for b in self.bags), self.edges
        )


@dataclass(frozen=True)
class Violation:
    kind: str  # "tree", "coverage", "edge" or "connectivity"
    witness: object

    def __str__(self):
        return f"{self.kind}: {self.witness}"


def validate_decomposition(g: Graph, td: TreeDecomposition) -> list[Violation]:
    """List every violated decomposition condition; empty means valid."""
    out = []
    k = len(td.bags)
    if k == 0:
        if g.n:
            out.append(Violation("tree", "no bags"))
        return out
    for a, b in td.edges:
        if not (0 <= a < k and 0 <= b < k) or a == b:
            out.append(Violation("tree", f"bad tree edge ({a}, {b})"))
            return out
    nb = td.tree_adjacency()
    if len(td.edges) != k - 1:
        out.append(Violation("tree", f"{len(td.edges)} edges for {k} bags"))
    seen = {0}
    stack = [0]
    while stack:
        for c in nb[stack.pop()]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    if len(seen) != k:
        out.append(Violation("tree", "tree is disconnected"))
    if out:
        return out

    where: dict[int, list[int]] = {}
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < g.n:
                out.append(Violation("coverage", f"bag {i} holds unknown vertex {v}"))
            where.setdefault(v, []).append(i)
    for v in range(g.n):
        if v not in where:
            out.append(Violation("coverage", v))
    for u, v in g.edges():
        bags_u = where.get(u, ())
        if not any(v in td.bags[i] for i in bags_u):
            out.append(Violation("edge", (u, v)))
    for v, nodes in sorted(where.items()):
        member = set(nodes)
        reach = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            for c in nb[stack.pop()]:
                if c in member and c not in reach:
                    reach.add(c)
                    stack.append(c)
        if len(reach) != len(member):
            out.append(Violation("connectivity", v))
    return out


def is_valid(g: Graph, td: TreeDecomposition) -> bool:
    return not validate_decomposition(g, td)


# -- elimination orderings ---------------------------------------------------

def _fill(nbrs, v):
    nv = nbrs[v]
    d = len(nv)
    inner = 0
    for u in nv:
        inner += len(nbrs[u] & nv)
    return d * (d - 1) // 2 - inner // 2


def min_fill_ordering(g: Graph) -> list[int]:
    """Min-fill elimination order, ties by min degree then lowest id."""
    nbrs = [set(g.adj[v]) for v in range(g.n)]
    key = {}
    heap = []
    for v in range(g.n):
        key[v] = (_fill(nbrs, v), len(nbrs[v]), v)
        heap.append(key[v])
    heapq.heapify(heap)
    order = []
    done = set()
    while heap:
        item = heapq.heappop(heap)
        v = item[2]
        if v in done or key[v] != item:
            continue
        done.add(v)
        order.append(v)
        nv = list(nbrs[v])
        affected = set(nv)
        for i, a in enumerate(nv):
            nbrs[a].discard(v)
        for i, a in enumerate(nv):
            for b in nv[i + 1:]:
                if b not in nbrs[a]:
                    nbrs[a].add(b)
                    nbrs[b].add(a)
                    affected.update(nbrs[a] & nbrs[b])
        nbrs[v] = set()
        for u in affected:
            if u in done:
                continue
            k = (_fill(nbrs, u), len(nbrs[u]), u)
            if k != key[u]:
                key[u] = k
                heapq.heappush(heap, k)
    return order


def decomposition_from_ordering(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Read a tree decomposition off an elimination ordering."""
    if g.n == 0:
        return TreeDecomposition((frozenset(),), ())
    pos = {v: i for i, v in enumerate(order)}
    if len(pos) != g.n:
        raise DecompositionError("ordering is not a permutation of the vertices")
    nbrs = [set(g.adj[v]) for v in range(g.n)]
    bags = []
    parent = []
    for v in order:
        higher = nbrs[v]
        bags.append(frozenset(higher | {v}))
        hs = list(higher)
        for i, a in enumerate(hs):
            nbrs[a].discard(v)
            for b in hs[i + 1:]:
                nbrs[a].add(b)
                nbrs[b].add(a)
        parent.append(min((pos[u] for u in higher), default=None))
    edges = []
    roots = []
    for i, p in enumerate(parent):
        if p is None:
            roots.append(i)
        else:
            edges.append((i, p))
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return simplify(TreeDecomposition(tuple(bags), tuple(edges)))


def simplify(td: TreeDecomposition) -> TreeDecomposition:
    """Contract tree edges whose one bag is contained in the other."""
    k = len(td.bags)
    if k <= 1:
        return td
    nb = [set(x) for x in td.tree_adjacency()]
    bags = list(td.bags)
    alive = [True] * k
    changed = True
    while changed:
        changed = False
        for i in range(k):
            if not alive[i]:
                continue
            for j in sorted(nb[i]):
                if bags[i] <= bags[j]:
                    small, big = i, j
                elif bags[j] <= bags[i]:
                    small, big = j, i
                else:
                    continue
                # merge `small` into `big`
                for c in nb[small]:
                    if c != big:
                        nb[c].discard(small)
                        nb[c].add(big)
                        nb[big].add(c)
                nb[big].discard(small)
                nb[small] = set()
                alive[small] = False
                changed = True
                break
    keep = [i for i in range(k) if alive[i]]
    index = {old: new for new, old in enumerate(keep)}
    edges = sorted({(min(index[a], index[b]), max(index[a], index[b]))
                    for a in keep for b in nb[a]})
    return TreeDecomposition(tuple(bags[i] for i in keep), tuple(edges))


def heuristic_decomposition(g: Graph) -> TreeDecomposition:
    """Valid decomposition from the min-fill ordering; deterministic."""
    return decomposition_from_ordering(g, min_fill_ordering(g))


# -- PACE .td exchange format ------------------------------------------------

def dump_td(td: TreeDecomposition, n: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, bag in enumerate(td.bags):
        lines.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(bag)]))
    for a, b in td.edges:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def load_td(text: str) -> tuple[TreeDecomposition, int]:
    """Parse PACE-style ``.td`` text; returns the decomposition and n."""
    header = None
    bags = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            if parts[0] == "s":
                if len(parts) != 5 or parts[1] != "td":
                    raise DecompositionError(f"line {lineno}: malformed header")
                header = tuple(int(x) for x in parts[2:])
            elif parts[0] == "b":
                bags[int(parts[1]) - 1] = frozenset(int(x) - 1 for x in parts[2:])
            else:
                a, b = parts
                edges.append((int(a) - 1, int(b) - 1))
        except ValueError:
            raise DecompositionError(f"line {lineno}: cannot parse {line!r}") from None
    if header is None:
        raise DecompositionError("missing 's td' header")
    nbags, _, n = header
    if sorted(bags) != list(range(nbags)):
        raise DecompositionError(f"expected bags 1..{nbags}")
    return TreeDecomposition(tuple(bags[i] for i in range(nbags)), tuple(edges)), n
