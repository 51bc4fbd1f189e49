"""Simple undirected graphs, the instance file format, and generators.

Vertices are dense integers ``0..n-1``.  Instance files use the DIMACS-like
1-based format::

    c optional comment
    p <n> <m>
    e <u> <v>
"""

from __future__ import annotations

import logging
import random
from collections import deque
from typing import Iterable

log = logging.getLogger(__name__)


class GraphError(ValueError):
    """Raised for malformed instance text or invalid graph construction."""


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "m", "adj", "_adjsets")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("negative vertex count")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise GraphError(f"parallel edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
            m += 1
        self.n = n
        self.m = m
        self.adj = tuple(tuple(sorted(s)) for s in nbrs)
        self._adjsets = tuple(frozenset(s) for s in nbrs)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    @property
    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def nbrset(self, v: int) -> frozenset[int]:
        return self._adjsets[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjsets[u]

    def edges(self):
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph on ``vertices``.

        Returns the subgraph relabelled to ``0..k-1`` and the tuple mapping
        each new id back to its id in ``self``.
        """
        labels = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(labels)}
        edges = []
        for i, v in enumerate(labels):
            for u in self.adj[v]:
                j = index.get(u)
                if j is not None and i < j:
                    edges.append((i, j))
        return Graph(len(labels), edges), labels

    def without(self, removed: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """``G \\ removed`` as an induced subgraph with its label map."""
        gone = set(removed)
        return self.induced(v for v in range(self.n) if v not in gone)


# -- file format -------------------------------------------------------------

def load_graph(text: str) -> Graph:
    """Parse instance text (``p``/``e``/``c`` lines, 1-based endpoints)."""
    n = m = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphError(f"line {lineno}: duplicate header")
            # tolerate the PACE-style "p tw n m"
            nums = parts[2:] if len(parts) == 4 else parts[1:]
            if len(nums) != 2:
                raise GraphError(f"line {lineno}: malformed header {line!r}")
            try:
                n, m = int(nums[0]), int(nums[1])
            except ValueError:
                raise GraphError(f"line {lineno}: non-integer header {line!r}") from None
            if n < 0 or m < 0:
                raise GraphError(f"line {lineno}: negative counts")
            continue
        if n is None:
            raise GraphError(f"line {lineno}: edge before header")
        if parts[0] == "e":
            parts = parts[1:]
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: malformed edge line {line!r}")
        try:
            u, v = int(parts[0]) - 1, int(parts[1]) - 1
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer endpoint {line!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"line {lineno}: endpoint out of range 1..{n}")
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at {u + 1}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"line {lineno}: duplicate edge {u + 1} {v + 1}")
        seen.add(key)
        edges.append(key)
    if n is None:
        raise GraphError("missing header line 'p <n> <m>'")
    if len(edges) != m:
        raise GraphError(f"header declares m={m} but {len(edges)} edges found")
    g = Graph(n, edges)
    if n >= 3 and g.m > 3 * n - 6:
        log.warning("graph has m=%d > 3n-6=%d; not planar", g.m, 3 * n - 6)
    return g


def read_graph(path) -> Graph:
    with open(path) as fh:
        return load_graph(fh.read())


def dump_graph(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    lines.append(f"p {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_vertex_list(path) -> frozenset[int]:
    """One 1-based vertex id per line; blank and ``c`` lines ignored."""
    out = set()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            try:
                out.add(int(line) - 1)
            except ValueError:
                raise GraphError(f"line {lineno}: not a vertex id: {line!r}") from None
    return frozenset(out)


# -- generators --------------------------------------------------------------

def gen_grid(r: int) -> Graph:
    """The r x r grid; vertex (i, j) has id ``i*r + j``."""
    if r < 2:
        raise GraphError("grid needs r >= 2")
    edges = []
    for i in range(r):
        for j in range(r):
            v = i * r + j
            if j + 1 < r:
                edges.append((v, v + 1))
            if i + 1 < r:
                edges.append((v, v + r))
    return Graph(r * r, edges)


def gamma_corner(r: int) -> int:
    """The degree-2 corner of the triangulated grid that gets joined."""
    return r - 1


def gen_gamma(r: int, join: bool = True) -> Graph:
    """Triangulated grid Gamma_r.

    Every unit face gets the diagonal (i, j)-(i+1, j+1), giving internal
    vertices degree 6 and non-corner boundary vertices degree 4.  With
    ``join`` the corner (0, r-1), which has degree 2, is then joined to every
    boundary vertex.
    """
    if r < 2:
        raise GraphError("Gamma_r needs r >= 2")
    edges = set(gen_grid(r).edges())
    for i in range(r - 1):
        for j in range(r - 1):
            edges.add((i * r + j, (i + 1) * r + j + 1))
    if join:
        c = gamma_corner(r)
        for v in range(r * r):
            i, j = divmod(v, r)
            if v != c and (i in (0, r - 1) or j in (0, r - 1)):
                edges.add((min(c, v), max(c, v)))
    return Graph(r * r, sorted(edges))


def gen_stacked_planar(n: int, seed: int, keep: float = 1.0) -> Graph:
    """Random stacked triangulation (planar 3-tree) on ``n`` vertices.

    Starts from a triangle and repeatedly inserts a vertex into a uniformly
    chosen face, joining it to the face's corners.  With ``keep < 1`` each
    edge is then kept independently with that probability.
    """
    if n < 3:
        raise GraphError("stacked triangulation needs n >= 3")
    rng = random.Random(seed)
    edges = [(0, 1), (0, 2), (1, 2)]
    faces = [(0, 1, 2), (0, 1, 2)]  # inner and outer face of the triangle
    for v in range(3, n):
        k = rng.randrange(len(faces))
        a, b, c = faces[k]
        faces[k] = (a, b, v)
        faces.append((a, c, v))
        faces.append((b, c, v))
        edges.extend([(a, v), (b, v), (c, v)])
    if keep < 1.0:
        edges = [e for e in edges if rng.random() < keep]
    return Graph(n, edges)


# -- set operations ----------------------------------------------------------

def components(g: Graph, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Connected components, ordered by smallest member.

    With ``within`` only the subgraph induced by those vertices is considered.
    """
    allowed = None if within is None else set(within)
    pool = range(g.n) if allowed is None else sorted(allowed)
    seen = set()
    out = []
    for s in pool:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        i = 0
        while i < len(comp):
            for u in g.adj[comp[i]]:
                if u not in seen and (allowed is None or u in allowed):
                    seen.add(u)
                    comp.append(u)
            i += 1
        out.append(frozenset(comp))
    return out


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def ball(g: Graph, s: Iterable[int], r: int) -> frozenset[int]:
    """All vertices at distance at most ``r`` from ``s``."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    dist = {v: 0 for v in s}
    queue = deque(dist)
    while queue:
        v = queue.popleft()
        if dist[v] == r:
            continue
        for u in g.adj[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return frozenset(dist)


def neighborhood(g: Graph, s: Iterable[int]) -> frozenset[int]:
    """Open neighborhood N(S) = N[S] \\ S."""
    s = set(s)
    out = set()
    for v in s:
        out.update(g.adj[v])
    return frozenset(out - s)


def is_forest(g: Graph, removed: Iterable[int] = ()) -> bool:
    """True when ``g`` minus ``removed`` has no cycle."""
    gone = set(removed)
    keep = [v for v in range(g.n) if v not in gone]
    m = sum(1 for u in keep for v in g.adj[u] if u < v and v not in gone)
    return m == len(keep) - len(components(g, keep))
