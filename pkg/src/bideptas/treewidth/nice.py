from __future__ import annotations

from dataclasses import dataclass

from .decomposition import DecompositionError, TreeDecomposition

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Rooted nice decomposition with an empty root bag.

    ``kind[i]`` is one of leaf/introduce/forget/join, ``bag[i]`` is a sorted
    tuple, ``vertex[i]`` is the introduced or forgotten vertex (else None)
    and ``children[i]`` lists child node ids.  Node ids are a post-order, so
    children always precede their parent; the root is the last node.
    """

    kind: tuple[str, ...]
    bag: tuple[tuple[int, ...], ...]
    vertex: tuple[int | None, ...]
    children: tuple[tuple[int, ...], ...]

    @property
    def root(self) -> int:
        return len(self.kind) - 1

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bag) - 1

    def __len__(self):
        return len(self.kind)

    def as_decomposition(self) -> TreeDecomposition:
        edges = tuple((c, i) for i, ch in enumerate(self.children) for c in ch)
        return TreeDecomposition(tuple(frozenset(b) for b in self.bag), edges)

    def structure_errors(self) -> list[str]:
        """Node-type constraints that fail, as readable messages."""
        errs = []
        for i, k in enumerate(self.kind):
            ch = self.children[i]
            bag = set(self.bag[i])
            if any(c >= i for c in ch):
                errs.append(f"node {i}: child id not below parent")
                continue
            if k == LEAF:
                if ch or bag:
                    errs.append(f"node {i}: leaf must be empty and childless")
            elif k == INTRODUCE:
                v = self.vertex[i]
                if len(ch) != 1 or v not in bag or set(self.bag[ch[0]]) != bag - {v}:
                    errs.append(f"node {i}: bad introduce of {v}")
            elif k == FORGET:
                v = self.vertex[i]
                if len(ch) != 1 or v in bag or set(self.bag[ch[0]]) != bag | {v}:
                    errs.append(f"node {i}: bad forget of {v}")
            elif k == JOIN:
                if len(ch) != 2 or any(set(self.bag[c]) != bag for c in ch):
                    errs.append(f"node {i}: bad join")
            else:
                errs.append(f"node {i}: unknown kind {k!r}")
        if self.bag[self.root]:
            errs.append("root bag is not empty")
        return errs


class _Builder:
    def __init__(self):
        self.kind, self.bag, self.vertex, self.children = [], [], [], []

    def add(self, kind, bag, vertex, children):
        self.kind.append(kind)
        self.bag.append(tuple(sorted(bag)))
        self.vertex.append(vertex)
        self.children.append(tuple(children))
        return len(self.kind) - 1

    def chain(self, top, from_bag, to_bag):
        """Forget then introduce vertices to move ``top`` from one bag to another."""
        cur = set(from_bag)
        for v in sorted(cur - set(to_bag)):
            cur.discard(v)
            top = self.add(FORGET, cur, v, [top])
        for v in sorted(set(to_bag) - cur):
            cur.add(v)
            top = self.add(INTRODUCE, cur, v, [top])
        return top

    def freeze(self):
        return NiceTreeDecomposition(
            tuple(self.kind), tuple(self.bag), tuple(self.vertex), tuple(self.children)
        )


def make_nice(td: TreeDecomposition, root: int = 0) -> NiceTreeDecomposition:
    """Convert a (valid) decomposition to nice form; width is preserved."""
    k = len(td.bags)
    if k == 0:
        raise DecompositionError("decomposition has no bags")
    if len(td.edges) != k - 1:
        raise DecompositionError("decomposition is not a tree")
    nb = td.tree_adjacency()
    parent = [-1] * k
    order = [root]
    parent[root] = root
    for t in order:
        for c in nb[t]:
            if parent[c] == -1:
                parent[c] = t
                order.append(c)
    if len(order) != k:
        raise DecompositionError("decomposition tree is disconnected")
    kids = [[] for _ in range(k)]
    for t in order[1:]:
        kids[parent[t]].append(t)

    b = _Builder()
    top = [None] * k
    for t in reversed(order):
        bag = td.bags[t]
        heads = [b.chain(top[c], td.bags[c], bag) for c in sorted(kids[t])]
        if not heads:
            heads = [b.chain(b.add(LEAF, (), None, []), (), bag)]
        while len(heads) > 1:
            merged = []
            for i in range(0, len(heads) - 1, 2):
                merged.append(b.add(JOIN, bag, None, [heads[i], heads[i + 1]]))
            if len(heads) % 2:
                merged.append(heads[-1])
            heads = merged
        top[t] = heads[0]
    b.chain(top[root], td.bags[root], ())
    return b.freeze()
