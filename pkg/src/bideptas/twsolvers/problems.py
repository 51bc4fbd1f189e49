"""Per-problem state machines for the nice-decomposition DP.

A state describes the partial solution restricted to the current bag.  Edges
are accounted for when the first of their endpoints is forgotten; since the
root bag is empty, every edge is handled exactly once.  Costs are charged at
forget nodes, so join nodes never double count.

Transition hooks:

* ``leaf()`` -> initial state
* ``introduce(state, v)`` -> iterable of states
* ``forget(state, v, nbrs)`` -> iterable of ``(state, gain, payload)``, where
  ``nbrs`` are the neighbours of ``v`` still in the bag
* ``join_key(state)`` -> states only combine when keys agree
* ``join(a, b)`` -> iterable of ``(state, gain)``
* ``accept(state)`` at the (empty) root
* ``witness(payloads)`` turns the forget payloads into an answer
"""

from __future__ import annotations

from itertools import combinations

from ..model import AnnotatedInstance


def canon(blocks):
    """Canonical form of a partition: sorted tuples, ordered by minimum."""
    return tuple(sorted(tuple(sorted(b)) for b in blocks if b))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def groups(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


class Problem:
    sense = "min"
    # width (max bag size - 1) beyond which the solver refuses to run
    width_budget = 10

    def __init__(self, inst: AnnotatedInstance):
        self.inst = inst
        self.g = inst.graph
        self.R = inst.R

    def join_key(self, s):
        return s[0] if isinstance(s, tuple) else s

    def accept(self, s):
        return True

    def witness(self, payloads):
        return frozenset(p for p in payloads if p is not None)

    def states_bound(self, k):
        """Upper bound on distinct states for a bag of ``k`` vertices."""
        return 2 ** k


def _bell(k):
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


class VertexCover(Problem):
    def leaf(self):
        return frozenset()

    def introduce(self, s, v):
        yield s
        yield s | {v}

    def forget(self, s, v, nbrs):
        if v in s:
            yield s - {v}, 1, v
        elif all(u in s for u in nbrs):
            yield s, 0, None

    def join_key(self, s):
        return s

    def join(self, a, b):
        yield a, 0


class PartialVertexCover(Problem):
    def __init__(self, inst):
        super().__init__(inst)
        self.t = inst.budget

    def states_bound(self, k):
        return 2 ** k * (self.t + 1)

    def leaf(self):
        return (frozenset(), 0)

    def introduce(self, s, v):
        sel, c = s
        yield s
        yield (sel | {v}, c)

    def forget(self, s, v, nbrs):
        sel, c = s
        if v in sel:
            k = len(nbrs)
            yield (sel - {v}, min(self.t, c + k)), 1, v
        else:
            k = sum(1 for u in nbrs if u in sel)
            yield (sel, min(self.t, c + k)), 0, None

    def join(self, a, b):
        yield (a[0], min(self.t, a[1] + b[1])), 0

    def accept(self, s):
        return s[1] >= self.t


class DominatingSet(Problem):
    """State ``(S, U)``: selected bag vertices and undominated bag vertices."""

    def states_bound(self, k):
        return 3 ** k

    def leaf(self):
        return (frozenset(), frozenset())

    def introduce(self, s, v):
        sel, und = s
        yield (sel | {v}, und)
        yield (sel, und if v in self.R else und | {v})

    def forget(self, s, v, nbrs):
        sel, und = s
        if v in sel:
            yield (sel - {v}, und.difference(nbrs)), 1, v
            return
        if v in und and not any(u in sel for u in nbrs):
            return
        yield (sel, und - {v}), 0, None

    def join(self, a, b):
        yield (a[0], a[1] & b[1]), 0


class FeedbackVertexSet(Problem):
    """State ``(S, P)``: deleted bag vertices and the forest's bag partition."""

    width_budget = 8

    def states_bound(self, k):
        return sum(_bell(j) * _binom(k, j) for j in range(k + 1))

    def leaf(self):
        return (frozenset(), ())

    def introduce(self, s, v):
        sel, part = s
        yield (sel | {v}, part)
        yield (sel, canon(part + ((v,),)))

    def forget(self, s, v, nbrs):
        sel, part = s
        if v in sel:
            yield (sel - {v}, part), 1, v
            return
        where = {x: i for i, b in enumerate(part) for x in b}
        uf = _UnionFind(range(len(part)))
        for u in nbrs:
            if u in sel:
                continue
            if not uf.union(where[v], where[u]):
                return  # the edge closes a cycle
        merged = {}
        for i, b in enumerate(part):
            merged.setdefault(uf.find(i), []).extend(b)
        blocks = [[x for x in b if x != v] for b in merged.values()]
        yield (sel, canon(blocks)), 0, None

    def join(self, a, b):
        kept = [x for blk in a[1] for x in blk]
        uf = _UnionFind(kept)
        for blk in a[1]:
            for x, y in zip(blk, blk[1:]):
                uf.union(x, y)
        for blk in b[1]:
            for x, y in zip(blk, blk[1:]):
                if not uf.union(x, y):
                    return
        yield (a[0], canon(uf.groups().values())), 0


def _binom(n, k):
    from math import comb
    return comb(n, k)


class CyclePacking(Problem):
    """State ``(D2, P)``: bag vertices of degree two, and the pairs of
    degree-one bag vertices that are the two ends of one path fragment.
    The value counts cycles already closed."""

    sense = "max"
    width_budget = 8

    def states_bound(self, k):
        # each vertex has degree 0, 1 or 2; pairings of the degree-one ones
        total = 0
        for ones in range(0, k + 1, 2):
            pairings = 1
            for j in range(ones - 1, 0, -2):
                pairings *= j
            total += _binom(k, ones) * 2 ** (k - ones) * pairings
        return total

    def leaf(self):
        return (frozenset(), ())

    def join_key(self, s):
        return None

    def introduce(self, s, v):
        yield s

    @staticmethod
    def _add_edge(d2, mate, a, b):
        """Add edge ab to the fragment structure; returns closed-cycle gain or None."""
        for x in (a, b):
            if x in d2:
                return None
        if mate.get(a) == b:
            del mate[a], mate[b]
            d2.update((a, b))
            return 1
        ends = []
        for x, y in ((a, b), (b, a)):
            if x in mate:
                other = mate.pop(x)
                d2.add(x)
                ends.append(other)
            else:
                ends.append(x)
        for x in ends:
            mate.pop(x, None)
        p, q = ends
        mate[p] = q
        mate[q] = p
        return 0

    def forget(self, s, v, nbrs):
        d2, pairs = s
        base_mate = {}
        for a, b in pairs:
            base_mate[a] = b
            base_mate[b] = a
        room = 0 if v in d2 else (1 if v in base_mate else 2)
        for k in range(0, room + 1):
            for chosen in combinations(nbrs, k):
                nd2 = set(d2)
                mate = dict(base_mate)
                gain = 0
                ok = True
                for u in chosen:
                    got = self._add_edge(nd2, mate, v, u)
                    if got is None:
                        ok = False
                        break
                    gain += got
                if not ok or v in mate:
                    continue  # v would end as a path end
                nd2.discard(v)
                new_pairs = tuple(sorted((a, b) for a, b in mate.items() if a < b))
                payload = tuple((min(v, u), max(v, u)) for u in chosen) or None
                yield (frozenset(nd2), new_pairs), gain, payload

    def join(self, a, b):
        if a[0] & b[0]:
            return
        ends_a = {x for p in a[1] for x in p}
        ends_b = {x for p in b[1] for x in p}
        if (a[0] & ends_b) or (b[0] & ends_a):
            return
        # abstract multigraph on fragment ends; every vertex has degree <= 2
        nbr = {}
        for p, q in a[1] + b[1]:
            nbr.setdefault(p, []).append(q)
            nbr.setdefault(q, []).append(p)
        d2 = set(a[0] | b[0])
        pairs = []
        closed = 0
        seen = set()
        for start in sorted(nbr):
            if start in seen or len(nbr[start]) != 1:
                continue
            prev, cur = None, start
            seen.add(cur)
            while True:
                nxt = [x for x in nbr[cur] if x != prev] if prev is not None else nbr[cur]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                seen.add(cur)
            pairs.append((min(start, cur), max(start, cur)))
        for x in nbr:
            if len(nbr[x]) == 2:
                d2.add(x)
        # what is left unseen lies on closed cycles
        rest = [x for x in sorted(nbr) if x not in seen]
        done = set()
        for x in rest:
            if x in done:
                continue
            closed += 1
            stack = [x]
            done.add(x)
            while stack:
                y = stack.pop()
                for z in nbr[y]:
                    if z not in done:
                        done.add(z)
                        stack.append(z)
        yield (frozenset(d2), tuple(sorted(pairs))), closed

    def accept(self, s):
        return not s[1]

    def witness(self, payloads):
        edges = [e for p in payloads if p for e in p]
        nbr = {}
        for a, b in edges:
            nbr.setdefault(a, []).append(b)
            nbr.setdefault(b, []).append(a)
        cycles = []
        seen = set()
        for start in sorted(nbr):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            prev, cur = start, min(nbr[start])
            while cur != start:
                cyc.append(cur)
                seen.add(cur)
                a, b = nbr[cur]
                prev, cur = cur, (b if a == prev else a)
            cycles.append(cyc)
        return cycles


def _merge_tagged(blocks, unions, r_of):
    """Union tagged blocks along ``unions`` pairs.

    ``blocks`` is a sequence of ``(members, tag)``; ``r_of`` maps a vertex to
    whether it is an anchor on its own.  Returns a canonical tagged partition.
    """
    items = [x for b, _ in blocks for x in b]
    uf = _UnionFind(items)
    tag = {}
    for b, t in blocks:
        for x, y in zip(b, b[1:]):
            uf.union(x, y)
    for x, y in unions:
        uf.union(x, y)
    for b, t in blocks:
        if t:
            tag[uf.find(b[0])] = True
    groups = uf.groups()
    out = []
    for root, members in groups.items():
        out.append((tuple(sorted(members)), bool(tag.get(root, False))))
    out.sort()
    return tuple(out)


class ConnectedVertexCover(Problem):
    """Annotated connected vertex cover.

    State ``(S, blocks, closed)``: selected bag vertices, their partition into
    components of ``G'[S']`` so far, each tagged by whether it touches R, and
    (single-component mode) whether the solution's one component has already
    left the bag.
    """

    width_budget = 7

    def __init__(self, inst):
        super().__init__(inst)
        self.single = inst.connected

    def states_bound(self, k):
        return 2 * sum(_binom(k, j) * _bell(j) * 2 ** j for j in range(k + 1))

    def leaf(self):
        return (frozenset(), (), False)

    def introduce(self, s, v):
        sel, blocks, closed = s
        yield s
        if not closed:
            nb = tuple(sorted(blocks + (((v,), v in self.R),)))
            yield (sel | {v}, nb, closed)

    def forget(self, s, v, nbrs):
        sel, blocks, closed = s
        if v not in sel:
            if all(u in sel for u in nbrs):
                yield s, 0, None
            return
        unions = [(v, u) for u in nbrs if u in sel]
        merged = _merge_tagged(blocks, unions, self.R)
        out = []
        for b, t in merged:
            if v not in b:
                out.append((b, t))
            elif len(b) > 1:
                out.append((tuple(x for x in b if x != v), t))
            else:
                # v's component leaves the bag for good
                if self.single:
                    if closed or len(merged) > 1:
                        return
                    closed = True
                elif not t:
                    return
        yield (sel - {v}, tuple(sorted(out)), closed), 1, v

    def join(self, a, b):
        if a[2] and b[2]:
            return
        merged = _merge_tagged(a[1] + b[1], [], self.R)
        yield (a[0], merged, a[2] or b[2]), 0


class MaxLeafAnnotated(Problem):
    """Annotated max leaf.

    State ``(S, unsat, blocks, closed)``: selected bag vertices, the selected
    non-anchor ones still lacking a neighbour outside ``S'``, the partition of
    unselected bag vertices into components of ``G' - S'`` tagged by whether
    they contain an anchor, and (single-component mode) whether the one
    component of ``G' - S'`` has already left the bag.
    """

    sense = "max"
    width_budget = 7

    def __init__(self, inst):
        super().__init__(inst)
        self.single = inst.connected

    def states_bound(self, k):
        return 2 * sum(_binom(k, j) * 2 ** j * _bell(k - j) * 2 ** (k - j)
                       for j in range(k + 1))

    def leaf(self):
        return (frozenset(), frozenset(), (), False)

    def introduce(self, s, v):
        sel, unsat, blocks, closed = s
        yield (sel | {v}, unsat if v in self.R else unsat | {v}, blocks, closed)
        if not closed:
            nb = tuple(sorted(blocks + (((v,), v in self.R),)))
            yield (sel, unsat, nb, closed)

    def forget(self, s, v, nbrs):
        sel, unsat, blocks, closed = s
        if v in sel:
            if v in unsat and all(u in sel for u in nbrs):
                return
            yield (sel - {v}, unsat - {v}, blocks, closed), 1, v
            return
        # v is outside S': it satisfies selected neighbours, joins others
        unsat = unsat.difference(nbrs)
        unions = [(v, u) for u in nbrs if u not in sel]
        merged = _merge_tagged(blocks, unions, self.R)
        out = []
        for b, t in merged:
            if v not in b:
                out.append((b, t))
            elif len(b) > 1:
                out.append((tuple(x for x in b if x != v), t))
            else:
                if self.single:
                    if closed or len(merged) > 1:
                        return
                    closed = True
                elif not t:
                    return
        yield (sel, unsat, tuple(sorted(out)), closed), 0, None

    def join(self, a, b):
        if a[3] and b[3]:
            return
        merged = _merge_tagged(a[2] + b[2], [], self.R)
        yield (a[0], a[1] & b[1], merged, a[3] or b[3]), 0

    def accept(self, s):
        return s[3] if self.single else True


PROBLEM_CLASSES = {
    "vc": VertexCover,
    "partial-vc": PartialVertexCover,
    "ds-annotated": DominatingSet,
    "fvs": FeedbackVertexSet,
    "cycle-packing": CyclePacking,
    "cvc-annotated": ConnectedVertexCover,
    "maxleaf-annotated": MaxLeafAnnotated,
}
