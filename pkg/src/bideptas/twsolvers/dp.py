from __future__ import annotations

import logging
import random

from ..checks import check
from ..graph import Graph, gen_stacked_planar
from ..model import AnnotatedInstance, InfeasibleError, Solution
from ..treewidth.decomposition import heuristic_decomposition, validate_decomposition
from ..treewidth.exact import exact_treewidth
from ..treewidth.nice import FORGET, INTRODUCE, JOIN, LEAF, NiceTreeDecomposition, make_nice
from .problems import PROBLEM_CLASSES

log = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 2_000_000


class DPBudgetError(RuntimeError):
    """Decomposition too wide (or tables too large) for the solver's budget."""

    def __init__(self, msg, sizing=None):
        super().__init__(msg)
        self.sizing = sizing or {}


class DecompositionInputError(ValueError):
    pass


def _better(sense, new, old):
    return new < old if sense == "min" else new > old


def dp_solve(inst: AnnotatedInstance, ntd: NiceTreeDecomposition | None = None,
             width_budget: int | None = None, max_states: int = DEFAULT_MAX_STATES,
             validate: bool = True) -> Solution:
    """Optimal solution of ``inst`` by dynamic programming over ``ntd``.

    Without ``ntd`` a min-fill decomposition is made nice and used.  Raises
    :class:`DPBudgetError` when the width exceeds the problem's budget or the
    estimated table size exceeds ``max_states``, and
    :class:`InfeasibleError` when no feasible solution exists.
    """
    g = inst.graph
    if ntd is None:
        ntd = make_nice(heuristic_decomposition(g))
    if validate:
        errs = ntd.structure_errors()
        errs += [str(v) for v in validate_decomposition(g, ntd.as_decomposition())]
        if errs:
            raise DecompositionInputError(f"invalid nice decomposition: {errs[:3]}")
    prob = PROBLEM_CLASSES[inst.problem](inst)
    budget = prob.width_budget if width_budget is None else width_budget
    width = ntd.width
    per_bag = prob.states_bound(width + 1)
    sizing = {"problem": inst.problem, "width": width, "width_budget": budget,
              "nodes": len(ntd), "states_per_bag_bound": per_bag, "max_states": max_states}
    if width > budget:
        raise DPBudgetError(f"width {width} exceeds the {inst.problem} budget {budget}", sizing)
    if per_bag > max_states:
        raise DPBudgetError(f"a bag may need {per_bag} states > cap {max_states}", sizing)

    sense = prob.sense
    adj = [g.nbrset(v) for v in range(g.n)]
    # tables[i]: state -> (value, back); back = (child states..., payload)
    tables: list[dict | None] = [None] * len(ntd)
    total_states = 0
    for i in range(len(ntd)):
        kind = ntd.kind[i]
        ch = ntd.children[i]
        table: dict = {}
        if kind == LEAF:
            table[prob.leaf()] = (0, None)
        elif kind == INTRODUCE:
            v = ntd.vertex[i]
            for s, (val, _) in tables[ch[0]].items():
                for s2 in prob.introduce(s, v):
                    old = table.get(s2)
                    if old is None or _better(sense, val, old[0]):
                        table[s2] = (val, (s, None))
        elif kind == FORGET:
            v = ntd.vertex[i]
            nbrs = tuple(u for u in ntd.bag[i] if u in adj[v])
            for s, (val, _) in tables[ch[0]].items():
                for s2, gain, payload in prob.forget(s, v, nbrs):
                    nv = val + gain
                    old = table.get(s2)
                    if old is None or _better(sense, nv, old[0]):
                        table[s2] = (nv, (s, payload))
        elif kind == JOIN:
            left, right = tables[ch[0]], tables[ch[1]]
            groups: dict = {}
            for s, (val, _) in right.items():
                groups.setdefault(prob.join_key(s), []).append((s, val))
            for s1, (v1, _) in left.items():
                for s2, v2 in groups.get(prob.join_key(s1), ()):
                    for s3, gain in prob.join(s1, s2):
                        nv = v1 + v2 + gain
                        old = table.get(s3)
                        if old is None or _better(sense, nv, old[0]):
                            table[s3] = (nv, (s1, s2))
        total_states += len(table)
        if len(table) > max_states:
            sizing.update(node=i, states=len(table))
            raise DPBudgetError(f"table at node {i} grew to {len(table)} states", sizing)
        tables[i] = table

    root = ntd.root
    best = None
    for s, (val, _) in tables[root].items():
        if prob.accept(s) and (best is None or _better(sense, val, best[1])):
            best = (s, val)
    if best is None:
        raise InfeasibleError(f"{inst.problem} instance has no feasible solution")

    payloads = []
    stack = [(root, best[0])]
    while stack:
        i, s = stack.pop()
        back = tables[i][s][1]
        if back is None:
            continue
        ch = ntd.children[i]
        if ntd.kind[i] == JOIN:
            stack.append((ch[0], back[0]))
            stack.append((ch[1], back[1]))
        else:
            if ntd.kind[i] == FORGET:
                payloads.append(back[1])
            stack.append((ch[0], back[0]))
    witness = prob.witness(payloads)
    ok, obj = check(inst.problem, g, witness, inst.R, inst.budget, inst.connected)
    if obj != best[1]:
        raise AssertionError(f"witness objective {obj} != table optimum {best[1]}")
    return Solution(inst.problem, witness, best[1], ok, "dp",
                    {"width": width, "dp_states": total_states, "nodes": len(ntd)})


def exact_nice(g: Graph, max_sets: int = 2_000_000) -> NiceTreeDecomposition:
    """Nice decomposition of minimum width (small graphs only)."""
    _, td = exact_treewidth(g, None, max_sets)
    return make_nice(td)


def random_instance(problem: str, n: int, rng: random.Random) -> AnnotatedInstance:
    """Random stacked-planar instance with random annotations for ``problem``."""
    g = gen_stacked_planar(n, rng.randrange(2 ** 31), keep=rng.choice((1.0, 0.8, 0.6)))
    R = frozenset(v for v in range(n) if rng.random() < 0.4)
    budget = None
    connected = False
    if problem == "partial-vc":
        budget = rng.randint(0, g.m)
    if problem in ("cvc-annotated", "maxleaf-annotated"):
        connected = rng.random() < 0.25
    return AnnotatedInstance(problem, g, R, budget, connected)


def dp_selfcheck(problem: str, size_cap: int = 12, trials: int = 100, seed: int = 0,
                 min_n: int = 3) -> dict:
    """Compare the DP with the brute-force oracle on random instances."""
    from ..oracle import MAX_N, brute_force

    if size_cap > MAX_N:
        raise ValueError(f"size_cap must be <= {MAX_N}")
    rng = random.Random(seed)
    mismatches = []
    infeasible = 0
    for trial in range(trials):
        n = rng.randint(min_n, size_cap)
        inst = random_instance(problem, n, rng)
        ntd = exact_nice(inst.graph)
        try:
            want = brute_force(problem, inst.graph, inst.budget, inst.R, inst.connected)
        except InfeasibleError:
            want = None
        try:
            got = dp_solve(inst, ntd)
        except InfeasibleError:
            got = None
        if want is None and got is None:
            infeasible += 1
            continue
        if want is None or got is None or want.objective != got.objective or not got.feasible:
            mismatches.append({
                "trial": trial, "n": inst.graph.n, "edges": list(inst.graph.edges()),
                "R": sorted(inst.R), "budget": inst.budget, "connected": inst.connected,
                "oracle": None if want is None else want.objective,
                "dp": None if got is None else got.objective,
                "dp_feasible": None if got is None else got.feasible,
            })
    return {"problem": problem, "size_cap": size_cap, "trials": trials, "seed": seed,
            "infeasible": infeasible, "mismatches": mismatches}
