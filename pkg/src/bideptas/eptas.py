"""Reduce/lift pairs and the end-to-end approximation driver.

Pipeline: modulator ``X`` -> shrunk modulator ``X'`` -> annotated instance on
``G - X'`` -> exact DP -> lifted solution on ``G``.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from .checks import check
from .graph import Graph, components, is_connected, neighborhood
from .model import EPTAS_PROBLEMS, AnnotatedInstance, Solution, sense
from .partitioner import bounded_tw_modulator, derive_constants
from .transversals import build_transversal
from .treewidth.decomposition import heuristic_decomposition
from .treewidth.nice import make_nice
from .twsolvers.dp import DPBudgetError, dp_solve

log = logging.getLogger(__name__)

# (transversal factor, additive lift constant) per problem
RHO = {
    "vc": (2, 1),
    "fvs": (2, 1),
    # 2-approximate FVS, and fvs <= 3 * cycle packing on planar graphs
    "cycle-packing": (6, 0),
    "cvc": (2, 2),
    # at most 4k + 2 <= 6k vertices of degree >= 3
    "max-leaf": (6, 2),
    "ds": (1, 1),
}

ANNOTATED = {
    "vc": "vc",
    "fvs": "fvs",
    "cycle-packing": "cycle-packing",
    "cvc": "cvc-annotated",
    "ds": "ds-annotated",
    "max-leaf": "maxleaf-annotated",
}

MAX_RETRIES = 4


class EptasError(RuntimeError):
    pass


class LiftError(AssertionError):
    """A lifted solution broke feasibility or its additive bound."""


def _need_connected(problem, g):
    if problem in ("cvc", "max-leaf") and not is_connected(g):
        raise EptasError(f"{problem} needs a connected input graph")


def reduce(problem: str, g: Graph, x) -> AnnotatedInstance:
    """Annotated instance on ``G - X``; anchors are ``N(X)`` where used."""
    if problem not in ANNOTATED:
        raise EptasError(f"unsupported problem {problem!r}")
    x = frozenset(x)
    if any(not 0 <= v < g.n for v in x):
        raise EptasError("X is not a subset of V(G)")
    sub, labels = g.without(x)
    index = {v: i for i, v in enumerate(labels)}
    R = frozenset()
    if problem in ("cvc", "ds", "max-leaf"):
        R = frozenset(index[v] for v in neighborhood(g, x))
    connected = problem in ("cvc", "max-leaf") and not x
    return AnnotatedInstance(ANNOTATED[problem], sub, R, None, connected, labels)


def _cvc_connect(g: Graph, s: set) -> set:
    """Add connector vertices until ``G[s]`` is connected.

    ``s`` is a vertex cover, so every vertex outside it sees only ``s`` and a
    single outside vertex merges at least two components.
    """
    s = set(s)
    while True:
        comps = components(g, s)
        if len(comps) <= 1:
            return s
        where = {v: i for i, c in enumerate(comps) for v in c}
        best = None
        for u in range(g.n):
            if u in s:
                continue
            touched = {where[w] for w in g.adj[u]}
            if len(touched) >= 2 and (best is None or len(touched) > best[0]):
                best = (len(touched), u)
        if best is None:
            raise EptasError("cannot connect the cover; is the graph connected?")
        s.add(best[1])


def _spanning_tree_with_leaves(g: Graph, leaves: set) -> list[tuple[int, int]]:
    """Spanning tree of ``g`` keeping ``leaves`` as leaves where possible."""
    outside = [v for v in range(g.n) if v not in leaves]
    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edges = []

    def add(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[rb] = ra
        edges.append((min(a, b), max(a, b)))
        return True

    # spanning forest of G - S
    out = set(outside)
    for comp in components(g, out):
        start = min(comp)
        queue = [start]
        seen = {start}
        for v in queue:
            for u in g.adj[v]:
                if u in out and u not in seen:
                    seen.add(u)
                    queue.append(u)
                    add(v, u)
    # hang every S vertex on a neighbour outside S
    for v in sorted(leaves):
        u = next((u for u in g.adj[v] if u not in leaves), None)
        if u is not None:
            add(u, v)
    # join the remaining pieces, preferring edges that spare leaves
    for rank in range(3):
        for a, b in g.edges():
            if (a in leaves) + (b in leaves) == rank:
                add(a, b)
    return sorted(edges)


def lift(problem: str, g: Graph, x, sol: Solution, inst: AnnotatedInstance | None = None) -> Solution:
    """Turn an annotated solution on ``G - X`` into a solution on ``G``."""
    x = frozenset(x)
    if inst is None:
        inst = reduce(problem, g, x)
    labels = inst.labels
    ok, _ = check(inst.problem, inst.graph, sol.witness, inst.R, inst.budget, inst.connected)
    if not ok:
        raise EptasError(f"annotated solution is infeasible for {inst.problem}")
    stats = {}
    if problem in ("vc", "fvs", "ds"):
        witness = frozenset(labels[v] for v in sol.witness) | x
    elif problem == "cycle-packing":
        witness = [[labels[v] for v in cyc] for cyc in sol.witness]
    elif problem == "cvc":
        base = {labels[v] for v in sol.witness} | x
        q = len(components(inst.graph, sol.witness))
        witness = frozenset(_cvc_connect(g, base))
        stats["connectors"] = len(witness) - len(base)
        stats["annotated_components"] = q
    elif problem == "max-leaf":
        if g.n <= 2:
            edges = list(g.edges())
        else:
            edges = _spanning_tree_with_leaves(g, {labels[v] for v in sol.witness})
        deg = [0] * g.n
        for a, b in edges:
            deg[a] += 1
            deg[b] += 1
        witness = {"edges": edges, "leaves": [v for v in range(g.n) if deg[v] == 1]}
    else:
        raise EptasError(f"unsupported problem {problem!r}")
    feasible, obj = check(problem, g, witness)
    if not feasible:
        raise LiftError(f"lifted {problem} solution is infeasible")
    k = max(1, len(x))
    diff = obj - sol.objective
    if problem in ("vc", "fvs", "ds"):
        bound_ok = 0 <= diff <= len(x)
    elif problem == "cycle-packing":
        bound_ok = diff == 0
    elif problem == "cvc":
        bound_ok = 0 <= diff <= 2 * (k + stats["annotated_components"])
    else:
        bound_ok = diff >= -2 * (k - 1)
    if not bound_ok:
        raise LiftError(f"{problem} lift moved the objective by {diff} (|X|={len(x)})")
    stats["lift_delta"] = diff
    return Solution(problem, witness, obj, True, "eptas", stats)


@dataclass
class EptasOptions:
    lam: float = 0.5
    beta: float | None = None
    eta: float | None = None
    rho_grid: float = 0.2
    gamma: float | None = None
    transversal: frozenset | None = None
    rho_transversal: float | None = None  # overrides the table, e.g. for ds
    max_retries: int = MAX_RETRIES
    search_bags: int = 8


@dataclass
class EptasResult:
    solution: Solution
    trace: dict = field(default_factory=dict)

    def as_dict(self, g: Graph) -> dict:
        t = self.trace
        return {
            "problem": self.solution.problem,
            "n": g.n,
            "m": g.m,
            "epsilon": t["epsilon"],
            "objective": self.solution.objective,
            "feasible": self.solution.feasible,
            "witness": self.solution.witness_json(),
            "stage_stats": {
                "transversal_size": t["transversal_size"],
                "modulator_size": t["modulator_size"],
                "width": t["width"],
                "dp_states": t["dp_states"],
            },
            "guarantee": t["guarantee"],
            "trace": {k: v for k, v in t.items() if k != "epsilon"},
        }


def eptas_solve(problem: str, g: Graph, epsilon: float, options: EptasOptions | None = None) -> EptasResult:
    """Approximate ``problem`` on ``g`` within ``1 + epsilon`` (see trace for the regime)."""
    opts = options or EptasOptions()
    if problem not in EPTAS_PROBLEMS:
        raise EptasError(f"unsupported problem {problem!r}")
    if not epsilon > 0:
        raise EptasError(f"epsilon must be positive, got {epsilon}")
    _need_connected(problem, g)
    times = {}
    t0 = time.perf_counter()

    if opts.transversal is not None:
        x = frozenset(opts.transversal)
        if any(not 0 <= v < g.n for v in x):
            raise EptasError("transversal is not a subset of V(G)")
        rest, _ = g.without(x)
        eta = heuristic_decomposition(rest).width if opts.eta is None else opts.eta
    elif problem == "ds":
        raise EptasError("dominating set needs a user-supplied transversal")
    else:
        x, eta = build_transversal(problem, g)
        if opts.eta is not None:
            eta = opts.eta
    times["transversal"] = time.perf_counter() - t0

    rho1, c_lift = RHO[problem]
    if opts.rho_transversal is not None:
        rho1 = opts.rho_transversal
    rho = max(rho1, c_lift, 1)
    eps_prime = epsilon / (2 * rho * rho)
    consts = derive_constants(eps_prime, opts.lam, opts.beta, max(eta, 0), opts.rho_grid)
    gamma = opts.gamma
    guarantee = "paper-constants" if gamma is None else "override-no-guarantee"

    retries = 0
    while True:
        t1 = time.perf_counter()
        mod = bounded_tw_modulator(g, x, consts, gamma=gamma, search_bags=opts.search_bags)
        times["modulator"] = time.perf_counter() - t1
        t2 = time.perf_counter()
        inst = reduce(problem, g, mod.x_prime)
        ntd = make_nice(heuristic_decomposition(inst.graph))
        try:
            sol = dp_solve(inst, ntd, validate=False)
        except DPBudgetError as exc:
            retries += 1
            if retries > opts.max_retries:
                exc.sizing.update(retries=retries - 1, gamma=mod.gamma)
                raise
            gamma = mod.gamma / 2
            guarantee = "override-no-guarantee"
            log.info("DP over budget (%s); retrying with gamma=%s", exc, gamma)
            continue
        times["dp"] = time.perf_counter() - t2
        break

    t3 = time.perf_counter()
    lifted = lift(problem, g, mod.x_prime, sol, inst)
    times["lift"] = time.perf_counter() - t3
    trace = {
        "epsilon": epsilon,
        "epsilon_prime": eps_prime,
        "rho_transversal": rho1,
        "lift_constant": c_lift,
        "eta": eta,
        "constants": consts.as_dict(),
        "gamma_used": mod.gamma,
        "guarantee": guarantee,
        "retries": retries,
        "transversal_size": len(x),
        "modulator_size": len(mod.x_prime),
        "partition": {k: v for k, v in mod.as_dict().items() if k != "components"},
        "width": sol.stats["width"],
        "dp_states": sol.stats["dp_states"],
        "annotated_objective": sol.objective,
        "lift": lifted.stats,
        "seconds": {k: round(v, 6) for k, v in times.items()},
    }
    lifted.stats = trace
    return EptasResult(lifted, trace)


def within_ratio(problem: str, value: int, optimum: int, epsilon: float) -> bool:
    if sense(problem) == "min":
        return value <= (1 + epsilon) * optimum
    return (1 + epsilon) * value >= optimum
