import random

import pytest

from bideptas.checks import check
from bideptas.graph import Graph, gen_grid, gen_stacked_planar
from bideptas.model import AnnotatedInstance, InfeasibleError
from bideptas.oracle import brute_force
from bideptas.treewidth.decomposition import TreeDecomposition, heuristic_decomposition
from bideptas.treewidth.nice import make_nice
from bideptas.twsolvers import DPBudgetError, dp_selfcheck, dp_solve, exact_nice
from bideptas.twsolvers.dp import DecompositionInputError
from conftest import complete, cycle, path, star

TWO_TRIANGLES = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def solve(problem, g, R=(), budget=None, connected=False):
    return dp_solve(AnnotatedInstance(problem, g, frozenset(R), budget, connected))


def test_examples():
    assert solve("vc", cycle(4)).objective == 2
    assert solve("fvs", complete(4)).objective == 2
    assert solve("cycle-packing", TWO_TRIANGLES).objective == 2
    sol = solve("ds-annotated", path(3))
    assert sol.objective == 1 and sol.witness == {1}
    assert solve("ds-annotated", gen_grid(3), R=range(9)).objective == 0
    assert solve("partial-vc", star(5), budget=5).objective == 1
    assert solve("partial-vc", gen_grid(3), budget=0).objective == 0


def test_cycle_packing_witness():
    sol = solve("cycle-packing", TWO_TRIANGLES)
    assert sorted(sorted(c) for c in sol.witness) == [[0, 1, 2], [3, 4, 5]]
    assert solve("cycle-packing", path(6)).objective == 0


def test_annotated_connectivity():
    # path 0-1-2-3-4: cover {1, 3} has two components
    p = path(5)
    assert solve("cvc-annotated", p, R={1, 3}).objective == 2
    assert solve("cvc-annotated", p, R={1}).objective == 3
    assert solve("cvc-annotated", p, connected=True).objective == 3
    with pytest.raises(InfeasibleError):
        solve("cvc-annotated", p, R=())
    assert solve("cvc-annotated", Graph(3), R=()).objective == 0


def test_maxleaf_annotated():
    # single-component mode on a star: all leaves
    assert solve("maxleaf-annotated", star(4), connected=True).objective == 4
    assert solve("maxleaf-annotated", path(4), connected=True).objective == 2
    assert solve("maxleaf-annotated", cycle(5), R=range(5)).objective == 5
    with pytest.raises(InfeasibleError):
        solve("maxleaf-annotated", Graph(2, [(0, 1)]), R=())


def test_budget_guards():
    g = gen_grid(10)
    with pytest.raises(DPBudgetError) as err:
        solve("fvs", g)
    assert err.value.sizing["width"] > 8
    with pytest.raises(DPBudgetError):
        dp_solve(AnnotatedInstance("vc", gen_grid(4)), max_states=4)
    with pytest.raises(InfeasibleError):
        AnnotatedInstance("partial-vc", path(3), budget=3)


def test_rejects_bad_decomposition():
    g = path(3)
    bad = make_nice(TreeDecomposition.build([{0, 1}, {2}], [(0, 1)]))
    with pytest.raises(DecompositionInputError):
        dp_solve(AnnotatedInstance("vc", g), bad)


def test_empty_graph():
    assert solve("vc", Graph(0)).objective == 0
    assert solve("cycle-packing", Graph(0)).objective == 0


@pytest.mark.parametrize("problem, seed", [
    ("vc", 42), ("cycle-packing", 7), ("fvs", 1), ("ds-annotated", 3),
    ("partial-vc", 4), ("cvc-annotated", 5), ("maxleaf-annotated", 6),
])
def test_selfcheck(problem, seed):
    rep = dp_selfcheck(problem, 12, 60, seed)
    assert rep["mismatches"] == []


def test_decomposition_independence():
    rng = random.Random(2)
    for seed in range(20):
        g = gen_stacked_planar(rng.randint(5, 13), seed, keep=0.8)
        R = frozenset(v for v in range(g.n) if rng.random() < 0.5)
        for problem in ("vc", "fvs", "cycle-packing", "ds-annotated"):
            inst = AnnotatedInstance(problem, g, R)
            a = dp_solve(inst, exact_nice(g)).objective
            b = dp_solve(inst, make_nice(heuristic_decomposition(g))).objective
            assert a == b


def test_monotonicity():
    g = gen_stacked_planar(12, 9, keep=0.8)
    vals = [solve("partial-vc", g, budget=t).objective for t in range(g.m + 1)]
    assert vals == sorted(vals)
    assert vals[-1] == brute_force("vc", g).objective
    prev = None
    for k in range(g.n + 1):
        cur = solve("ds-annotated", g, R=range(k)).objective
        assert prev is None or cur <= prev
        prev = cur


def test_witnesses_rechecked():
    for seed in range(15):
        g = gen_stacked_planar(10, seed, keep=0.8)
        for problem in ("vc", "fvs", "cycle-packing", "ds-annotated"):
            sol = solve(problem, g)
            assert check(problem, g, sol.witness) == (True, sol.objective)


def test_larger_instance_runs():
    g = gen_stacked_planar(400, 3)
    sol = solve("fvs", g)
    assert sol.feasible and sol.stats["width"] == 3
