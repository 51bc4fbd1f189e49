import random

import pytest

from bideptas.graph import Graph, gen_grid, gen_stacked_planar, is_connected, is_forest
from bideptas.oracle import brute_force
from bideptas.transversals import (
    TransversalError, build_transversal, eta_transversal_approx, fvs_2approx,
    maxleaf_transversal, vc_matching_transversal,
)
from conftest import complete, cycle, star

TWO_TRIANGLES = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def test_matching_examples():
    assert len(vc_matching_transversal(complete(3))) == 2
    pm = Graph(6, [(0, 1), (2, 3), (4, 5)])
    assert vc_matching_transversal(pm) == frozenset(range(6))
    assert vc_matching_transversal(Graph(4)) == frozenset()


def test_fvs_examples():
    assert fvs_2approx(Graph(5, [(0, 1), (1, 2), (3, 4)])) == frozenset()
    x = fvs_2approx(complete(4))
    assert len(x) <= 4 and is_forest(complete(4), x)
    x = fvs_2approx(cycle(5))
    assert len(x) <= 2 and is_forest(cycle(5), x)


def test_fvs_ratio_random():
    rng = random.Random(8)
    for seed in range(80):
        g = gen_stacked_planar(rng.randint(3, 13), seed, keep=rng.choice([1.0, 0.7]))
        x = fvs_2approx(g)
        assert is_forest(g, x)
        assert len(x) <= 2 * brute_force("fvs", g).objective


def test_maxleaf_examples():
    assert maxleaf_transversal(cycle(7)) == frozenset()
    assert maxleaf_transversal(star(5)) == {0}
    assert len(maxleaf_transversal(gen_grid(4))) == 12
    with pytest.raises(TransversalError):
        maxleaf_transversal(TWO_TRIANGLES)


def test_eta_transversal_examples():
    res = eta_transversal_approx(Graph(4, [(0, 1), (1, 2)]), 0)
    assert res.x == frozenset() and res.rounds == 0
    res = eta_transversal_approx(TWO_TRIANGLES, 0)
    assert len(res.x) == 2 and not res.fallback
    res = eta_transversal_approx(cycle(6), 0)
    assert len(res.x) == 1
    with pytest.raises(TransversalError):
        eta_transversal_approx(cycle(6), 3)


def test_eta_transversal_fallback():
    g = gen_grid(6)
    res = eta_transversal_approx(g, 0, width_cap=2)
    assert res.fallback and is_forest(g, res.x)


def test_eta_transversal_random_feasible():
    for seed in range(10):
        g = gen_stacked_planar(12, seed, keep=0.8)
        for cap in (0, 1):
            res = eta_transversal_approx(g, cap)
            assert is_forest(g, res.x)


def test_build_dispatch():
    x, eta = build_transversal("vc", complete(3))
    assert len(x) == 2 and eta == 0
    assert build_transversal("cycle-packing", Graph(3, [(0, 1)])) == (frozenset(), 1)
    assert build_transversal("max-leaf", cycle(8)) == (frozenset(), 2)
    with pytest.raises(TransversalError, match="transversal-file"):
        build_transversal("ds", cycle(4))


def test_kleitman_west_counts():
    # the degree >= 2 count is reported only; the degree >= 3 reading is the contract
    report = []
    for seed in range(20):
        g = gen_stacked_planar(10, seed)
        assert is_connected(g)
        k = brute_force("max-leaf", g).objective
        deg3 = sum(1 for v in range(g.n) if g.degree(v) >= 3)
        deg2 = sum(1 for v in range(g.n) if g.degree(v) >= 2)
        assert deg3 <= 4 * k + 2
        report.append((k, deg3, deg2))
    print("max-leaf k, #deg>=3, #deg>=2:", report)
