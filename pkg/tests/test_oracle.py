import json
from pathlib import Path

import pytest

from bideptas.graph import Graph, gen_stacked_planar
from bideptas.model import InfeasibleError
from bideptas.oracle import (
    OracleError, brute_force, max_independent_set, max_induced_forest,
)
from conftest import complete, cycle, path, star

FROZEN = json.loads((Path(__file__).parent / "fixtures" / "oracle_values.json").read_text())


def test_examples():
    assert brute_force("vc", cycle(5)).objective == 3
    assert brute_force("fvs", complete(4)).objective == 2
    assert brute_force("max-leaf", star(4)).objective == 4
    assert brute_force("cycle-packing", cycle(6)).objective == 1
    sol = brute_force("partial-vc", path(3), budget=2)
    assert sol.objective == 1 and sol.witness == {1}


def test_lexicographic_witness():
    assert brute_force("vc", cycle(4)).witness == {0, 2}
    assert brute_force("ds", path(3)).witness == {1}


def test_errors():
    with pytest.raises(OracleError):
        brute_force("vc", Graph(17))
    with pytest.raises(OracleError):
        brute_force("max-leaf", Graph(3, [(0, 1)]))
    with pytest.raises(OracleError):
        brute_force("nope", Graph(2))
    with pytest.raises(InfeasibleError):
        brute_force("partial-vc", path(3), budget=5)
    with pytest.raises(InfeasibleError):
        brute_force("cvc-annotated", path(3), R=())


def test_small_max_leaf():
    assert brute_force("max-leaf", Graph(1)).objective == 0
    assert brute_force("max-leaf", Graph(2, [(0, 1)])).objective == 2
    assert brute_force("max-leaf", path(4)).objective == 2


@pytest.mark.parametrize("row", FROZEN, ids=lambda r: f"seed{r['seed']}")
def test_frozen_values(row):
    g = gen_stacked_planar(row["n"], row["seed"], keep=row["keep"])
    assert g.m == row["m"]
    for problem, value in row["values"].items():
        budget = row["t"] if problem == "partial-vc" else None
        assert brute_force(problem, g, budget=budget).objective == value, problem


def test_dualities():
    for seed in range(25):
        g = gen_stacked_planar(3 + seed % 10, seed, keep=0.8)
        vc = brute_force("vc", g).objective
        assert vc + max_independent_set(g) == g.n
        assert brute_force("fvs", g).objective == g.n - max_induced_forest(g)
        assert brute_force("partial-vc", g, budget=g.m).objective == vc
