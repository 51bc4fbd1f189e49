"""Instances and solutions shared by the solvers, the oracle and the driver."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph

# problems the tree-decomposition DP understands
DP_PROBLEMS = ("vc", "fvs", "cycle-packing", "cvc-annotated", "ds-annotated",
               "maxleaf-annotated", "partial-vc")

# problems on the original graph handled by the end-to-end driver
EPTAS_PROBLEMS = ("vc", "fvs", "cycle-packing", "cvc", "ds", "max-leaf")

MAXIMIZE = {"cycle-packing", "maxleaf-annotated", "max-leaf"}


class InfeasibleError(ValueError):
    """The (annotated) instance admits no feasible solution."""


def sense(problem: str) -> str:
    return "max" if problem in MAXIMIZE else "min"


@dataclass(frozen=True)
class AnnotatedInstance:
    """A reduced problem on ``graph`` with anchor set ``R``.

    With ``connected`` set, the connectivity-type annotations are replaced by
    a single-component requirement: for cvc-annotated ``G'[S']`` must be
    connected, for maxleaf-annotated ``G' - S'`` must be connected and
    non-empty.  This is the form the reduction takes when nothing was removed.
    """

    problem: str
    graph: Graph
    R: frozenset = frozenset()
    budget: int | None = None
    connected: bool = False
    labels: tuple | None = None  # vertex of G' -> vertex of the host graph

    def __post_init__(self):
        if self.problem not in DP_PROBLEMS:
            raise ValueError(f"unknown annotated problem {self.problem!r}")
        object.__setattr__(self, "R", frozenset(self.R))
        if any(not 0 <= v < self.graph.n for v in self.R):
            raise ValueError("R is not a subset of V(G')")
        if self.problem == "partial-vc":
            if self.budget is None or self.budget < 0:
                raise ValueError("partial-vc needs a budget t >= 0")
            if self.budget > self.graph.m:
                raise InfeasibleError(f"budget t={self.budget} exceeds |E|={self.graph.m}")


@dataclass
class Solution:
    problem: str
    witness: object
    objective: int
    feasible: bool
    provenance: str  # "oracle", "dp" or "eptas"
    stats: dict = field(default_factory=dict)

    def witness_json(self):
        return witness_to_json(self.witness)


def witness_to_json(w):
    if isinstance(w, (set, frozenset)):
        return sorted(w)
    if isinstance(w, dict):
        return {k: witness_to_json(v) for k, v in sorted(w.items())}
    if isinstance(w, (list, tuple)):
        return [witness_to_json(x) for x in w]
    return w
