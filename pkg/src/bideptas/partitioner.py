"""Shrinking a treewidth modulator by recursive balanced separation.

Given ``X`` with ``tw(G - X)`` small, :func:`lemma_partition` returns a set
``X'`` such that every component ``C`` of ``G - X'`` has ``|C ∩ X| <= gamma``
and ``|N(C)| <= gamma``.  When ``gamma`` comes from :func:`derive_constants`
for a class of truly sublinear treewidth, ``|X'| <= epsilon * |X|`` as well.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .graph import Graph, components, neighborhood
from .treewidth.decomposition import heuristic_decomposition
from .treewidth.separator import CHECK_INVARIANTS, balanced_separator

log = logging.getLogger(__name__)


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class PartitionConstants:
    epsilon: float
    lam: float
    beta: float
    eta: float
    rho: float
    delta: float
    gamma: float
    tau: float

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def split_exponent_sum(lam: float) -> float:
    """min over a in [1/3, 2/3] of a^lam + (1-a)^lam.

    The function is concave and symmetric about 1/2, so the minimum sits at
    the ends of the interval.
    """
    return (1 / 3) ** lam + (2 / 3) ** lam


def planar_beta(eta: float, rho_grid: float = 0.2) -> float:
    """Sublinear-treewidth coefficient for planar graphs.

    Uses ``tw(G) <= ((eta+1)/rho_grid) * ceil(sqrt(|X|+1))`` together with
    ``ceil(sqrt(k+1)) <= 3*sqrt(k)`` for ``k >= 1``.
    """
    if rho_grid <= 0:
        raise PartitionError("rho_grid must be positive")
    return 3 * (eta + 1) / rho_grid


def derive_constants(epsilon: float, lam: float = 0.5, beta: float | None = None,
                     eta: float = 1, rho_grid: float = 0.2) -> PartitionConstants:
    if not 0 < epsilon < 1:
        raise PartitionError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not 0 < lam < 1:
        raise PartitionError(f"lambda must lie in (0, 1), got {lam}")
    if eta < 0:
        raise PartitionError(f"eta must be >= 0, got {eta}")
    if beta is None:
        beta = planar_beta(eta, rho_grid)
    if beta < 0:
        raise PartitionError(f"beta must be >= 0, got {beta}")
    rho = split_exponent_sum(lam)
    delta = (2 * epsilon + 1) * (beta + eta + 1) / (rho - 1)
    gamma = (3 * delta / epsilon) ** (1 / (1 - lam))
    tau = eta + beta * gamma ** lam
    return PartitionConstants(epsilon, lam, beta, eta, rho, delta, gamma, tau)


@dataclass
class ComponentRow:
    size: int
    in_x: int
    boundary: int
    width: int

    def as_dict(self):
        return {"size": self.size, "in_x": self.in_x, "boundary": self.boundary,
                "width": self.width}


@dataclass
class PartitionReport:
    x_prime: frozenset[int]
    gamma: float
    x_size: int
    depth: int = 0
    calls: int = 0
    guard_triggers: int = 0
    guard_regions: list = field(default_factory=list)
    unbalanced_splits: int = 0
    rows: list[ComponentRow] = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        return self.guard_triggers > 0

    @property
    def ratio(self) -> float:
        return len(self.x_prime) / self.x_size if self.x_size else 0.0

    def violations(self) -> list[ComponentRow]:
        return [r for r in self.rows if r.in_x > self.gamma or r.boundary > self.gamma]

    def as_dict(self):
        return {
            "x_size": self.x_size,
            "x_prime_size": len(self.x_prime),
            "ratio": self.ratio,
            "gamma": self.gamma,
            "depth": self.depth,
            "calls": self.calls,
            "guard_triggers": self.guard_triggers,
            "unbalanced_splits": self.unbalanced_splits,
            "components": [r.as_dict() for r in self.rows],
        }


def _child_load(part):
    # X-set size of the larger child, then separator size
    return (len(part.sep) + max(part.w_left, part.w_right), len(part.sep))


def lemma_partition(g: Graph, x, gamma: float, search_bags: int = 8,
                    report_widths: bool = True) -> PartitionReport:
    """Recursively separate ``g`` until each region holds at most ``gamma`` X-vertices.

    A region with X-set ``xs`` larger than ``gamma`` is split by a balanced
    separator ``S`` of its induced subgraph (weights: indicator of ``xs``).
    ``S`` joins ``X'`` and the two sides recurse on ``L ∪ S`` and ``R ∪ S``
    with X-sets ``S ∪ (xs ∩ L)`` and ``S ∪ (xs ∩ R)``.  A child whose X-set
    is not smaller than its parent's is closed off by moving its whole X-set
    into ``X'``; such events are counted in ``guard_triggers``.
    """
    x = frozenset(x)
    if any(not 0 <= v < g.n for v in x):
        raise PartitionError("X is not a subset of V(G)")
    if gamma < 1:
        raise PartitionError(f"gamma must be >= 1, got {gamma}")
    rep = PartitionReport(frozenset(), gamma, len(x))
    xp = set()
    stack = [(frozenset(range(g.n)), x, 0)]
    while stack:
        region, xs, depth = stack.pop()
        rep.calls += 1
        rep.depth = max(rep.depth, depth)
        if CHECK_INVARIANTS:
            for v in region:
                if v not in xs and any(u not in region for u in g.adj[v]):
                    raise AssertionError(f"boundary vertex {v} outside the region's X-set")
        if len(xs) <= gamma:
            continue
        sub, labels = g.induced(region)
        td = heuristic_decomposition(sub)
        w = [1 if v in xs else 0 for v in labels]
        part = balanced_separator(sub, td, w, strict=False, check=False,
                                  search_bags=search_bags, prefer=_child_load)
        if not part.balanced:
            rep.unbalanced_splits += 1
        sep = frozenset(labels[i] for i in part.sep)
        xp.update(sep)
        for side in (part.left, part.right):
            side = frozenset(labels[i] for i in side)
            child_x = sep | (xs & side)
            if len(child_x) >= len(xs):
                xp.update(child_x)
                rep.guard_triggers += 1
                rep.guard_regions.append(sorted(side | sep))
                continue
            stack.append((side | sep, child_x, depth + 1))
    rep.x_prime = frozenset(xp)
    rep.rows = component_rows(g, x, rep.x_prime, widths=report_widths)
    return rep


def component_rows(g: Graph, x, x_prime, widths: bool = True) -> list[ComponentRow]:
    rest = set(range(g.n)) - set(x_prime)
    rows = []
    for comp in components(g, rest):
        w = -1
        if widths:
            sub, _ = g.induced(comp)
            w = heuristic_decomposition(sub).width
        rows.append(ComponentRow(len(comp), len(comp & x), len(neighborhood(g, comp)), w))
    return rows


@dataclass
class ModulatorResult:
    x_prime: frozenset[int]
    gamma: float
    gamma_overridden: bool
    width_before: int
    width_after: int
    report: PartitionReport

    def as_dict(self):
        d = self.report.as_dict()
        d.update(gamma_overridden=self.gamma_overridden, width_before=self.width_before,
                 width_after=self.width_after)
        return d


def bounded_tw_modulator(g: Graph, x, constants: PartitionConstants,
                         gamma: float | None = None, search_bags: int = 8) -> ModulatorResult:
    """Shrink ``x`` to ``X'`` so that ``G - X'`` has treewidth O(gamma^lambda).

    ``gamma`` overrides the value derived in ``constants``; the width of
    ``G - X`` (which should not exceed ``constants.eta``) and of ``G - X'``
    are reported from the min-fill heuristic.
    """
    x = frozenset(x)
    g_rest, _ = g.without(x)
    before = heuristic_decomposition(g_rest).width
    if before > constants.eta:
        log.warning("heuristic width of G - X is %d > eta = %s", before, constants.eta)
    use = constants.gamma if gamma is None else gamma
    # a gamma beyond |X| leaves nothing to do; avoid float overflow downstream
    if not math.isfinite(use) or use >= len(x):
        use = max(use, 1) if math.isfinite(use) else float(len(x) + 1)
    rep = lemma_partition(g, x, use, search_bags=search_bags)
    after = max((r.width for r in rep.rows), default=-1)
    return ModulatorResult(rep.x_prime, use, gamma is not None, before, after, rep)
