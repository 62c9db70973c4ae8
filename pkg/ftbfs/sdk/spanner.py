"""Dual fault-tolerant +2 additive spanner.

Edges touching a vertex of degree at most delta = ceil(n/sigma) are kept
outright. Every heavier vertex gets k+1 neighbours in a source set, and a
k-fault multi-source BFS structure from those sources covers the rest: a
shortest path under failures is rerouted through a surviving source
neighbour of its last heavy vertex, costing at most two extra hops.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from ftbfs.sdk.builder import build_ft_mbfs
from ftbfs.sdk.config import calibration_value
from ftbfs.sdk.graph import Edge, FailureMode, Graph
from ftbfs.sdk.utils import SplitMix64, ceil_root
from ftbfs.sdk.verifier import EXHAUSTIVE, SamplingSpec, VerificationReport, run_distance_sweep

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpannerPlan:
    sigma: int
    delta: int
    sources: Tuple[int, ...]
    light_edges: Tuple[Edge, ...]
    seed: int
    heavy: Tuple[int, ...] = ()
    ft_edge_count: Optional[int] = None
    total_edges: Optional[int] = None

    def to_dict(self, n: int) -> dict:
        bound = spanner_bound(n)
        ratio = self.total_edges / bound if self.total_edges is not None else None
        guard = float(calibration_value("ratio_guard.spanner"))
        return {
            "sigma": self.sigma,
            "delta": self.delta,
            "sources": list(self.sources),
            "lightEdgeCount": len(self.light_edges),
            "ftEdgeCount": self.ft_edge_count,
            "totalEdges": self.total_edges,
            "bound": round(bound, 6),
            "ratio": round(ratio, 6) if ratio is not None else None,
            "withinGuard": ratio <= guard if ratio is not None else None,
        }


def spanner_bound(n: int) -> float:
    return n ** 1.75


def default_sigma(n: int) -> int:
    return max(1, ceil_root(n, 4))


def _required(g: Graph, x: int, k: int) -> int:
    return min(k + 1, g.degree(x))


def select_sources(g: Graph, sigma: Optional[int] = None, k: int = 2, seed: int = 0) -> SpannerPlan:
    """Seeded source sample, repaired until every heavy vertex has min(k+1, degree) source neighbours."""
    if g.directed:
        raise ValueError("Additive spanners are built on undirected graphs only")
    sigma = default_sigma(g.n) if sigma is None else sigma
    if sigma < 1:
        raise ValueError(f"sigma must be at least 1, got {sigma}")
    delta = -(-g.n // sigma)
    heavy = tuple(x for x in range(g.n) if g.degree(x) > delta)
    light = tuple(e for e in g.edges if g.degree(e[0]) <= delta or g.degree(e[1]) <= delta)
    if not heavy:
        return SpannerPlan(sigma, delta, (), light, seed, heavy)

    rng = SplitMix64(seed)
    rate = min(1.0, sigma * math.log(g.n) / g.n)
    sampled = [x for x in range(g.n) if rng.random() < rate]
    sources = set(sampled)
    for x in heavy:
        have = sum(1 for y in g.adjacency(x) if y in sources)
        spare = sorted((y for y in g.adjacency(x) if y not in sources), key=lambda y: (-g.degree(y), y))
        for y in spare[:max(0, _required(g, x, k) - have)]:
            sources.add(y)
    # drop sources the coverage does not need
    is_heavy = frozenset(heavy)
    for y in sorted(sources, reverse=True):
        needed = any(sum(1 for z in g.adjacency(x) if z in sources) <= _required(g, x, k)
                     for x in g.adjacency(y) if x in is_heavy)
        if not needed:
            sources.discard(y)
    logger.info(f"Spanner plan: sigma={sigma} delta={delta} heavy={len(heavy)} "
                f"sampled={len(sampled)} sources={len(sources)}")
    return SpannerPlan(sigma, delta, tuple(sorted(sources)), light, seed, heavy)


def build_additive_spanner(g: Graph, k: int = 2, seed: int = 0, sigma: Optional[int] = None,
                           workers: Optional[int] = None) -> Tuple[Graph, SpannerPlan]:
    if k not in (1, 2):
        raise ValueError(f"Spanners support one or two edge failures, got k={k}")
    plan = select_sources(g, sigma, k, seed)
    edges = set(plan.light_edges)
    ft_edges: set = set()
    if plan.sources:
        ft_edges = build_ft_mbfs(g, plan.sources, k, FailureMode.EDGE, workers).edges
    edges |= ft_edges
    h = g.with_edges(edges)
    plan = replace(plan, ft_edge_count=len(ft_edges), total_edges=h.m)
    return h, plan


def verify_spanner_stretch(g: Graph, h: Graph, k: int = 2, additive: int = 2,
                           sampling: SamplingSpec = EXHAUSTIVE,
                           workers: Optional[int] = None) -> VerificationReport:
    """Witness any (F, u, v) with dist in H minus F above dist in G minus F plus `additive`."""
    return run_distance_sweep(g, h, list(range(g.n)), k, FailureMode.EDGE, sampling,
                              slack=additive, workers=workers)
