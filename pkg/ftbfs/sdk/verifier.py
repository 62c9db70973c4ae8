"""Brute-force ground truth for fault-tolerant structures.

H preserves BFS from s under F exactly when every vertex has the same hop
distance from s in H minus F as in G minus F. The sweep computes both
distance arrays with networkx on restricted views, independently of the
construction code, for every enumerated failure set.
"""
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, List, Optional, Sequence

import networkx as nx

from ftbfs.sdk.builder import SizeReport
from ftbfs.sdk.config import get_worker_count
from ftbfs.sdk.errors import SubgraphContainmentError
from ftbfs.sdk.graph import FailureMode, FailureSpec, Graph, GraphLike
from ftbfs.sdk.utils import SplitMix64

logger = logging.getLogger(__name__)

INF = math.inf


@dataclass(frozen=True)
class SamplingSpec:
    count: Optional[int] = None
    seed: Optional[int] = None

    @property
    def exhaustive(self) -> bool:
        return self.count is None

    @classmethod
    def parse(cls, text: str) -> "SamplingSpec":
        text = (text or "exhaustive").strip()
        if text == "exhaustive":
            return cls()
        parts = text.split(":")
        if len(parts) != 3 or parts[0] != "sample" or not parts[2].startswith("seed="):
            raise ValueError(f"Sampling must be 'exhaustive' or 'sample:<count>:seed=<s>', got '{text}'")
        try:
            count, seed = int(parts[1]), int(parts[2][len("seed="):])
        except ValueError:
            raise ValueError(f"Non-integer count or seed in sampling spec '{text}'")
        if count < 0:
            raise ValueError(f"Sample count must be non-negative, got {count}")
        return cls(count, seed)

    def __str__(self) -> str:
        return "exhaustive" if self.exhaustive else f"sample:{self.count}:seed={self.seed}"


EXHAUSTIVE = SamplingSpec()


@dataclass(frozen=True)
class Witness:
    failure: FailureSpec
    source: int
    target: int
    dist_g: float
    dist_h: float

    def sort_key(self) -> tuple:
        return (self.failure.sort_key(), self.source, self.target)

    def to_json(self) -> dict:
        return {"failure": self.failure.to_json(), "source": self.source, "target": self.target,
                "distG": None if self.dist_g == INF else int(self.dist_g),
                "distH": None if self.dist_h == INF else int(self.dist_h)}


@dataclass
class VerificationReport:
    status: str
    checked: int
    witnesses: List[Witness] = field(default_factory=list)
    size: Optional[SizeReport] = None
    elapsed_ms: float = 0.0
    sampling: SamplingSpec = EXHAUSTIVE

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "checked": self.checked,
            "witnesses": [w.to_json() for w in self.witnesses],
            "size": self.size.to_dict() if self.size else None,
            "elapsedMs": round(self.elapsed_ms, 3),
            "sampling": str(self.sampling),
        }


def bfs_distances(g: GraphLike, s: int) -> List[float]:
    """Hop distances from s; INF marks unreachable (and removed) vertices."""
    return _distances(g.to_networkx(), s, g.n)


def _distances(nxg: nx.Graph, s: int, n: int) -> List[float]:
    dist = [INF] * n
    if s not in nxg: return dist
    for v, d in nx.single_source_shortest_path_length(nxg, s).items():
        dist[v] = d
    return dist


def _elements(g: Graph, mode: FailureMode, sources: Sequence[int]) -> list:
    if mode == FailureMode.VERTEX:
        excluded = set(sources)
        return [x for x in range(g.n) if x not in excluded]
    return list(g.edges)


def enumerate_failure_sets(g: Graph, k: int, mode: FailureMode,
                           sampling: SamplingSpec = EXHAUSTIVE,
                           sources: Sequence[int] = ()) -> Iterator[FailureSpec]:
    """The empty set, every singleton, then every (or a seeded sample of) unordered pair."""
    if k not in (0, 1, 2):
        raise ValueError(f"Only up to two failures are supported, got k={k}")
    mode = FailureMode(mode)
    yield FailureSpec.empty(mode)
    if k == 0: return
    elements = _elements(g, mode, sources)
    for x in elements:
        yield FailureSpec(mode, (x,))
    if k == 1: return
    population = len(elements) * (len(elements) - 1) // 2
    if sampling.exhaustive or sampling.count >= population:
        for pair in combinations(elements, 2):
            yield FailureSpec(mode, pair)
        return
    chosen = SplitMix64(sampling.seed).sample(population, sampling.count)
    pick = iter(chosen)
    want = next(pick, None)
    for idx, pair in enumerate(combinations(elements, 2)):
        if want is None: return
        if idx == want:
            yield FailureSpec(mode, pair)
            want = next(pick, None)


def check_containment(g: Graph, h: Graph):
    if (g.n, g.directed) != (h.n, h.directed):
        raise ValueError(f"Subgraph {h!r} does not share the vertex set of {g!r}")
    for e in h.edges:
        if not g.has_edge(*e):
            raise SubgraphContainmentError(e)


def _sweep(g: Graph, h: Graph, failures: List[FailureSpec], sources: Sequence[int],
           slack: int) -> List[Witness]:
    nx_g, nx_h = g.to_networkx(), h.to_networkx()
    witnesses = []
    for f in failures:
        hidden_v = f.items if f.mode == FailureMode.VERTEX else ()
        hidden_e = f.items if f.mode == FailureMode.EDGE else ()
        view_g = nx.restricted_view(nx_g, hidden_v, hidden_e)
        view_h = nx.restricted_view(nx_h, hidden_v, hidden_e)
        for s in sources:
            dist_g = _distances(view_g, s, g.n)
            dist_h = _distances(view_h, s, g.n)
            for v in range(g.n):
                if dist_h[v] > dist_g[v] + slack:
                    witnesses.append(Witness(f, s, v, dist_g[v], dist_h[v]))
    return witnesses


def _run_sweep(g: Graph, h: Graph, failures: List[FailureSpec], sources: Sequence[int],
               slack: int, workers: int) -> List[Witness]:
    if workers <= 1 or len(failures) < 2 * workers:
        witnesses = _sweep(g, h, failures, sources, slack)
    else:
        chunks = [failures[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_sweep, [g] * workers, [h] * workers, chunks,
                               [list(sources)] * workers, [slack] * workers)
            witnesses = [w for part in results for w in part]
    return sorted(witnesses, key=Witness.sort_key)


def run_distance_sweep(g: Graph, h: Graph, sources: Sequence[int], k: int, mode: FailureMode,
                       sampling: SamplingSpec = EXHAUSTIVE, slack: int = 0,
                       failure_sources: Sequence[int] = (), workers: Optional[int] = None,
                       size: Optional[SizeReport] = None) -> VerificationReport:
    """Shared engine: witness whenever dist in H minus F exceeds dist in G minus F plus slack."""
    check_containment(g, h)
    workers = workers or get_worker_count()
    started = time.perf_counter()
    failures = list(enumerate_failure_sets(g, k, mode, sampling, failure_sources))
    logger.info(f"Checking {len(failures)} failure sets x {len(sources)} sources ({sampling})")
    witnesses = _run_sweep(g, h, failures, sources, slack, workers)
    elapsed = (time.perf_counter() - started) * 1000.0
    status = "fail" if witnesses else "pass"
    if witnesses:
        logger.warning(f"{len(witnesses)} witnesses found; first: {witnesses[0]}")
    return VerificationReport(status, len(failures), witnesses, size, elapsed, sampling)


def verify_structure(g: Graph, h: Graph, sources: Sequence[int], k: int,
                     mode: FailureMode = FailureMode.EDGE, sampling: SamplingSpec = EXHAUSTIVE,
                     workers: Optional[int] = None, size: Optional[SizeReport] = None) -> VerificationReport:
    """Exact distance preservation from every source under every enumerated failure set."""
    return run_distance_sweep(g, h, sorted(sources), k, mode, sampling, slack=0,
                              failure_sources=sources, workers=workers, size=size)
