"""Dual fault-tolerant BFS / MBFS construction.

For every target v the failure schedule of each source is walked in order;
the preferred path of each failure set is computed and, when its last edge
is new among the last edges collected at v, the path is assigned to the
failure and the edge joins H. Multi-source builds run three passes per
target (empty failures, singles, pairs), each over the sources in ascending
order. Targets never interact, so builds split over target partitions and
merge back deterministically.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from ftbfs.sdk.config import get_worker_count
from ftbfs.sdk.errors import OverlappingPartitionError
from ftbfs.sdk.graph import Edge, FailureMode, FailureSpec, Graph, write_graph
from ftbfs.sdk.paths import BaseChain, PathRecord, build_failure_schedule, preferred_path
from ftbfs.sdk.utils import save_json

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Assignment:
    source: int
    target: int
    failure: FailureSpec
    path: PathRecord
    rank: Tuple[int, int, int]  # (pass, source position, schedule position)

    @property
    def last_edge(self) -> Edge:
        return self.path.last_edge

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target, "failure": self.failure.to_json(),
                "path": list(self.path.vertices), "lastEdge": list(self.last_edge)}


@dataclass(frozen=True)
class Unreachable:
    source: int
    target: int
    failure: FailureSpec

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target, "failure": self.failure.to_json()}


@dataclass
class FtStructure:
    graph: Optional[Graph]
    sources: Tuple[int, ...]
    k: int
    mode: FailureMode
    edges: Set[Edge] = field(default_factory=set)
    assignments: List[Assignment] = field(default_factory=list)
    last_edges: Dict[int, Set[Edge]] = field(default_factory=dict)
    unreachable: List[Unreachable] = field(default_factory=list)
    chains: Dict[Tuple[int, int], BaseChain] = field(default_factory=dict)
    targets: FrozenSet[int] = frozenset()

    @property
    def n(self) -> int:
        return self.graph.n if self.graph is not None else 0

    def subgraph(self) -> Graph:
        return self.graph.with_edges(self.edges)

    def assignments_at(self, target: int) -> List[Assignment]:
        return [a for a in self.assignments if a.target == target]

    def params(self) -> dict:
        return {"sources": list(self.sources), "k": self.k, "mode": self.mode.value,
                "n": self.n, "directed": bool(self.graph.directed) if self.graph else False}

    def to_dict(self) -> dict:
        """Canonical JSON form; identical for sequential and merged parallel builds."""
        return {
            "params": self.params(),
            "edges": [list(e) for e in sorted(self.edges)],
            "assignments": [a.to_json() for a in self.assignments],
            "unreachable": [u.to_json() for u in self.unreachable],
        }


@dataclass(frozen=True)
class SizeReport:
    edges: int
    n: int
    sigma: int
    k: int
    bound: float
    ratio: float
    max_contributing: int

    def to_dict(self) -> dict:
        return {"edges": self.edges, "n": self.n, "sigma": self.sigma, "k": self.k,
                "bound": round(self.bound, 6), "ratio": round(self.ratio, 6),
                "maxContributing": self.max_contributing}


def _validate_sources(g: Graph, sources: Sequence[int]) -> Tuple[int, ...]:
    if not sources:
        raise ValueError("At least one source is required")
    if len(set(sources)) != len(sources):
        raise ValueError(f"Sources must be distinct: {list(sources)}")
    for s in sources:
        if not 0 <= s < g.n:
            raise ValueError(f"Source {s} out of range for n={g.n}")
    return tuple(sorted(sources))


def _canonical_order(st: FtStructure):
    st.assignments.sort(key=lambda a: (a.target, a.rank))
    st.unreachable.sort(key=lambda u: (u.target, len(u.failure), u.source, u.failure.sort_key()))


def _build_targets(g: Graph, sources: Tuple[int, ...], k: int, mode: FailureMode,
                   targets: Iterable[int]) -> FtStructure:
    st = FtStructure(g, sources, k, mode)
    targets = tuple(targets)
    for v in targets:
        plans = {}
        for s in sources:
            if s == v: continue
            chain, schedule = build_failure_schedule(g, s, v, k, mode, protected=sources)
            st.chains[(s, v)] = chain
            plans[s] = schedule
        seen: Set[Edge] = set()
        for pass_no in range(k + 1):
            for pos, s in enumerate(sources):
                if s not in plans: continue
                chain = st.chains[(s, v)]
                for idx, entry in enumerate(plans[s]):
                    if len(entry.failure) != pass_no: continue
                    path = preferred_path(g, s, v, chain, entry.failure)
                    if path is None:
                        st.unreachable.append(Unreachable(s, v, entry.failure))
                        continue
                    if path.last_edge in seen: continue
                    seen.add(path.last_edge)
                    st.edges.add(g.canonical(*path.last_edge))
                    st.assignments.append(Assignment(s, v, entry.failure, path, (pass_no, pos, idx)))
        if seen:
            st.last_edges[v] = seen
    st.targets = frozenset(targets)
    _canonical_order(st)
    return st


def _partition(targets: Sequence[int], parts: int) -> List[List[int]]:
    buckets = [list(targets[i::parts]) for i in range(parts)]
    return [b for b in buckets if b]


def build_ft_mbfs(g: Graph, sources: Sequence[int], k: int, mode: FailureMode = FailureMode.EDGE,
                  workers: Optional[int] = None) -> FtStructure:
    """Dual (k=2) or single (k=1) fault-tolerant multi-source BFS structure."""
    mode = FailureMode(mode)
    sources = _validate_sources(g, sources)
    if k not in (0, 1, 2):
        raise ValueError(f"Only up to two failures are supported, got k={k}")
    workers = workers or get_worker_count()
    targets = list(range(g.n))
    logger.info(f"Building k={k} {mode.value} structure for sources {list(sources)} on {g!r} "
                f"with {workers} worker(s)")
    if workers <= 1 or len(targets) < 2:
        return _build_targets(g, sources, k, mode, targets)
    chunks = _partition(targets, workers)
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(_build_targets, [g] * len(chunks), [sources] * len(chunks),
                              [k] * len(chunks), [mode] * len(chunks), chunks))
    return merge_structures(parts)


def build_ft_structure(g: Graph, s: int, k: int, mode: FailureMode = FailureMode.EDGE,
                       workers: Optional[int] = None) -> FtStructure:
    return build_ft_mbfs(g, [s], k, mode, workers)


def merge_structures(parts: Sequence[FtStructure]) -> FtStructure:
    if not parts:
        return FtStructure(None, (), 0, FailureMode.EDGE)
    head = parts[0]
    merged = FtStructure(head.graph, head.sources, head.k, head.mode)
    covered: Set[int] = set()
    for part in parts:
        if (part.graph, part.sources, part.k, part.mode) != (head.graph, head.sources, head.k, head.mode):
            raise ValueError("Structures built with different graphs or parameters cannot be merged")
        overlap = covered & part.targets
        if overlap:
            raise OverlappingPartitionError(f"Target partitions overlap on {sorted(overlap)}")
        covered |= part.targets
        merged.edges |= part.edges
        merged.assignments.extend(part.assignments)
        merged.unreachable.extend(part.unreachable)
        merged.chains.update(part.chains)
        for v, es in part.last_edges.items(): merged.last_edges[v] = set(es)
    merged.targets = frozenset(covered)
    _canonical_order(merged)
    return merged


def size_bound(n: int, k: int, sigma: int) -> float:
    if k == 0: return float(sigma * n)
    if k == 1: return math.sqrt(sigma) * n ** 1.5
    return sigma ** (1.0 / 3.0) * n ** (5.0 / 3.0)


def structure_stats(st: FtStructure) -> SizeReport:
    sigma = max(1, len(st.sources))
    bound = size_bound(st.n, st.k, sigma) if st.n else 0.0
    edges = len(st.edges)
    per_target = [len(es) for es in st.last_edges.values()]
    return SizeReport(edges=edges, n=st.n, sigma=sigma, k=st.k, bound=bound,
                      ratio=edges / bound if bound else 0.0,
                      max_contributing=max(per_target, default=0))


def write_structure(st: FtStructure, output: Path, sidecar: Optional[Path] = None) -> Tuple[Path, Path]:
    output = Path(output)
    sidecar = Path(sidecar) if sidecar else output.with_name(output.name + ".assignments.json")
    write_graph(output, st.subgraph())
    save_json(sidecar, st.to_dict())
    return output, sidecar


def subgraph_stats(h: Graph, sigma: int, k: int) -> SizeReport:
    """Size report for a subgraph read back from disk; in-degree stands in for the per-target count."""
    bound = size_bound(h.n, k, sigma)
    return SizeReport(edges=h.m, n=h.n, sigma=sigma, k=k, bound=bound,
                      ratio=h.m / bound if bound else 0.0,
                      max_contributing=max((len(h.predecessors(v)) for v in range(h.n)), default=0))
