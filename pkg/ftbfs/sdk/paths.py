"""Replacement-path machinery.

Three layers:

* ``lex_shortest_path``: lexicographically smallest shortest path, by a BFS
  of distances *to* the destination followed by a greedy descent from the
  source that always takes the smallest-index neighbour one level closer.
* ``preferred_path``: the replacement path selected under one or two
  failures. A candidate leaves each base path before its failed element
  exactly once; touching a forbidden base-path vertex counts as re-entering.
  Candidates are enumerated per divergence point and the winner is the
  shortest, then earliest divergence from P0, then from P1, then the
  lexicographically smallest sequence.
* ``build_failure_schedule``: the processing order for one (source, target)
  pair: the empty failure, single failures on P0 farthest first, then pairs.

Divergence points are reported as indices of the common prefix; a path that
never shares P1 beyond the source diverges from it at the source.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from ftbfs.sdk.config import get_oracle_max_n
from ftbfs.sdk.errors import InconsistentChainError, InstanceTooLargeError
from ftbfs.sdk.graph import Edge, Element, FailureMode, FailureSpec, Graph, GraphLike, remove_failures

logger = logging.getLogger(__name__)

Vertices = Tuple[int, ...]


@dataclass(frozen=True)
class PathRecord:
    vertices: Vertices
    avoided: FailureSpec
    div0: Optional[int] = None
    div1: Optional[int] = None

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def dest(self) -> int:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def last_edge(self) -> Optional[Edge]:
        """Oriented (predecessor, dest) pair, or None for a zero-length path."""
        if len(self.vertices) < 2: return None
        return (self.vertices[-2], self.vertices[-1])

    def edges(self) -> List[Edge]:
        return list(zip(self.vertices, self.vertices[1:]))

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "failure": self.avoided.to_json(),
                "div0": self.div0, "div1": self.div1}


@dataclass(frozen=True)
class ChainEntry:
    element: Element
    position: int
    p1: Optional[PathRecord]
    d0: Vertices = ()


@dataclass
class BaseChain:
    source: int
    target: int
    mode: FailureMode
    p0: Optional[PathRecord]
    entries: Dict[Element, ChainEntry] = field(default_factory=dict)

    def entry(self, element: Element) -> ChainEntry:
        if element not in self.entries:
            raise InconsistentChainError(f"{element} is not a failed element of P0({self.source}, {self.target})")
        return self.entries[element]


@dataclass(frozen=True)
class ScheduleEntry:
    failure: FailureSpec
    first: Optional[Element] = None
    second: Optional[Element] = None


FailureSchedule = List[ScheduleEntry]


# --- BFS primitives ---

def _levels(g: GraphLike, root: int, blocked_v: FrozenSet[int], blocked_e: FrozenSet[Edge],
            reverse: bool = False) -> Dict[int, int]:
    """Hop distances from root (to root when reverse) avoiding the blocked elements."""
    if root in blocked_v: return {}
    step = g.predecessors if reverse else g.adjacency
    dist = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in step(u):
            if w in dist or w in blocked_v: continue
            if blocked_e and (g.canonical(w, u) if reverse else g.canonical(u, w)) in blocked_e: continue
            dist[w] = dist[u] + 1
            queue.append(w)
    return dist


def _lex_path(g: GraphLike, s: int, v: int, blocked_v: FrozenSet[int] = frozenset(),
              blocked_e: FrozenSet[Edge] = frozenset()) -> Optional[List[int]]:
    hidden = g.hidden_vertices
    if s in blocked_v or s in hidden or v in hidden: return None
    to_v = _levels(g, v, blocked_v, blocked_e, reverse=True)
    if s not in to_v: return None
    path = [s]
    cur = s
    while cur != v:
        want = to_v[cur] - 1
        for w in g.adjacency(cur):
            if to_v.get(w) != want: continue
            if blocked_e and g.canonical(cur, w) in blocked_e: continue
            break
        else:
            return None
        path.append(w)
        cur = w
    return path


def lex_path_avoiding(g: GraphLike, s: int, v: int, vertices: Iterable[int] = (),
                      edges: Iterable[Edge] = ()) -> Optional[Vertices]:
    """Lex-smallest shortest s->v vertex sequence avoiding extra vertices and (canonical) edges."""
    path = _lex_path(g, s, v, frozenset(vertices), frozenset(edges))
    return tuple(path) if path is not None else None


def lex_shortest_path(g: GraphLike, s: int, v: int) -> Optional[PathRecord]:
    """Lexicographically smallest shortest s->v path in g (a Graph or a failure view)."""
    for x in (s, v):
        if not 0 <= x < g.n:
            raise ValueError(f"Vertex {x} out of range for n={g.n}")
    vertices = _lex_path(g, s, v)
    if vertices is None: return None
    avoided = getattr(g, "failure", None) or FailureSpec.empty()
    return PathRecord(tuple(vertices), avoided)


# --- Base path helpers ---

def path_elements(g: Graph, vertices: Sequence[int], mode: FailureMode) -> List[Element]:
    """Failable elements of a path in order from its source: edges, or internal vertices."""
    if mode == FailureMode.VERTEX:
        return list(vertices[1:-1])
    return [g.canonical(a, b) for a, b in zip(vertices, vertices[1:])]


def element_position(g: Graph, vertices: Sequence[int], element: Element, mode: FailureMode) -> Optional[int]:
    """Index c of the element on the path: edge (B[c], B[c+1]) or vertex B[c]."""
    if mode == FailureMode.VERTEX:
        try:
            return list(vertices).index(element)
        except ValueError:
            return None
    for c, (a, b) in enumerate(zip(vertices, vertices[1:])):
        if g.canonical(a, b) == element: return c
    return None


def last_exit(position: int, mode: FailureMode) -> int:
    """Last index at which a path may still leave the base path before the failed element."""
    return position if mode == FailureMode.EDGE else position - 1


def common_prefix(a: Sequence[int], b: Sequence[int]) -> int:
    """Index of the last vertex of the longest common prefix (-1 if the sources differ)."""
    i = 0
    limit = min(len(a), len(b))
    while i < limit and a[i] == b[i]:
        i += 1
    return i - 1


def detour(g: Graph, path: Sequence[int], base: Iterable[Sequence[int]]) -> Vertices:
    """Last maximal subpath of `path` outside the base paths.

    Its edges are off the base, its interior vertices are off the base, and
    its endpoints are included (the vertex it leaves from and where it rejoins
    or its destination).
    """
    base_vertices = set()
    base_edges = set()
    for b in base:
        base_vertices.update(b)
        base_edges.update(g.canonical(x, y) for x, y in zip(b, b[1:]))
    end = None
    for k in range(len(path) - 1, 0, -1):
        if g.canonical(path[k - 1], path[k]) not in base_edges:
            end = k
            break
    if end is None: return ()
    start = end - 1
    while start > 0 and path[start] not in base_vertices \
            and g.canonical(path[start - 1], path[start]) not in base_edges:
        start -= 1
    return tuple(path[start:end + 1])


def _blocked(f: FailureSpec) -> Tuple[FrozenSet[int], FrozenSet[Edge]]:
    if f.mode == FailureMode.VERTEX: return frozenset(f.items), frozenset()
    return frozenset(), frozenset(f.items)


# --- Preferred paths ---

def _best_candidate(g: Graph, v: int, f: FailureSpec, shapes) -> Optional[PathRecord]:
    """shapes: iterable of (prefix, forbidden, i0, t1). Returns the winning candidate."""
    blocked_v, blocked_e = _blocked(f)
    best_key = None
    best = None
    for prefix, forbidden, i0, t1 in shapes:
        x = prefix[-1]
        tail = _lex_path(g, x, v, blocked_v | frozenset(prefix[:-1]) | frozenset(forbidden), blocked_e)
        if tail is None: continue
        vertices = tuple(prefix[:-1]) + tuple(tail)
        key = (len(vertices), i0, -1 if t1 is None else t1, vertices)
        if best_key is None or key < best_key:
            best_key = key
            best = (vertices, i0, t1)
    if best is None: return None
    vertices, i0, t1 = best
    return PathRecord(vertices, f, div0=vertices[i0], div1=None if t1 is None else vertices[t1])


def _single_replacement(g: Graph, p0: Vertices, e1: Element, f: FailureSpec) -> Optional[PathRecord]:
    le0 = last_exit(element_position(g, p0, e1, f.mode), f.mode)
    v = p0[-1]
    shapes = ((p0[:i + 1], p0[i + 1:le0 + 1], i, None) for i in range(le0 + 1))
    return _best_candidate(g, v, f, shapes)


def _pair_replacement(g: Graph, p0: Vertices, p1: Vertices, e1: Element, e2: Element,
                      f: FailureSpec) -> Optional[PathRecord]:
    mode = f.mode
    le0 = last_exit(element_position(g, p0, e1, mode), mode)
    le1 = last_exit(element_position(g, p1, e2, mode), mode)
    a = common_prefix(p0, p1)
    v = p0[-1]

    def shapes():
        # leave both base paths together above P1's own divergence
        for i in range(min(a, le1 + 1)):
            yield p0[:i + 1], p0[i + 1:le0 + 1] + p1[i + 1:le1 + 1], i, i
        # follow P1 past the divergence, then leave it
        for t in range(a, le1 + 1):
            yield p1[:t + 1], p0[a + 1:le0 + 1] + p1[t + 1:le1 + 1], a, t
        # stay on P0 past P1's divergence, then leave it
        for i in range(a + 1, le0 + 1):
            yield p0[:i + 1], p0[i + 1:le0 + 1] + p1[a + 1:le1 + 1], i, a

    return _best_candidate(g, v, f, shapes())


def resolve_pair(g: Graph, chain: BaseChain, f: FailureSpec) -> Tuple[Element, Element]:
    """Orders the two failed elements as (e1 on P0, e2 on P1(e1))."""
    p0 = chain.p0.vertices
    x, y = f.items
    options = []
    for e1, e2 in ((x, y), (y, x)):
        entry = chain.entries.get(e1)
        if entry is None or entry.p1 is None: continue
        if element_position(g, entry.p1.vertices, e2, f.mode) is None: continue
        pos_e2 = element_position(g, p0, e2, f.mode)
        if pos_e2 is not None and pos_e2 <= entry.position: continue
        options.append((e1, e2))
    if len(options) != 1:
        raise InconsistentChainError(f"Failure set {f} does not extend the base chain of "
                                     f"({chain.source}, {chain.target})")
    return options[0]


def preferred_path(g: Graph, s: int, v: int, chain: BaseChain, f: FailureSpec) -> Optional[PathRecord]:
    """Preferred replacement s->v path avoiding f, or None when v is cut off from s."""
    if (chain.source, chain.target) != (s, v):
        raise InconsistentChainError(f"Chain for ({chain.source}, {chain.target}) used for ({s}, {v})")
    if len(f) and f.mode != chain.mode:
        raise InconsistentChainError(f"Failure mode {f.mode.value} does not match chain mode {chain.mode.value}")
    if chain.p0 is None: return None
    p0 = chain.p0.vertices
    if len(f) == 0:
        return PathRecord(p0, f)
    if len(f) == 1:
        entry = chain.entry(f.items[0])
        if entry.p1 is not None and entry.p1.avoided == f: return entry.p1
        return _single_replacement(g, p0, entry.element, f)
    e1, e2 = resolve_pair(g, chain, f)
    return _pair_replacement(g, p0, chain.entries[e1].p1.vertices, e1, e2, f)


def build_base_chain(g: Graph, s: int, v: int, mode: FailureMode, k: int = 2) -> BaseChain:
    mode = FailureMode(mode)
    p0 = lex_shortest_path(g, s, v)
    if p0 is None:
        return BaseChain(s, v, mode, None)
    p0 = PathRecord(p0.vertices, FailureSpec.empty(mode))
    chain = BaseChain(s, v, mode, p0)
    if k == 0: return chain
    for c, element in enumerate(path_elements(g, p0.vertices, mode)):
        position = c if mode == FailureMode.EDGE else c + 1
        f = FailureSpec.of(mode, [element], g.directed)
        p1 = _single_replacement(g, p0.vertices, element, f)
        d0 = detour(g, p1.vertices, [p0.vertices]) if p1 is not None else ()
        chain.entries[element] = ChainEntry(element, position, p1, d0)
    return chain


def build_failure_schedule(g: Graph, s: int, v: int, k: int, mode: FailureMode,
                           protected: Iterable[int] = ()) -> Tuple[BaseChain, FailureSchedule]:
    """Base chain plus the failure schedule of one (source, target) pair.

    `protected` vertices (other designated sources) never appear as failed
    vertices in vertex mode.
    """
    if s == v:
        raise ValueError(f"Source and target must differ (both {s})")
    if k not in (0, 1, 2):
        raise ValueError(f"Only up to two failures are supported, got k={k}")
    mode = FailureMode(mode)
    chain = build_base_chain(g, s, v, mode, k)
    schedule: FailureSchedule = [ScheduleEntry(FailureSpec.empty(mode))]
    if chain.p0 is None or k == 0:
        return chain, schedule
    skip = set(protected) if mode == FailureMode.VERTEX else set()
    p0 = chain.p0.vertices
    singles = sorted((e for e in chain.entries.values() if e.element not in skip),
                     key=lambda e: -e.position)
    for entry in singles:
        schedule.append(ScheduleEntry(FailureSpec.of(mode, [entry.element], g.directed), entry.element))
    if k == 1:
        return chain, schedule
    for entry in singles:
        if entry.p1 is None: continue
        p1 = entry.p1.vertices
        for e2 in reversed(path_elements(g, p1, mode)):
            if e2 in skip: continue
            on_p0 = element_position(g, p0, e2, mode)
            if on_p0 is not None and on_p0 <= entry.position: continue
            f = FailureSpec.of(mode, [entry.element, e2], g.directed)
            schedule.append(ScheduleEntry(f, entry.element, e2))
    logger.debug(f"Schedule for ({s}, {v}) k={k} {mode.value}: {len(schedule)} failure sets")
    return chain, schedule


# --- Independent oracle ---

def _admissible(candidate: Sequence[int], base: Sequence[int], le: int) -> Tuple[bool, int]:
    idx = common_prefix(candidate, base)
    forbidden = set(base[idx + 1:le + 1])
    return not any(x in forbidden for x in candidate[idx + 1:]), idx


def exhaustive_preferred_oracle(g: Graph, s: int, v: int, chain: BaseChain,
                                f: FailureSpec) -> Optional[PathRecord]:
    """Preferred path by brute force: every shortest path of g minus f, filtered and ranked literally."""
    limit = get_oracle_max_n()
    if g.n > limit:
        raise InstanceTooLargeError(f"Exhaustive oracle is limited to n <= {limit}, got n={g.n}")
    if chain.p0 is None: return None
    view = remove_failures(g, f).to_networkx()
    if s not in view or v not in view: return None
    try:
        candidates = [tuple(p) for p in nx.all_shortest_paths(view, s, v)]
    except nx.NetworkXNoPath:
        return None
    p0 = chain.p0.vertices
    if len(f) == 0:
        return PathRecord(min(candidates), f)
    if len(f) == 1:
        e1, e2 = f.items[0], None
        chain.entry(e1)
    else:
        e1, e2 = resolve_pair(g, chain, f)
    le0 = last_exit(element_position(g, p0, e1, f.mode), f.mode)
    p1 = chain.entries[e1].p1.vertices if e2 is not None else None
    le1 = last_exit(element_position(g, p1, e2, f.mode), f.mode) if e2 is not None else None
    ranked = []
    for cand in candidates:
        ok0, i0 = _admissible(cand, p0, le0)
        if not ok0: continue
        t1 = None
        if p1 is not None:
            ok1, t1 = _admissible(cand, p1, le1)
            if not ok1: continue
        ranked.append((i0, -1 if t1 is None else t1, cand, t1))
    if not ranked: return None
    i0, _, vertices, t1 = min(ranked)
    return PathRecord(vertices, f, div0=vertices[i0], div1=None if t1 is None else vertices[t1])
