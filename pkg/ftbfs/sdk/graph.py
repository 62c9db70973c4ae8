"""Graph representation, edge-list I/O, generators and failure views.

Vertices are dense 0-based integers. Undirected edges are stored as
(min, max); directed edges as ordered pairs. Adjacency lists are strictly
ascending, which is what every lexicographic tie-break downstream relies on.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Tuple, Union

import networkx as nx

from ftbfs.sdk.errors import (
    DuplicateEdgeError,
    EdgeCountError,
    FailureNotInGraphError,
    GraphParseError,
    MalformedHeaderError,
    SelfLoopError,
    VertexRangeError,
)
from ftbfs.sdk.utils import SplitMix64

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Element = Union[Edge, int]


class FailureMode(str, Enum):
    EDGE = "edge"
    VERTEX = "vertex"


class GraphModel(str, Enum):
    GNP = "gnp"
    PATH = "path"
    CYCLE = "cycle"
    COMPLETE = "complete"


class Graph:
    """Immutable unweighted graph with sorted adjacency."""

    __slots__ = ("n", "directed", "_edges", "_edge_set", "_out", "_in")

    def __init__(self, n: int, edges: Iterable[Edge], directed: bool = False):
        if n < 1:
            raise ValueError(f"Graph needs at least one vertex, got n={n}")
        self.n = n
        self.directed = directed
        edge_set = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            e = self.canonical(u, v)
            if e in edge_set:
                raise DuplicateEdgeError(f"duplicate edge {e}")
            edge_set.add(e)
        self._edges = tuple(sorted(edge_set))
        self._edge_set = frozenset(edge_set)
        out = [[] for _ in range(n)]
        inc = [[] for _ in range(n)]
        for u, v in self._edges:
            out[u].append(v)
            inc[v].append(u)
            if not directed:
                out[v].append(u)
                inc[u].append(v)
        self._out = tuple(tuple(sorted(a)) for a in out)
        self._in = tuple(tuple(sorted(a)) for a in inc)

    # --- canonical forms ---

    def canonical(self, u: int, v: int) -> Edge:
        if self.directed or u < v: return (u, v)
        return (v, u)

    # --- queries shared with FailureView ---

    @property
    def base(self) -> "Graph":
        return self

    @property
    def hidden_vertices(self) -> FrozenSet[int]:
        return frozenset()

    @property
    def hidden_edges(self) -> FrozenSet[Edge]:
        return frozenset()

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    def adjacency(self, u: int) -> Tuple[int, ...]:
        return self._out[u]

    def predecessors(self, u: int) -> Tuple[int, ...]:
        return self._in[u]

    def degree(self, u: int) -> int:
        if self.directed: return len(self._out[u]) + len(self._in[u])
        return len(self._out[u])

    def has_edge(self, u: int, v: int) -> bool:
        return self.canonical(u, v) in self._edge_set

    def has_element(self, item: Element, mode: "FailureMode") -> bool:
        if mode == FailureMode.VERTEX:
            return isinstance(item, int) and 0 <= item < self.n
        return isinstance(item, tuple) and self.has_edge(*item)

    def with_edges(self, edges: Iterable[Edge]) -> "Graph":
        """Graph on the same vertex set with the given edges."""
        return Graph(self.n, edges, self.directed)

    def to_networkx(self) -> nx.Graph:
        nxg = nx.DiGraph() if self.directed else nx.Graph()
        nxg.add_nodes_from(range(self.n))
        nxg.add_edges_from(self._edges)
        return nxg

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph): return NotImplemented
        return (self.n, self.directed, self._edges) == (other.n, other.directed, other._edges)

    def __hash__(self) -> int:
        return hash((self.n, self.directed, self._edges))

    def __getstate__(self):
        return (self.n, self._edges, self.directed)

    def __setstate__(self, state):
        n, edges, directed = state
        Graph.__init__(self, n, edges, directed)

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, m={self.m}, {kind})"


@dataclass(frozen=True)
class FailureSpec:
    """Set of at most two failed elements; items are kept sorted so equality is set equality."""

    mode: FailureMode
    items: Tuple[Element, ...] = ()

    @classmethod
    def empty(cls, mode: FailureMode = FailureMode.EDGE) -> "FailureSpec":
        return cls(FailureMode(mode), ())

    @classmethod
    def of(cls, mode: FailureMode, items: Iterable[Element], directed: bool = False) -> "FailureSpec":
        mode = FailureMode(mode)
        canon = []
        for item in items:
            if mode == FailureMode.EDGE:
                u, v = item
                canon.append((u, v) if directed or u < v else (v, u))
            else:
                canon.append(int(item))
        if len(set(canon)) != len(canon):
            raise ValueError(f"Failure items must be distinct: {canon}")
        if len(canon) > 2:
            raise ValueError(f"At most two failures are supported, got {len(canon)}")
        return cls(mode, tuple(sorted(canon)))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __contains__(self, item) -> bool:
        return item in self.items

    def sort_key(self) -> tuple:
        return (len(self.items), self.items)

    def to_json(self) -> list:
        return [list(i) if isinstance(i, tuple) else i for i in self.items]

    def __str__(self) -> str:
        if not self.items: return "{}"
        return "{" + ", ".join(str(i) for i in self.items) + "}"


class FailureView:
    """Logical G minus F. The underlying graph is never modified."""

    __slots__ = ("base", "failure", "hidden_vertices", "hidden_edges")

    def __init__(self, base: Graph, failure: FailureSpec,
                 hidden_vertices: FrozenSet[int], hidden_edges: FrozenSet[Edge]):
        self.base = base
        self.failure = failure
        self.hidden_vertices = hidden_vertices
        self.hidden_edges = hidden_edges

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def directed(self) -> bool:
        return self.base.directed

    def canonical(self, u: int, v: int) -> Edge:
        return self.base.canonical(u, v)

    def _visible(self, u: int, v: int) -> bool:
        if u in self.hidden_vertices or v in self.hidden_vertices: return False
        return not self.hidden_edges or self.base.canonical(u, v) not in self.hidden_edges

    def adjacency(self, u: int) -> Tuple[int, ...]:
        if u in self.hidden_vertices: return ()
        return tuple(v for v in self.base.adjacency(u) if self._visible(u, v))

    def predecessors(self, u: int) -> Tuple[int, ...]:
        if u in self.hidden_vertices: return ()
        return tuple(v for v in self.base.predecessors(u) if self._visible(v, u))

    def has_edge(self, u: int, v: int) -> bool:
        if u in self.hidden_vertices or v in self.hidden_vertices: return False
        e = self.base.canonical(u, v)
        return self.base.has_edge(u, v) and e not in self.hidden_edges

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(e for e in self.base.edges if self.has_edge(*e))

    def to_networkx(self) -> nx.Graph:
        return nx.restricted_view(self.base.to_networkx(), self.hidden_vertices, self.hidden_edges)


GraphLike = Union[Graph, FailureView]


def remove_failures(g: GraphLike, f: FailureSpec) -> FailureView:
    """View of g minus f. Applying removals to a view composes them as a set union."""
    base = g.base
    for item in f:
        if not base.has_element(item, f.mode):
            raise FailureNotInGraphError(f"Failed {f.mode.value} {item} is not in the graph")
    vertices = set(g.hidden_vertices)
    edges = set(g.hidden_edges)
    if f.mode == FailureMode.VERTEX:
        vertices.update(f.items)
    else:
        edges.update(f.items)
    prior = getattr(g, "failure", None)
    if prior is not None and len(prior) and prior.mode == f.mode:
        f = FailureSpec.of(f.mode, set(prior.items) | set(f.items), base.directed)
    return FailureView(base, f, frozenset(vertices), frozenset(edges))


# --- Edge-list I/O ---

def parse_graph(text: str) -> Graph:
    header = None
    n = m = 0
    directed = False
    seen = set()
    edges: List[Edge] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        last_line = lineno
        fields = line.split()
        if header is None:
            if len(fields) != 3 or fields[2] not in ("directed", "undirected"):
                raise MalformedHeaderError(f"expected '<n> <m> <directed|undirected>', got '{line}'", lineno)
            try:
                n, m = int(fields[0]), int(fields[1])
            except ValueError:
                raise MalformedHeaderError(f"non-integer vertex or edge count in '{line}'", lineno)
            if n < 1 or m < 0:
                raise MalformedHeaderError(f"invalid counts n={n}, m={m}", lineno)
            directed = fields[2] == "directed"
            header = lineno
            continue
        if len(fields) != 2:
            raise GraphParseError(f"expected '<u> <v>', got '{line}'", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphParseError(f"non-integer vertex in '{line}'", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"vertex out of range [0, {n}) in '{line}'", lineno)
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}", lineno)
        e = (u, v) if directed or u < v else (v, u)
        if e in seen:
            raise DuplicateEdgeError(f"duplicate edge {e}", lineno)
        if len(edges) == m:
            raise EdgeCountError(f"more than the declared {m} edges", lineno)
        seen.add(e)
        edges.append(e)
    if header is None:
        raise MalformedHeaderError("missing header line", 1)
    if len(edges) != m:
        raise EdgeCountError(f"header declares {m} edges, found {len(edges)}", last_line)
    return Graph(n, edges, directed)


def serialize_graph(g: Graph) -> str:
    kind = "directed" if g.directed else "undirected"
    lines = [f"{g.n} {g.m} {kind}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines)


def read_graph(path: Path) -> Graph:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Graph file not found: {path}")
    return parse_graph(path.read_text())


def write_graph(path: Path, g: Graph) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_graph(g) + "\n")
    return path


# --- Generators ---

def gen_graph(model: GraphModel, n: int, p: Optional[float] = None,
              seed: int = 0, directed: bool = False) -> Graph:
    model = GraphModel(model)
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if model != GraphModel.GNP and p is not None:
        raise ValueError(f"Edge probability only applies to the gnp model, not '{model.value}'")
    edges: List[Edge] = []
    if model == GraphModel.GNP:
        if p is None:
            raise ValueError("gnp model requires an edge probability p")
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p}")
        rng = SplitMix64(seed)
        for u in range(n):
            for v in range(0 if directed else u + 1, n):
                if u == v: continue
                if rng.random() < p: edges.append((u, v))
    elif model == GraphModel.PATH:
        edges = [(i, i + 1) for i in range(n - 1)]
    elif model == GraphModel.CYCLE:
        if n == 2 and not directed:
            edges = [(0, 1)]
        elif n >= 2:
            edges = [(i, (i + 1) % n) for i in range(n)]
    else:
        edges = [(u, v) for u in range(n) for v in range(n) if u != v and (directed or u < v)]
    g = Graph(n, edges, directed)
    logger.debug(f"Generated {model.value} graph: {g!r} (seed={seed})")
    return g
