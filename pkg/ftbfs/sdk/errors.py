"""Exception hierarchy for the ftbfs SDK.

Everything derives from ValueError so callers (and the CLI) can treat any
bad-input condition uniformly.
"""
from typing import Optional


class GraphParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class MalformedHeaderError(GraphParseError):
    pass


class VertexRangeError(GraphParseError):
    pass


class DuplicateEdgeError(GraphParseError):
    pass


class SelfLoopError(GraphParseError):
    pass


class EdgeCountError(GraphParseError):
    pass


class FailureNotInGraphError(ValueError):
    pass


class InconsistentChainError(ValueError):
    pass


class InstanceTooLargeError(ValueError):
    pass


class SubgraphContainmentError(ValueError):
    def __init__(self, edge):
        self.edge = edge
        super().__init__(f"Subgraph edge {edge} is not an edge of the graph")


class OverlappingPartitionError(ValueError):
    pass


class NonConvergingFamilyError(ValueError):
    def __init__(self, first: int, second: int, vertex: int):
        self.pair = (first, second)
        self.vertex = vertex
        super().__init__(f"Paths {first} and {second} meet at {vertex} and diverge afterwards")
