"""Compact metric graphs: combinatorial structure plus edge lengths.

Edges are identified with intervals [0, l_e].  The 2E edge endpoints carry a
fixed index order -- (start of e_1, ..., start of e_E, end of e_1, ..., end
of e_E) -- which every boundary-value vector in this package follows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DanglingEndpoint, DisconnectedGraph, NonPositiveLength, NonPositiveScale


class Edge(NamedTuple):
    start: int
    end: int
    length: float


@dataclass(frozen=True)
class MetricGraph:
    """Immutable compact metric graph with 1-based vertex ids.

    Loops and parallel edges are allowed; every length must be positive and
    finite, and the graph must be connected.
    """

    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise DanglingEndpoint("vertex_count must be >= 1")
        if not self.edges:
            raise DisconnectedGraph("a metric graph needs at least one edge")
        for i, e in enumerate(self.edges):
            if not (e.start == int(e.start) and e.end == int(e.end)):
                raise DanglingEndpoint(f"edge {i}: endpoints must be integers")
            if not (1 <= e.start <= self.vertex_count and 1 <= e.end <= self.vertex_count):
                raise DanglingEndpoint(
                    f"edge {i}: endpoint outside 1..{self.vertex_count}")
            if not (isinstance(e.length, (int, float)) and math.isfinite(e.length) and e.length > 0):
                raise NonPositiveLength(f"edge {i}: length must be positive and finite")
        self._check_connected()

    def _check_connected(self):
        seen = {self.edges[0].start}
        frontier = [self.edges[0].start]
        adj: dict[int, list[int]] = {}
        for e in self.edges:
            adj.setdefault(e.start, []).append(e.end)
            adj.setdefault(e.end, []).append(e.start)
        while frontier:
            v = frontier.pop()
            for w in adj.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        if len(seen) != self.vertex_count:
            raise DisconnectedGraph(
                f"only {len(seen)} of {self.vertex_count} vertices are reachable")

    # -- metric quantities ---------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def boundary_dim(self) -> int:
        """Dimension 2E of the boundary-value space."""
        return 2 * len(self.edges)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([e.length for e in self.edges], dtype=float)

    @property
    def total_length(self) -> float:
        return float(sum(e.length for e in self.edges))

    @property
    def min_length(self) -> float:
        return float(min(e.length for e in self.edges))

    # -- endpoint bookkeeping --------------------------------------------------

    def start_index(self, edge: int) -> int:
        """Boundary index of the x=0 endpoint of edge `edge` (0-based edge)."""
        return edge

    def end_index(self, edge: int) -> int:
        """Boundary index of the x=l endpoint of edge `edge` (0-based edge)."""
        return len(self.edges) + edge

    def vertex_ends(self, vertex: int) -> list[int]:
        """Boundary indices of all edge endpoints meeting a vertex.

        A loop at `vertex` contributes both of its endpoints.
        """
        out = []
        for i, e in enumerate(self.edges):
            if e.start == vertex:
                out.append(self.start_index(i))
            if e.end == vertex:
                out.append(self.end_index(i))
        return out

    def degree(self, vertex: int) -> int:
        return len(self.vertex_ends(vertex))

    def scaled(self, eta: float) -> "MetricGraph":
        """Same combinatorics with every length multiplied by eta."""
        if not (isinstance(eta, (int, float)) and math.isfinite(eta) and eta > 0):
            raise NonPositiveScale("scale factor must be positive and finite")
        return MetricGraph(
            self.vertex_count,
            tuple(Edge(e.start, e.end, e.length * eta) for e in self.edges),
        )


def new_graph(vertex_count: int, edges) -> MetricGraph:
    """Build and validate a metric graph from (start, end, length) triples."""
    return MetricGraph(vertex_count, tuple(Edge(int(u), int(v), float(l)) for u, v, l in edges))


def scale(graph: MetricGraph, eta: float) -> MetricGraph:
    return graph.scaled(eta)


def total_length(graph: MetricGraph) -> float:
    return graph.total_length


def interval(length: float = 1.0) -> MetricGraph:
    """Single edge between two vertices."""
    return new_graph(2, [(1, 2, length)])


def loop(length: float = 1.0) -> MetricGraph:
    """Single edge with both endpoints at one vertex."""
    return new_graph(1, [(1, 1, length)])


def star(arm_count: int, arm_length: float = 1.0) -> MetricGraph:
    """Central vertex 1 joined to `arm_count` leaves by equal arms."""
    if arm_count < 1:
        raise DisconnectedGraph("a star needs at least one arm")
    return new_graph(arm_count + 1, [(1, 1 + i + 1, arm_length) for i in range(arm_count)])
