"""Problem instances shared by the reductions, the oracles and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from dbgmatch.errors import InvariantViolation
from dbgmatch.graph import DeBruijnGraph, LabeledDigraph

DEFAULT_EDGE_FACTOR = 4


@dataclass
class HamInstance:
    """A directed graph for the Hamiltonian cycle problem; labels are ignored."""

    graph: LabeledDigraph

    @property
    def n(self) -> int:
        return len(self.graph)

    @classmethod
    def from_edges(cls, n: int, edges) -> HamInstance:
        g = LabeledDigraph(1)
        for _ in range(n):
            g.add_vertex(0)
        for u, v in edges:
            g.add_edge(u, v)
        return cls(g)

    def problems(self, edge_factor: int = DEFAULT_EDGE_FACTOR) -> list[str]:
        g = self.graph
        out = []
        for v in g.vertices():
            if v in g.succ[v]:
                out.append(f"self-loop at {v}")
            if not g.succ[v] - {v}:
                out.append(f"vertex {v} has out-degree 0")
            if not g.pred[v] - {v}:
                out.append(f"vertex {v} has in-degree 0")
        if g.num_edges > edge_factor * len(g):
            out.append(f"|E| = {g.num_edges} exceeds {edge_factor}|V|")
        return out

    def check(self, edge_factor: int = DEFAULT_EDGE_FACTOR) -> None:
        problems = self.problems(edge_factor)
        if problems:
            raise InvariantViolation("; ".join(problems))

    def has_two_cycle(self) -> bool:
        g = self.graph
        return any(u in g.succ[v] for u, v in g.edges() if u != v)


@dataclass
class OvInstance:
    """Orthogonal Vectors: two lists of N binary vectors of dimension d."""

    A: list[tuple[int, ...]]
    B: list[tuple[int, ...]]

    @property
    def N(self) -> int:
        return len(self.A)

    @property
    def d(self) -> int:
        return len(self.A[0]) if self.A else 0

    def shape_problems(self) -> list[str]:
        out = []
        if len(self.A) != len(self.B):
            out.append(f"|A| = {len(self.A)} but |B| = {len(self.B)}")
        if not self.A:
            out.append("empty vector lists")
        d = self.d
        for name, vs in (("A", self.A), ("B", self.B)):
            for i, vec in enumerate(vs):
                if len(vec) != d:
                    out.append(f"{name}[{i}] has dimension {len(vec)}, expected {d}")
                if any(b not in (0, 1) for b in vec):
                    out.append(f"{name}[{i}] is not binary")
        return out


@dataclass
class InstanceBundle:
    """A generated matching instance: graph, pattern, budget and provenance."""

    kind: str
    graph: DeBruijnGraph
    pattern: list[int]
    delta: int
    params: Any
    marked: dict[int, int] = field(default_factory=dict)
    sections: dict[int, str] = field(default_factory=dict)
    meta: dict[str, Any] = field(default_factory=dict)
