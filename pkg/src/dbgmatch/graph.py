"""Vertex-labeled digraphs and de Bruijn graphs.

Symbols are small non-negative integers.  Implicit labels (the k-mer spelled
by any walk of k vertices ending at a vertex) are stored as ``bytes`` so that
slicing and hashing stay cheap on graphs whose order k runs into the hundreds.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable

from dbgmatch.errors import (
    AlphabetRangeError,
    AmbiguousImplicitLabel,
    CapExceeded,
    InvariantViolation,
    NoIncomingWalk,
    UnknownVertex,
)

DEFAULT_SIZE_CAP = 10**6


class LabeledDigraph:
    """Simple directed graph with one alphabet symbol per vertex.

    Vertex ids are dense integers handed out sequentially and never reused,
    including after a merge.  Parallel edges cannot exist: the edge relation
    is a set.  Self-loops are allowed.
    """

    def __init__(self, sigma: int):
        if sigma < 1:
            raise ValueError("alphabet size must be positive")
        self.sigma = sigma
        self.labels: dict[int, int] = {}
        self.succ: dict[int, set[int]] = {}
        self.pred: dict[int, set[int]] = {}
        self._next_id = 0

    def __repr__(self) -> str:
        return f"LabeledDigraph(sigma={self.sigma}, |V|={len(self.labels)}, |E|={self.num_edges})"

    def __contains__(self, v: object) -> bool:
        return v in self.labels

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return sum(len(s) for s in self.succ.values())

    def vertices(self) -> list[int]:
        return sorted(self.labels)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, out in self.succ.items() for v in out)

    def label(self, v: int) -> int:
        try:
            return self.labels[v]
        except KeyError:
            raise UnknownVertex(v) from None

    def has_edge(self, u: int, v: int) -> bool:
        return u in self.succ and v in self.succ[u]

    def _check_symbol(self, label: int) -> None:
        if not 0 <= label < self.sigma:
            raise AlphabetRangeError(f"symbol {label} outside alphabet of size {self.sigma}")

    def _require(self, *vs: int) -> None:
        for v in vs:
            if v not in self.labels:
                raise UnknownVertex(v)

    def add_vertex(self, label: int, vid: int | None = None) -> int:
        """Add a vertex and return its id.

        ``vid`` lets parsers reproduce ids from a file; it must be unused.
        """
        self._check_symbol(label)
        if vid is None:
            vid = self._next_id
        elif vid in self.labels or vid < 0:
            raise InvariantViolation(f"vertex id {vid} already in use or negative")
        self.labels[vid] = label
        self.succ[vid] = set()
        self.pred[vid] = set()
        self._next_id = max(self._next_id, vid + 1)
        return vid

    def add_edge(self, u: int, v: int) -> None:
        self._require(u, v)
        self.succ[u].add(v)
        self.pred[v].add(u)

    def remove_edge(self, u: int, v: int) -> None:
        self._require(u, v)
        self.succ[u].discard(v)
        self.pred[v].discard(u)

    def relabel(self, v: int, label: int) -> None:
        self._require(v)
        self._check_symbol(label)
        self.labels[v] = label

    def remove_vertex(self, v: int) -> None:
        self._require(v)
        for s in self.succ.pop(v):
            if s != v:
                self.pred[s].discard(v)
        for p in self.pred.pop(v):
            if p != v:
                self.succ[p].discard(v)
        del self.labels[v]

    def merge_vertices(self, u: int, v: int) -> int:
        """Replace ``u`` and ``v`` by a fresh vertex carrying all their edges.

        Edges between u and v become a single self-loop on the new vertex;
        duplicate edges collapse because the edge relation is a set.
        """
        self._require(u, v)
        if u == v:
            raise InvariantViolation("cannot merge a vertex with itself")
        if self.labels[u] != self.labels[v]:
            raise InvariantViolation(
                f"label mismatch merging {u} ({self.labels[u]}) and {v} ({self.labels[v]})"
            )
        ins = self.pred[u] | self.pred[v]
        outs = self.succ[u] | self.succ[v]
        w = self.add_vertex(self.labels[u])
        self.remove_vertex(u)
        self.remove_vertex(v)
        pair = (u, v)
        for p in ins:
            self.add_edge(w if p in pair else p, w)
        for s in outs:
            self.add_edge(w, w if s in pair else s)
        return w

    def copy(self) -> LabeledDigraph:
        g = LabeledDigraph(self.sigma)
        g.labels = dict(self.labels)
        g.succ = {v: set(s) for v, s in self.succ.items()}
        g.pred = {v: set(s) for v, s in self.pred.items()}
        g._next_id = self._next_id
        return g

    def spell(self, walk: Iterable[int]) -> tuple[int, ...]:
        return tuple(self.labels[v] for v in walk)

    def is_walk(self, walk: list[int]) -> bool:
        if not walk or any(v not in self.labels for v in walk):
            return False
        return all(self.has_edge(a, b) for a, b in zip(walk, walk[1:]))


@dataclass
class DeBruijnGraph:
    """A labeled digraph of order ``k`` with a stored implicit label per vertex.

    Treat instances as frozen once built; every query here is read-only.
    """

    base: LabeledDigraph
    k: int
    implicit: dict[int, bytes]

    @property
    def sigma(self) -> int:
        return self.base.sigma

    def __len__(self) -> int:
        return len(self.base)

    def implicit_index(self) -> dict[bytes, int]:
        return {lab: v for v, lab in self.implicit.items()}


@dataclass(frozen=True)
class Violation:
    """One failed check.  ``prop`` names the property that failed."""

    prop: str
    vertices: tuple[int, ...]
    message: str
    witness: dict = field(default_factory=dict, compare=False)


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, prop: str, vertices: Iterable[int], message: str, **witness) -> None:
        self.violations.append(Violation(prop, tuple(vertices), message, witness))

    def of(self, prop: str) -> list[Violation]:
        return [x for x in self.violations if x.prop == prop]

    def properties(self) -> set[str]:
        return {x.prop for x in self.violations}

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"[{x.prop}] {x.message}" for x in self.violations[:20])


# Property names used in validation reports.
UNIQUE = "unique"
NO_MISSING_EDGES = "edges"
WELL_DEFINED = "well_defined"


def _as_digraph(g: LabeledDigraph | DeBruijnGraph) -> LabeledDigraph:
    return g.base if isinstance(g, DeBruijnGraph) else g


def backward_depth(g: LabeledDigraph, cap: int) -> dict[int, int]:
    """Length of the longest walk ending at each vertex, capped at ``cap``."""
    depth = dict.fromkeys(g.labels, 0)
    if cap <= 0:
        return depth
    queue = deque(sorted(g.labels))
    queued = set(queue)
    while queue:
        u = queue.popleft()
        queued.discard(u)
        nd = min(cap, depth[u] + 1)
        for w in g.succ[u]:
            if nd > depth[w]:
                depth[w] = nd
                if w not in queued:
                    queued.add(w)
                    queue.append(w)
    return depth


def backward_walk(g: LabeledDigraph, v: int, steps: int, depth: dict[int, int]) -> list[int]:
    """Deterministic walk of ``steps`` edges ending at ``v``.

    Each step back picks the smallest predecessor that still has enough
    incoming depth to finish.  Requires ``depth[v] >= steps``.
    """
    walk = [v]
    x = v
    for remaining in range(steps, 0, -1):
        x = min(p for p in g.pred[x] if depth[p] >= remaining - 1)
        walk.append(x)
    walk.reverse()
    return walk


def _spell(g: LabeledDigraph, walk: list[int]) -> bytes:
    return bytes(g.labels[x] for x in walk)


def _find_disagreeing_walk(
    g: LabeledDigraph, v: int, k: int, ref: bytes, depth: dict[int, int]
) -> list[int] | None:
    """Breadth-first search backward from ``v`` for a k-vertex walk not spelling ``ref``.

    Layer s holds vertices that reach v in s steps along a route agreeing with
    the last s+1 symbols of ref.  The first predecessor whose label disagrees
    (and that can still be extended to a full walk) yields the witness.
    """
    if g.labels[v] != ref[-1]:
        return backward_walk(g, v, k - 1, depth)
    parent: dict[tuple[int, int], int] = {}
    layer = [v]
    for s in range(k - 1):
        need = k - 2 - s
        expected = ref[k - 2 - s]
        nxt: list[int] = []
        seen: set[int] = set()
        for x in layer:
            for p in sorted(g.pred[x]):
                if depth[p] < need:
                    continue
                if g.labels[p] != expected:
                    tail = [x]
                    y = x
                    for back in range(s, 0, -1):
                        y = parent[(back, y)]
                        tail.append(y)
                    return backward_walk(g, p, need, depth) + tail
                if p not in seen:
                    seen.add(p)
                    parent[(s + 1, p)] = x
                    nxt.append(p)
        layer = nxt
    return None


def _ambiguity_at(g: LabeledDigraph, v: int, k: int, depth: dict[int, int]):
    """Return (walk, other_walk) spelling different k-mers into v, or None."""
    w1 = backward_walk(g, v, k - 1, depth)
    w2 = _find_disagreeing_walk(g, v, k, _spell(g, w1), depth)
    return None if w2 is None else (w1, w2)


def compute_implicit_labels(g: LabeledDigraph, k: int) -> DeBruijnGraph:
    """Derive every vertex's implicit label from scratch.

    Raises AmbiguousImplicitLabel when two walks of k vertices ending at the
    same vertex spell different strings, and NoIncomingWalk when a vertex has
    no such walk at all.  Ambiguity takes precedence.
    """
    if k < 1:
        raise ValueError("order k must be at least 1")
    depth = backward_depth(g, k - 1)
    order = g.vertices()
    missing = [v for v in order if depth[v] < k - 1]
    if missing:
        for v in order:
            if depth[v] >= k - 1:
                amb = _ambiguity_at(g, v, k, depth)
                if amb:
                    raise AmbiguousImplicitLabel(v, amb)
        raise NoIncomingWalk(missing[0], k)

    # Every vertex has a full-length incoming walk, so any walk extends
    # backwards and edge-local overlap consistency is equivalent to
    # well-definedness.  Seed one label per weak component and propagate.
    labels: dict[int, bytes] = {}
    for seed in order:
        if seed in labels:
            continue
        labels[seed] = _spell(g, backward_walk(g, seed, k - 1, depth))
        queue = deque([seed])
        while queue:
            x = queue.popleft()
            tail = labels[x][1:]
            for w in g.succ[x]:
                if w not in labels:
                    labels[w] = tail + bytes((g.labels[w],))
                    queue.append(w)
    for u, v in g.edges():
        if labels[u][1:] != labels[v][:-1]:
            for x in (v, u):
                amb = _ambiguity_at(g, x, k, depth)
                if amb:
                    raise AmbiguousImplicitLabel(x, amb)
            raise AssertionError("overlap mismatch without an ambiguous vertex")  # pragma: no cover
    return DeBruijnGraph(g, k, labels)


def validate_de_bruijn(dbg: DeBruijnGraph) -> ValidationReport:
    """Check uniqueness, edge completeness and well-definedness of implicit labels."""
    g, k, implicit = dbg.base, dbg.k, dbg.implicit
    report = ValidationReport()
    order = g.vertices()

    # well-definedness: stored labels present and shaped right
    shaped = True
    for v in order:
        lab = implicit.get(v)
        if lab is None or len(lab) != k:
            report.add(WELL_DEFINED, [v], f"vertex {v} lacks an implicit label of length {k}")
            shaped = False
        elif lab[-1] != g.labels[v]:
            report.add(
                WELL_DEFINED, [v], f"implicit label of {v} does not end with its label {g.labels[v]}"
            )
    for v in implicit:
        if v not in g.labels:
            report.add(WELL_DEFINED, [v], f"implicit label stored for unknown vertex {v}")
    if not shaped:
        return report

    # (i) uniqueness
    owner: dict[bytes, int] = {}
    for v in order:
        lab = implicit[v]
        if lab in owner:
            report.add(
                UNIQUE, [owner[lab], v], f"vertices {owner[lab]} and {v} share an implicit label",
                label=tuple(lab),
            )
        else:
            owner[lab] = v

    # (ii) no missing edges: x = beta S, y = S alpha  =>  (x, y) in E
    by_prefix: dict[bytes, list[int]] = defaultdict(list)
    for v in order:
        by_prefix[implicit[v][:-1]].append(v)
    for x in order:
        for y in by_prefix.get(implicit[x][1:], ()):
            if y not in g.succ[x]:
                report.add(
                    NO_MISSING_EDGES, [x, y], f"missing edge ({x}, {y})",
                    tail_label=tuple(implicit[x]), head_label=tuple(implicit[y]),
                )

    # (iii) every walk of k vertices ending at x spells implicit[x]
    depth = backward_depth(g, k - 1)
    starved = [v for v in order if depth[v] < k - 1]
    for v in starved:
        report.add(WELL_DEFINED, [v], f"vertex {v} has no incoming walk of length {k - 1}")
    if starved:
        suspects = [v for v in order if depth[v] >= k - 1]
    else:
        flagged: set[int] = set()
        for u, v in g.edges():
            if implicit[u][1:] != implicit[v][:-1]:
                flagged.update((u, v))
        suspects = sorted(flagged)
    for v in suspects:
        amb = _ambiguity_at(g, v, k, depth)
        if amb:
            w1, w2 = amb
            report.add(
                WELL_DEFINED, [v], f"walks into {v} spell different strings",
                walks=(w1, w2), spelled=(tuple(_spell(g, w1)), tuple(_spell(g, w2))),
            )
            continue
        w1 = backward_walk(g, v, k - 1, depth)
        spelled = _spell(g, w1)
        if spelled != implicit[v]:
            report.add(
                WELL_DEFINED, [v], f"walks into {v} spell {list(spelled)}, not its stored label",
                walks=(w1,), spelled=(tuple(spelled),), stored=tuple(implicit[v]),
            )
    return report


def full_de_bruijn(sigma: int, k: int, cap: int = DEFAULT_SIZE_CAP) -> DeBruijnGraph:
    """Order-k full de Bruijn graph; vertex ids follow lexicographic k-mer order."""
    if k < 1:
        raise ValueError("order k must be at least 1")
    if sigma**k > cap:
        raise CapExceeded(f"sigma^k = {sigma**k} vertices exceeds cap {cap}")
    g = LabeledDigraph(sigma)
    implicit: dict[int, bytes] = {}
    index: dict[bytes, int] = {}
    for kmer in itertools.product(range(sigma), repeat=k):
        lab = bytes(kmer)
        v = g.add_vertex(kmer[-1])
        implicit[v] = lab
        index[lab] = v
    for lab, v in index.items():
        for a in range(sigma):
            g.add_edge(v, index[lab[1:] + bytes((a,))])
    return DeBruijnGraph(g, k, implicit)


class DeBruijnBuilder:
    """Incremental construction with an implicit-label index.

    Constructions append paths whose implicit labels they know in advance;
    after each path, any new vertex whose label is already indexed is merged
    into the existing owner, so labels stay unique throughout.
    """

    def __init__(self, sigma: int, k: int):
        self.graph = LabeledDigraph(sigma)
        self.k = k
        self.implicit: dict[int, bytes] = {}
        self.index: dict[bytes, int] = {}

    def __contains__(self, label: bytes) -> bool:
        return label in self.index

    def add_path(self, labels: list[bytes], attach_from: int | None = None) -> list[int]:
        """Append a path of vertices with the given implicit labels and merge.

        Returns the final vertex id for every path position.
        """
        g = self.graph
        ids = []
        for lab in labels:
            if len(lab) != self.k:
                raise InvariantViolation(f"implicit label length {len(lab)} != k={self.k}")
            v = g.add_vertex(lab[-1])
            if ids:
                g.add_edge(ids[-1], v)
            elif attach_from is not None:
                g.add_edge(attach_from, v)
            ids.append(v)
        for i, lab in enumerate(labels):
            v = ids[i]
            existing = self.index.get(lab)
            if existing is not None and existing != v:
                w = g.merge_vertices(existing, v)
                del self.implicit[existing]
                # keep later path positions pointing at live ids
                ids = [w if x in (existing, v) else x for x in ids]
                if attach_from in (existing, v):
                    attach_from = w
                v = w
            self.index[lab] = v
            self.implicit[v] = lab
        return ids

    def add_edge(self, u: int, v: int) -> None:
        self.graph.add_edge(u, v)

    def vertex(self, label: bytes) -> int:
        return self.index[label]

    def finish(self) -> DeBruijnGraph:
        return DeBruijnGraph(self.graph, self.k, dict(self.implicit))

