"""Directed Hamiltonian cycle -> vertex-label substitution matching on a de Bruijn graph.

Alphabet (integers): 0 = '$', 1 = '#', 2 = bit 0, 3 = bit 1.

Every edge (u, v) of the input becomes a path that starts at the marked
vertex of u and spells  #^W enc(v) $^W enc(v), ending at the marked vertex
of v.  Vertices of different paths that share an implicit label are merged
as the paths are added, so edges with a common endpoint end up sharing
vertices near that endpoint.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterator

from dbgmatch.errors import InvariantViolation
from dbgmatch.graph import DeBruijnBuilder, ValidationReport
from dbgmatch.instances import DEFAULT_EDGE_FACTOR, HamInstance, InstanceBundle

DOLLAR, HASH, ZERO, ONE = 0, 1, 2, 3
SIGMA = 4


@dataclass(frozen=True)
class NpcParams:
    n: int
    ell: int
    W: int
    k: int
    delta: int

    @classmethod
    def for_n(cls, n: int) -> NpcParams:
        if n < 2:
            raise InvariantViolation("the reduction needs at least two vertices")
        ell = (n - 1).bit_length()  # ceil(log2 n)
        W = 2 * ell * (2 * ell + 1) + ell
        return cls(n=n, ell=ell, W=W, k=3 * W, delta=2 * ell * (n - 1))

    @property
    def pattern_length(self) -> int:
        return 4 * self.W * (self.n + 1)

    def as_dict(self) -> dict:
        return {"n": self.n, "ell": self.ell, "W": self.W, "k": self.k, "delta": self.delta}


def enc(i: int, ell: int) -> bytes:
    """(0^{2l} 1)^{2l} followed by the l-bit binary of i, most significant bit first."""
    if not 0 <= i < 2**ell:
        raise ValueError(f"{i} does not fit in {ell} bits")
    block = bytes([ZERO] * (2 * ell) + [ONE])
    bits = bytes(ONE if (i >> (ell - 1 - j)) & 1 else ZERO for j in range(ell))
    return block * (2 * ell) + bits


def eliminate_two_cycles(inst: HamInstance, edge_factor: int = DEFAULT_EDGE_FACTOR) -> HamInstance:
    """Split every vertex v into v_in -> v_mid -> v_out.

    Vertex v becomes ids 3v', 3v'+1, 3v'+2 where v' is v's rank; an input edge
    (u, v) becomes (u_out, v_in).  No 2-cycles survive, and Hamiltonian cycles
    correspond one to one because v_mid forces the in/mid/out order.
    """
    inst.check(edge_factor)
    g = inst.graph
    rank = {v: i for i, v in enumerate(g.vertices())}
    edges = [(3 * i, 3 * i + 1) for i in range(len(rank))]
    edges += [(3 * i + 1, 3 * i + 2) for i in range(len(rank))]
    edges += [(3 * rank[u] + 2, 3 * rank[v]) for u, v in g.edges()]
    return HamInstance.from_edges(3 * len(rank), edges)


class NpcBuilder(DeBruijnBuilder):
    def __init__(self, params: NpcParams):
        super().__init__(SIGMA, params.k)
        self.params = params
        W = params.W
        self._enc = [enc(i, params.ell) for i in range(params.n)]
        self._dollars = bytes([DOLLAR] * W)
        self._hashes = bytes([HASH] * W)

    def marked_label(self, i: int) -> bytes:
        return self._enc[i] + self._dollars + self._enc[i]


def transform_edge(builder: NpcBuilder, u: int, v: int) -> list[bytes]:
    """Add the path for edge (u, v), given as vertex labels in [0, n).

    Returns the path's implicit labels, marked vertex of u first.  Labels are
    a stable handle: vertex ids change when later paths merge into this one,
    but ``builder.vertex(label)`` always resolves to the live id.
    """
    W = builder.params.W
    k = builder.k
    text = builder.marked_label(u) + builder._hashes + builder._enc[v] + builder._dollars + builder._enc[v]
    labels = [text[j : j + k] for j in range(4 * W + 1)]
    builder.add_path(labels)
    return labels


def npc_pattern(params: NpcParams) -> Iterator[int]:
    """Blocks #^W enc(i) $^W enc(i) for i = 0..n-1, then the block for 0 again."""
    W, ell = params.W, params.ell
    for i in list(range(params.n)) + [0]:
        e = enc(i, ell)
        yield from [HASH] * W
        yield from e
        yield from [DOLLAR] * W
        yield from e


def build_npc_instance(
    inst: HamInstance, skip_gadget: bool = False, edge_factor: int = DEFAULT_EDGE_FACTOR
) -> InstanceBundle:
    """Reduce a Hamiltonian cycle instance to (de Bruijn graph, pattern, budget).

    With ``skip_gadget`` the input must already be free of 2-cycles and is
    used as is; otherwise every vertex is split first.
    """
    inst.check(edge_factor)
    if skip_gadget:
        if inst.has_two_cycle():
            raise InvariantViolation("input has a 2-cycle; drop skip_gadget")
        pre = inst
    else:
        pre = eliminate_two_cycles(inst, edge_factor)
    g = pre.graph
    order = g.vertices()
    lab = {v: i for i, v in enumerate(order)}
    params = NpcParams.for_n(len(order))
    b = NpcBuilder(params)
    by_head = defaultdict(list)
    for u, v in g.edges():
        by_head[lab[v]].append(lab[u])
    for i in range(params.n):
        for j in sorted(by_head[i]):
            transform_edge(b, j, i)
    dbg = b.finish()
    marked = {v: b.vertex(b.marked_label(lab[v])) for v in order}
    return InstanceBundle(
        kind="npc",
        graph=dbg,
        pattern=list(npc_pattern(params)),
        delta=params.delta,
        params=params,
        marked=marked,
        meta={"edges": g.edges(), "skip_gadget": skip_gadget, "labels": lab},
    )


# -- structural checks ----------------------------------------------------

WALK_LENGTH = "walk_length"
ADJACENCY = "adjacency"
RUNS = "runs"
BRANCHLESS = "branchless"


def _topo_order(nodes: set[int], succ) -> list[int] | None:
    indeg = dict.fromkeys(nodes, 0)
    for x in nodes:
        for y in succ[x]:
            if y in nodes:
                indeg[y] += 1
    queue = deque(sorted(x for x, d in indeg.items() if d == 0))
    out = []
    while queue:
        x = queue.popleft()
        out.append(x)
        for y in succ[x]:
            if y in nodes:
                indeg[y] -= 1
                if indeg[y] == 0:
                    queue.append(y)
    return out if len(out) == len(nodes) else None


def check_npc_structure(bundle: InstanceBundle) -> ValidationReport:
    """Check walk lengths between marked vertices, marked adjacency, and $/# run lengths.

    Also checks that each marked vertex sits on its own branchless stretch
    spelling enc(u) #^W followed by the fixed enc prefix.
    """
    report = ValidationReport()
    g = bundle.graph.base
    params: NpcParams = bundle.params
    W, ell = params.W, params.ell
    marked = bundle.marked
    inv = {m: v for v, m in marked.items()}
    if len(inv) != len(marked):
        report.add(BRANCHLESS, [], "marked map is not injective")
        return report
    marked_set = set(inv)

    # walks through unmarked interiors: reach[x] = {marked target: {lengths}}
    inner = set(g.labels) - marked_set
    order = _topo_order(inner, g.succ)
    if order is None:
        report.add(WALK_LENGTH, [], "unmarked vertices contain a cycle (unbounded walk between marked vertices)")
    else:
        reach: dict[int, dict[int, set[int]]] = {}

        def collect(x: int) -> dict[int, set[int]]:
            acc: dict[int, set[int]] = defaultdict(set)
            for y in g.succ[x]:
                if y in marked_set:
                    acc[y].add(1)
                else:
                    for t, ls in reach[y].items():
                        acc[t].update(length + 1 for length in ls)
            return acc

        for x in reversed(order):
            reach[x] = collect(x)
        found = set()
        for m in sorted(marked_set):
            for t, ls in sorted(collect(m).items()):
                found.add((inv[m], inv[t]))
                if ls != {4 * W}:
                    report.add(
                        WALK_LENGTH, [m, t],
                        f"walks from {m} to {t} have lengths {sorted(ls)}, expected {4 * W}",
                    )
        expected = set(map(tuple, bundle.meta["edges"]))
        for u, v in sorted(found - expected):
            report.add(ADJACENCY, [marked[u], marked[v]], f"marked path {u}->{v} without an edge")
        for u, v in sorted(expected - found):
            report.add(ADJACENCY, [marked[u], marked[v]], f"edge ({u}, {v}) has no marked path")

    # every maximal run of '$' (or '#') vertices has exactly W vertices
    for sym, name in ((DOLLAR, "$"), (HASH, "#")):
        nodes = {x for x, a in g.labels.items() if a == sym}
        run_order = _topo_order(nodes, g.succ)
        if run_order is None:
            report.add(RUNS, [], f"'{name}' vertices contain a cycle")
            continue
        counts: dict[int, set[int]] = {}
        for x in run_order:
            ins = [p for p in g.pred[x] if p in nodes]
            counts[x] = {c + 1 for p in ins for c in counts[p]} if ins else {1}
            if not any(y in nodes for y in g.succ[x]) and counts[x] != {W}:
                report.add(
                    RUNS, [x], f"maximal '{name}' runs ending at {x} have {sorted(counts[x])} vertices, expected {W}"
                )

    # each marked vertex lies on a unique branchless stretch
    prefix_len = W - ell
    for v, m in sorted(marked.items()):
        i = bundle.meta["labels"][v]
        want = enc(i, ell) + bytes([HASH] * W) + enc(0, ell)[:prefix_len]
        path = [m]
        ok = True
        for _ in range(W - 1):
            ps = g.pred[path[0]]
            if len(ps) != 1:
                ok = False
                break
            path.insert(0, next(iter(ps)))
        for _ in range(W + prefix_len):
            if not ok:
                break
            ss = g.succ[path[-1]]
            if len(ss) != 1:
                ok = False
                break
            path.append(next(iter(ss)))
        if ok:
            ok = (
                bytes(g.labels[x] for x in path) == want
                and all(len(g.pred[x]) == 1 for x in path)
                and all(len(g.succ[x]) == 1 for x in path[:-1])
                and not (set(path) - {m}) & marked_set
            )
        if not ok:
            report.add(BRANCHLESS, [m], f"marked vertex {m} is not on a branchless enc/# stretch")
    return report
