"""Exact and approximate matching of a pattern to walks in a labeled digraph.

Patterns are sequences of integer symbols.  They are 0-indexed in Python, but
edit positions reported for pattern substitutions are 1-indexed, matching
the usual P[1..m] convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from dbgmatch.errors import AlphabetRangeError
from dbgmatch.graph import DeBruijnGraph, LabeledDigraph, _as_digraph, backward_depth

INF = math.inf
DEFAULT_EXPANSION_CAP = 10**8


@dataclass
class MatchResult:
    """Outcome of a matcher.

    ``cost`` is the minimal number of substitutions, ``INF`` when no walk of
    m vertices can be matched at any cost, or ``None`` when walks exist but
    none fits the budget (the exact minimum was not computed).  ``indeterminate`` marks a search
    that hit its expansion cap; then nothing else in the result is reliable.
    For pattern substitutions ``edits`` lists 1-based pattern positions; for
    graph substitutions it lists ``(vertex, new_symbol)`` pairs.
    """

    feasible: bool
    cost: float | int | None
    walk: list[int] | None = None
    edits: list = field(default_factory=list)
    indeterminate: bool = False
    expansions: int = 0

    def to_dict(self) -> dict:
        cost = self.cost
        if cost == INF:
            cost = "inf"
        return {
            "feasible": self.feasible,
            "cost": cost,
            "walk": self.walk,
            "edits": [list(e) if isinstance(e, tuple) else e for e in self.edits],
            "indeterminate": self.indeterminate,
        }


def _check_pattern(g: LabeledDigraph, p: Sequence[int]) -> None:
    if len(p) == 0:
        raise ValueError("empty pattern")
    for s in p:
        if not 0 <= s < g.sigma:
            raise AlphabetRangeError(f"pattern symbol {s} outside alphabet of size {g.sigma}")


def match_exact(g: LabeledDigraph | DeBruijnGraph, p: Sequence[int]) -> MatchResult:
    """Find a walk spelling ``p`` exactly.

    Forward sweep over the set of vertices at which some walk spells the
    current prefix; the witness follows the smallest-id predecessor.
    """
    g = _as_digraph(g)
    _check_pattern(g, p)
    frontier = sorted(v for v, a in g.labels.items() if a == p[0])
    if not frontier:
        return MatchResult(False, None if g.labels else INF)
    back: list[dict[int, int]] = []
    for sym in p[1:]:
        step: dict[int, int] = {}
        for u in frontier:
            for v in g.succ[u]:
                if g.labels[v] == sym and v not in step:
                    step[v] = u
        if not step:
            return MatchResult(False, None if has_walk(g, len(p)) else INF)
        back.append(step)
        frontier = sorted(step)
    walk = [frontier[0]]
    for step in reversed(back):
        walk.append(step[walk[-1]])
    walk.reverse()
    return MatchResult(True, 0, walk, [])


class _DpGraph:
    """Dense arrays for the pattern-substitution DP.

    Vertices are indexed in increasing id order, and edges sorted by
    (head, tail), so "first minimum in a group" means smallest predecessor id.
    """

    def __init__(self, g: LabeledDigraph):
        self.ids = g.vertices()
        pos = {v: i for i, v in enumerate(self.ids)}
        n = len(self.ids)
        self.n = n
        self.labels = np.array([g.labels[v] for v in self.ids], dtype=np.int64)
        pairs = sorted((pos[v], pos[u]) for u, v in g.edges())
        heads = np.array([h for h, _ in pairs], dtype=np.int64)
        tails = np.array([t for _, t in pairs], dtype=np.int64)
        self.tails = tails
        if len(pairs):
            starts = np.flatnonzero(np.r_[True, heads[1:] != heads[:-1]])
        else:
            starts = np.zeros(0, dtype=np.int64)
        self.starts = starts
        self.group_heads = heads[starts] if len(pairs) else starts


def _pattern_dp(
    g: LabeledDigraph,
    p: Sequence[int],
    forbidden: frozenset[int] = frozenset(),
    witness: bool = True,
) -> MatchResult:
    """min over walks v_1..v_m of sum_i [p_i != L(v_i)].

    ``forbidden`` holds 1-based positions where a mismatch costs INF.
    Costs are floats so INF saturates; the predecessor is packed into the
    same number as cost * n + tail_index, which keeps ties on the smallest
    tail while a single reduceat finds the group minimum.
    """
    _check_pattern(g, p)
    dg = _DpGraph(g)
    n = dg.n
    if n == 0:
        return MatchResult(False, INF)

    def row_cost(i: int) -> np.ndarray:
        mis = (dg.labels != p[i]).astype(np.float64)
        if (i + 1) in forbidden:
            mis[mis > 0] = INF
        return mis

    cur = row_cost(0)
    backs: list[np.ndarray] = []
    scale = float(n)
    for i in range(1, len(p)):
        best = np.full(n, INF)
        pred = np.full(n, -1, dtype=np.int64)
        if len(dg.tails):
            packed = cur[dg.tails] * scale + dg.tails
            gmin = np.minimum.reduceat(packed, dg.starts)
            finite = np.isfinite(gmin)
            heads = dg.group_heads[finite]
            best[heads] = np.floor(gmin[finite] / scale)
            pred[heads] = np.rint(gmin[finite] - best[heads] * scale).astype(np.int64)
        cur = best + row_cost(i)
        if witness:
            backs.append(pred)

    total = float(cur.min())
    if total == INF:
        return MatchResult(False, INF)
    cost = int(total)
    if not witness:
        return MatchResult(True, cost)
    end = int(np.flatnonzero(cur == total)[0])
    path = [end]
    for pred in reversed(backs):
        path.append(int(pred[path[-1]]))
    path.reverse()
    walk = [dg.ids[i] for i in path]
    edits = [i + 1 for i, v in enumerate(walk) if g.labels[v] != p[i]]
    return MatchResult(True, cost, walk, edits)


def min_pattern_substitutions(
    g: LabeledDigraph | DeBruijnGraph,
    p: Sequence[int],
    delta: int | None = None,
    witness: bool = True,
) -> MatchResult:
    """Fewest pattern substitutions so that ``p`` spells some walk; O(|E| m).

    ``feasible`` means a walk exists and, when ``delta`` is given, the
    minimum is at most ``delta``.  The cost is always the exact minimum.
    """
    res = _pattern_dp(_as_digraph(g), p, witness=witness)
    if delta is not None and res.cost is not None and res.cost > delta:
        res.feasible = False
    return res


def constrained_pattern_dp(
    g: LabeledDigraph | DeBruijnGraph,
    p: Sequence[int],
    forbidden: set[int] | frozenset[int],
    witness: bool = True,
) -> MatchResult:
    """Same DP, but pattern positions in ``forbidden`` (1-based) must match exactly."""
    m = len(p)
    bad = [i for i in forbidden if not 1 <= i <= m]
    if bad:
        raise ValueError(f"forbidden positions outside [1, {m}]: {sorted(bad)}")
    return _pattern_dp(_as_digraph(g), p, frozenset(forbidden), witness)


def has_walk(g: LabeledDigraph, vertices: int) -> bool:
    """True when some walk of ``vertices`` vertices exists."""
    if not g.labels:
        return False
    depth = backward_depth(g, vertices - 1)
    return max(depth.values()) >= vertices - 1


def min_graph_substitutions(
    g: LabeledDigraph | DeBruijnGraph,
    p: Sequence[int],
    delta: int | None = None,
    cap: int = DEFAULT_EXPANSION_CAP,
) -> MatchResult:
    """Fewest vertex relabelings so that some walk spells ``p``.

    Relabelings persist: a vertex visited several times must carry the same
    symbol at each visit, and is paid for once.  Exhaustive depth-first
    branch and bound over walks with a partial vertex -> symbol assignment;
    exponential in the worst case.  ``delta=None`` searches for the exact
    minimum.  Exceeding ``cap`` node expansions returns an indeterminate
    result rather than a guess.
    """
    g = _as_digraph(g)
    _check_pattern(g, p)
    m = len(p)
    if delta is not None and delta < 0:
        raise ValueError("budget must be non-negative")
    if not has_walk(g, m):
        return MatchResult(False, INF)
    bound = m if delta is None else min(delta, m)

    labels = g.labels
    succ = {v: sorted(s) for v, s in g.succ.items()}
    assign: dict[int, int] = {}
    walk: list[int] = []
    best_cost: int | None = None
    best_walk: list[int] | None = None
    best_assign: dict[int, int] = {}
    expansions = 0
    cost = 0

    # Explicit stack of (position, candidate iterator); the walk and the
    # assignment are mutated in place and undone on backtrack.
    stack: list[tuple[int, object]] = [(0, iter(sorted(labels)))]
    fresh: list[bool] = []
    while stack:
        i, it = stack[-1]
        v = next(it, None)
        if v is None:
            stack.pop()
            if walk:
                u = walk.pop()
                if fresh.pop():
                    if assign.pop(u) != labels[u]:
                        cost -= 1
            continue
        expansions += 1
        if expansions > cap:
            return MatchResult(False, None, indeterminate=True, expansions=expansions)
        sym = p[i]
        have = assign.get(v)
        if have is not None:
            if have != sym or cost > bound:
                continue
            new = False
        else:
            paid = sym != labels[v]
            if cost + paid > bound:
                continue
            assign[v] = sym
            cost += paid
            new = True
        if i == m - 1:
            best_cost, best_walk, best_assign = cost, walk + [v], dict(assign)
            if new and assign.pop(v) != labels[v]:
                cost -= 1
            if best_cost == 0:
                break
            bound = best_cost - 1
            continue
        walk.append(v)
        fresh.append(new)
        stack.append((i + 1, iter(succ[v])))

    if best_walk is None:
        # a consistent walk never costs more than m relabelings, so an
        # unbounded search that found nothing proves there is none
        exhaustive = delta is None or delta >= m
        return MatchResult(False, INF if exhaustive else None, expansions=expansions)
    on_walk = set(best_walk)
    edits = sorted((v, s) for v, s in best_assign.items() if v in on_walk and s != labels[v])
    return MatchResult(True, best_cost, best_walk, edits, expansions=expansions)


def replay(g: LabeledDigraph | DeBruijnGraph, p: Sequence[int], res: MatchResult) -> bool:
    """Check a feasible result against the pattern by applying its edits.

    Pattern-position edits substitute the walk's symbol into the pattern;
    (vertex, symbol) edits relabel the graph.  Either way the walk must then
    spell the pattern exactly, and the number of edits must equal the cost.
    """
    g = _as_digraph(g)
    if not res.feasible or res.walk is None:
        return False
    walk = res.walk
    if len(walk) != len(p) or not g.is_walk(walk):
        return False
    if len(res.edits) != res.cost:
        return False
    if res.edits and isinstance(res.edits[0], tuple):
        relabel = dict(res.edits)
        if any(relabel[v] == g.labels[v] for v in relabel):
            return False
        spelled = [relabel.get(v, g.labels[v]) for v in walk]
        return spelled == list(p)
    q = list(p)
    for i in res.edits:
        q[i - 1] = g.labels[walk[i - 1]]
    return q == [g.labels[v] for v in walk]
