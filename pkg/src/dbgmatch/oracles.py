"""Brute-force deciders used as ground truth.

Nothing here imports the matchers or the reductions; keep it that way so the
equivalence checks stay independent.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

from dbgmatch.errors import CapExceeded
from dbgmatch.graph import DeBruijnGraph, LabeledDigraph
from dbgmatch.instances import HamInstance, OvInstance

HAM_CAP = 12
WALK_CAP = 10**6
OV_CAP = 10**7


def hamiltonian_oracle(inst: HamInstance, cap: int = HAM_CAP) -> tuple[bool, list[int] | None]:
    """Depth-first search over vertex orders with adjacency pruning.

    The witness lists each vertex once, starting from the smallest id; the
    closing edge back to the start is implied.
    """
    g = inst.graph
    n = len(g)
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds Hamiltonian oracle cap {cap}")
    if n == 0:
        return False, None
    order = g.vertices()
    start = order[0]
    path = [start]
    used = {start}

    def extend() -> bool:
        if len(path) == n:
            return start in g.succ[path[-1]]
        for w in sorted(g.succ[path[-1]]):
            if w not in used:
                used.add(w)
                path.append(w)
                if extend():
                    return True
                path.pop()
                used.discard(w)
        return False

    if extend():
        return True, list(path)
    return False, None


def ov_oracle(inst: OvInstance, cap: int = OV_CAP) -> tuple[bool, tuple[int, int] | None]:
    """Scan all pairs; the witness is (index in A, index in B)."""
    if inst.N * inst.N * max(inst.d, 1) > cap:
        raise CapExceeded("OV instance too large for the brute-force oracle")
    for i, a in enumerate(inst.A):
        for j, b in enumerate(inst.B):
            if all(x * y == 0 for x, y in zip(a, b)):
                return True, (i, j)
    return False, None


def walks(g: LabeledDigraph, m: int, cap: int = WALK_CAP):
    """Every walk of m vertices, in lexicographic id order."""
    count = 0
    stack = [[v] for v in sorted(g.labels, reverse=True)]
    while stack:
        w = stack.pop()
        if len(w) == m:
            count += 1
            if count > cap:
                raise CapExceeded(f"more than {cap} walks of {m} vertices")
            yield w
            continue
        for x in sorted(g.succ[w[-1]], reverse=True):
            stack.append(w + [x])


def walk_enumeration_oracle(
    g: LabeledDigraph | DeBruijnGraph, p: Sequence[int], cap: int = WALK_CAP
) -> tuple[float, float]:
    """(min pattern substitutions, min graph substitutions) over all walks of |p| vertices.

    A walk admits graph substitutions only when every visit to the same
    vertex asks for the same symbol; its cost counts distinct relabeled
    vertices.  Both values are ``math.inf`` when no walk exists.
    """
    if isinstance(g, DeBruijnGraph):
        g = g.base
    best_p = math.inf
    best_g = math.inf
    for w in walks(g, len(p), cap):
        best_p = min(best_p, sum(g.labels[v] != s for v, s in zip(w, p)))
        need: dict[int, int] = {}
        ok = True
        for v, s in zip(w, p):
            if need.setdefault(v, s) != s:
                ok = False
                break
        if ok:
            best_g = min(best_g, sum(g.labels[v] != s for v, s in need.items()))
    return best_p, best_g


def all_two_cycle_free_digraphs(n: int):
    """Every digraph on n labelled vertices with no loops and no 2-cycles.

    Each unordered pair is absent, forward or backward: 3^(n(n-1)/2) graphs.
    """
    pairs = list(itertools.combinations(range(n), 2))
    for choice in itertools.product((0, 1, 2), repeat=len(pairs)):
        edges = []
        for (a, b), c in zip(pairs, choice):
            if c == 1:
                edges.append((a, b))
            elif c == 2:
                edges.append((b, a))
        yield edges
