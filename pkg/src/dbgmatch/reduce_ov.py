"""Orthogonal Vectors -> pattern-substitution matching on a de Bruijn graph.

The graph has four sections:

* fan-in: a complete binary tree of depth c hanging off the 3-labeled
  vertex of the synchronization loop, children labeled 0 and 1;
* selection: one path per vector of A spelling f_A(a[1]) .. f_A(a[d]) f_A(0),
  plus a catch-all path spelling f_A(0)^d f_A(1);
* merge: l 2-labeled vertices after every selection path, merged by implicit
  label into an in-tree;
* sync: a k-cycle 3 2 2 ... 2.

The pattern has, per vector of B, (2^l 3)^t 2^c f_B(b[1]) .. f_B(b[d]) f_B(1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from dbgmatch.errors import InvariantViolation, NotPowerOfTwo
from dbgmatch.graph import DeBruijnBuilder, ValidationReport
from dbgmatch.instances import InstanceBundle, OvInstance
from dbgmatch.matchers import constrained_pattern_dp, min_pattern_substitutions

SIGMA = 4
TWO, THREE = 2, 3

FAN_IN = "fan-in"
SELECTION = "selection"
MERGE = "merge"
SYNC = "sync"

_F_A = {0: (1, 1, 0, 0), 1: (1, 1, 1, 1)}
_F_B = {0: (0, 1, 1, 0), 1: (0, 0, 0, 0)}


def f_A(bit: int) -> tuple[int, ...]:
    return _F_A[bit]


def f_B(bit: int) -> tuple[int, ...]:
    return _F_B[bit]


def hamming(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y):
        raise ValueError("length mismatch")
    return sum(a != b for a, b in zip(x, y))


def a_gadget(a: Sequence[int]) -> tuple[int, ...]:
    return sum((f_A(x) for x in a), ()) + f_A(0)


def b_gadget(b: Sequence[int]) -> tuple[int, ...]:
    return sum((f_B(x) for x in b), ()) + f_B(1)


def catch_all_gadget(d: int) -> tuple[int, ...]:
    return f_A(0) * d + f_A(1)


def gadget_cost(a: Sequence[int], b: Sequence[int]) -> int:
    """Hamming distance between the A-side and B-side gadgets of a and b."""
    return hamming(a_gadget(a), b_gadget(b))


@dataclass(frozen=True)
class OvParams:
    N: int
    d: int
    c: int
    k: int
    ell: int
    t: int
    delta: int

    @classmethod
    def for_shape(cls, N: int, d: int) -> OvParams:
        if N < 1 or N & (N - 1):
            raise NotPowerOfTwo(f"N = {N} is not a power of two")
        log_n = N.bit_length() - 1
        if d <= log_n:
            raise InvariantViolation(f"need d > log N, got d = {d}, log N = {log_n}")
        c = N.bit_length()  # smallest c with 2^c >= N + 1
        assert c == log_n + 1
        k = c + 4 * (d + 1)
        return cls(
            N=N, d=d, c=c, k=k, ell=k - 1, t=5 * d + c,
            delta=N * c + 2 * (d + 1) + (2 * d + 4) * (N - 1),
        )

    @property
    def pattern_length(self) -> int:
        return self.N * (self.t * (self.ell + 1) + self.c + 4 * (self.d + 1))

    def as_dict(self) -> dict:
        return {
            "N": self.N, "d": self.d, "c": self.c, "k": self.k,
            "ell": self.ell, "t": self.t, "delta": self.delta,
        }


def _check(ov: OvInstance) -> OvParams:
    problems = ov.shape_problems()
    if problems:
        raise InvariantViolation("; ".join(problems))
    return OvParams.for_shape(ov.N, ov.d)


def _bits(i: int, c: int) -> tuple[int, ...]:
    return tuple((i >> (c - 1 - j)) & 1 for j in range(c))


def build_ov_graph(a_set: Sequence[Sequence[int]], params: OvParams):
    """Build the graph for A; returns (DeBruijnGraph, {vertex: section}).

    Every section is laid out as a walk of text from the 3-vertex back to
    itself, and the builder turns each length-k window into a vertex,
    merging windows it has seen before.
    """
    if len(a_set) != params.N or any(len(a) != params.d for a in a_set):
        raise InvariantViolation("vector set does not match params")
    k, ell, c = params.k, params.ell, params.c
    b = DeBruijnBuilder(SIGMA, k)
    lead = (TWO,) * ell + (THREE,)
    section_of: dict[bytes, str] = {}

    def lay(text: tuple[int, ...], sections: list[str]) -> None:
        # window j ends at text[j + k - 1]; sections[j] tags it
        labels = [bytes(text[j : j + k]) for j in range(len(text) - k + 1)]
        for lab, sec in zip(labels, sections):
            section_of.setdefault(lab, sec)
        b.add_path(labels)

    # synchronization loop: 3, then l twos, then back to 3
    lay(lead + lead, [SYNC] * (ell + 2))
    # fan-in: every root-to-leaf branch
    for leaf in range(2**c):
        lay(lead + _bits(leaf, c), [SYNC] + [FAN_IN] * c)
    gadgets = [a_gadget(a) for a in a_set] + [catch_all_gadget(params.d)]
    for leaf, g in enumerate(gadgets):
        text = lead + _bits(leaf, c) + g + lead
        lay(text, [SYNC] + [FAN_IN] * c + [SELECTION] * len(g) + [MERGE] * ell + [SYNC])
    dbg = b.finish()
    sections = {b.vertex(lab): sec for lab, sec in section_of.items()}
    return dbg, sections


def ov_pattern(b_set: Sequence[Sequence[int]], params: OvParams) -> Iterator[int]:
    unit = (TWO,) * params.ell + (THREE,)
    for vec in b_set:
        for _ in range(params.t):
            yield from unit
        yield from (TWO,) * params.c
        yield from b_gadget(vec)


def build_ov_pattern(b_set: Sequence[Sequence[int]], params: OvParams) -> list[int]:
    if len(b_set) != params.N or any(len(v) != params.d for v in b_set):
        raise InvariantViolation("vector set does not match params")
    return list(ov_pattern(b_set, params))


def build_seth_instance(ov: OvInstance) -> InstanceBundle:
    params = _check(ov)
    graph, sections = build_ov_graph(ov.A, params)
    return InstanceBundle(
        kind="seth",
        graph=graph,
        pattern=build_ov_pattern(ov.B, params),
        delta=params.delta,
        params=params,
        sections=sections,
    )


PROBE = "three_alignment"


def check_ov_optimality_probes(bundle: InstanceBundle, forbidden=None) -> ValidationReport:
    """Compare the DP optimum with the optimum that keeps every 3 of P unsubstituted.

    Equal costs mean some optimal alignment puts each 3 of the pattern on a
    3-labeled vertex.  Costs are recorded on the report as ``costs``.
    """
    p = bundle.pattern
    if forbidden is None:
        forbidden = {i + 1 for i, s in enumerate(p) if s == THREE}
    free = min_pattern_substitutions(bundle.graph, p, witness=False).cost
    pinned = constrained_pattern_dp(bundle.graph, p, forbidden, witness=False).cost
    report = ValidationReport()
    report.costs = (free, pinned)
    if free != pinned:
        report.add(PROBE, [], f"unconstrained cost {free} differs from pinned cost {pinned}", free=free, pinned=pinned)
    return report
