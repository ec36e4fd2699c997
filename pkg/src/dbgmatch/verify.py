"""Random instance generators and the reduction verification driver."""

from __future__ import annotations

import random
import time
from contextlib import contextmanager
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator

from dbgmatch.errors import CapExceeded, DbgError, InvariantViolation
from dbgmatch.graph import validate_de_bruijn
from dbgmatch.instances import DEFAULT_EDGE_FACTOR, HamInstance, OvInstance
from dbgmatch.matchers import DEFAULT_EXPANSION_CAP, min_graph_substitutions, min_pattern_substitutions, replay
from dbgmatch.oracles import hamiltonian_oracle, ov_oracle
from dbgmatch.reduce_ham import build_npc_instance, check_npc_structure
from dbgmatch.reduce_ov import OvParams, build_seth_instance, check_ov_optimality_probes


def random_ham(
    n: int,
    rng: random.Random,
    edges: int | None = None,
    two_cycle_free: bool = False,
    edge_factor: int = DEFAULT_EDGE_FACTOR,
) -> HamInstance:
    """Random digraph with no self-loops and in/out-degree at least 1.

    Every vertex first gets a random out-neighbour, vertices left without an
    in-neighbour get one, and random extra edges are added until ``edges``
    (default 2n) is reached.
    """
    if n < 2 or (two_cycle_free and n < 3):
        raise InvariantViolation(f"no valid instance with n = {n}" + (" and no 2-cycles" if two_cycle_free else ""))
    target = 2 * n if edges is None else edges
    most = n * (n - 1) // 2 if two_cycle_free else n * (n - 1)
    if target > min(most, edge_factor * n):
        raise InvariantViolation(f"{target} edges impossible or above {edge_factor}n for n = {n}")
    if target < n:
        raise InvariantViolation(f"at least n = {n} edges are needed for the degree floor")
    es: set[tuple[int, int]] = set()

    def allowed(u: int, v: int) -> bool:
        return u != v and (u, v) not in es and not (two_cycle_free and (v, u) in es)

    def pick(cands: list[int]) -> int | None:
        return rng.choice(cands) if cands else None

    for u in range(n):
        if not any(a == u for a, _ in es):
            v = pick([v for v in range(n) if allowed(u, v)])
            if v is not None:
                es.add((u, v))
    for v in range(n):
        if not any(b == v for _, b in es):
            u = pick([u for u in range(n) if allowed(u, v)])
            if u is not None:
                es.add((u, v))
    free = [(u, v) for u in range(n) for v in range(n) if allowed(u, v)]
    rng.shuffle(free)
    for u, v in free:
        if len(es) >= target:
            break
        if allowed(u, v):
            es.add((u, v))
    inst = HamInstance.from_edges(n, sorted(es))
    problems = inst.problems(edge_factor)
    if problems:
        raise InvariantViolation("generator could not meet invariants: " + "; ".join(problems))
    return inst


def random_ov(N: int, d: int, rng: random.Random, density: float = 0.5) -> OvInstance:
    """Independent bits, each 1 with probability ``density``."""
    OvParams.for_shape(N, d)
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")

    def vec() -> tuple[int, ...]:
        return tuple(int(rng.random() < density) for _ in range(d))

    return OvInstance([vec() for _ in range(N)], [vec() for _ in range(N)])


@dataclass
class VerificationRecord:
    index: int
    kind: str
    descriptor: dict
    oracle: bool | None = None
    matcher: bool | None = None
    cost: float | int | None = None
    delta: int | None = None
    validator_ok: bool | None = None
    structure_ok: bool | None = None
    replay_ok: bool | None = None
    indeterminate: bool = False
    error: str | None = None
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def agree(self) -> bool:
        return self.oracle is not None and self.matcher is not None and self.oracle == self.matcher

    @property
    def clean(self) -> bool:
        """Agreement plus every side check passing."""
        checks = (self.validator_ok, self.structure_ok, self.replay_ok)
        return self.agree and self.error is None and all(c is not False for c in checks)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["agree"] = self.agree
        if out["cost"] == float("inf"):
            out["cost"] = "inf"
        return out


@contextmanager
def _timed(rec: VerificationRecord, name: str):
    t = time.perf_counter()
    try:
        yield
    finally:
        rec.timings[name] = round(time.perf_counter() - t, 6)


def verify_npc(
    inst: HamInstance, index: int = 0, skip_gadget: bool = False, cap: int = DEFAULT_EXPANSION_CAP
) -> VerificationRecord:
    rec = VerificationRecord(index, "npc", {"n": inst.n, "edges": inst.graph.edges(), "skip_gadget": skip_gadget})
    try:
        with _timed(rec, "build"):
            bundle = build_npc_instance(inst, skip_gadget=skip_gadget)
        rec.delta = bundle.delta
        with _timed(rec, "validate"):
            rec.validator_ok = validate_de_bruijn(bundle.graph).ok
            rec.structure_ok = check_npc_structure(bundle).ok
        with _timed(rec, "oracle"):
            rec.oracle = hamiltonian_oracle(inst)[0]
        with _timed(rec, "matcher"):
            res = min_graph_substitutions(bundle.graph, bundle.pattern, bundle.delta, cap=cap)
        rec.cost = res.cost
        rec.timings["expansions"] = res.expansions
        if res.indeterminate:
            rec.indeterminate = True
        else:
            rec.matcher = res.feasible
            if res.feasible:
                rec.replay_ok = replay(bundle.graph, bundle.pattern, res)
    except CapExceeded as exc:
        rec.indeterminate = True
        rec.error = f"CapExceeded: {exc}"
    except DbgError as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def verify_seth(ov: OvInstance, index: int = 0, probe: bool = True) -> VerificationRecord:
    rec = VerificationRecord(index, "seth", {"N": ov.N, "d": ov.d, "A": ov.A, "B": ov.B})
    try:
        with _timed(rec, "build"):
            bundle = build_seth_instance(ov)
        rec.delta = bundle.delta
        with _timed(rec, "validate"):
            rec.validator_ok = validate_de_bruijn(bundle.graph).ok
        with _timed(rec, "oracle"):
            rec.oracle = ov_oracle(ov)[0]
        with _timed(rec, "matcher"):
            res = min_pattern_substitutions(bundle.graph, bundle.pattern)
        rec.cost = res.cost
        rec.matcher = res.cost is not None and res.cost <= bundle.delta
        rec.replay_ok = replay(bundle.graph, bundle.pattern, res) if res.feasible else None
        if probe:
            with _timed(rec, "probe"):
                rec.structure_ok = check_ov_optimality_probes(bundle).ok
    except CapExceeded as exc:
        rec.indeterminate = True
        rec.error = f"CapExceeded: {exc}"
    except DbgError as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def _run(job: tuple) -> VerificationRecord:
    kind, index, payload, opts = job
    if kind == "npc":
        return verify_npc(payload, index, **opts)
    return verify_seth(payload, index, **opts)


def verify_many(
    kind: str, instances: Iterable, workers: int = 1, **opts
) -> Iterator[VerificationRecord]:
    """Verify instances in order; with ``workers > 1`` they run in a process pool.

    Records are yielded by instance index regardless of completion order.
    """
    jobs = [(kind, i, inst, opts) for i, inst in enumerate(instances)]
    if workers <= 1:
        for job in jobs:
            yield _run(job)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_run, jobs)
