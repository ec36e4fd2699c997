"""Command-line interface.

Every command writes JSON (one object, or one object per line for streams)
to stdout.  Exit codes: 0 ok, 1 violation or disagreement, 2 usage or bad
input, 3 cap exceeded or indeterminate.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from dbgmatch.errors import AmbiguousImplicitLabel, CapExceeded, DbgError, NoIncomingWalk
from dbgmatch.graph import DeBruijnGraph, compute_implicit_labels, validate_de_bruijn
from dbgmatch.instances import DEFAULT_EDGE_FACTOR, HamInstance
from dbgmatch.io import (
    display_for,
    parse_graph,
    parse_ov,
    parse_pattern,
    read_text,
    write_bundle,
    write_graph,
    write_ov,
)
from dbgmatch.matchers import (
    DEFAULT_EXPANSION_CAP,
    match_exact,
    min_graph_substitutions,
    min_pattern_substitutions,
)
from dbgmatch.oracles import HAM_CAP, WALK_CAP, hamiltonian_oracle, ov_oracle, walk_enumeration_oracle
from dbgmatch.reduce_ham import build_npc_instance, check_npc_structure
from dbgmatch.reduce_ov import build_seth_instance, check_ov_optimality_probes
from dbgmatch.verify import random_ham, random_ov, verify_many

OK, FAIL, USAGE, CAPPED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    print(json.dumps(obj, default=_jsonable))


def _jsonable(x):
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    if isinstance(x, (set, tuple)):
        return list(x)
    if isinstance(x, bytes):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _cost(c):
    return "inf" if c == float("inf") else c


def _display(args, sigma: int):
    if not getattr(args, "display", None):
        return None
    return display_for("npc" if args.display == "npc" else None, sigma)


def _load_graph(path: str) -> DeBruijnGraph:
    return parse_graph(read_text(path))


def _load_pattern(path: str, args, sigma: int) -> list[int]:
    return parse_pattern(read_text(path), _display(args, sigma))


def _load_ham(path: str) -> HamInstance:
    return HamInstance(parse_graph(read_text(path)).base)


def _result(args, g: DeBruijnGraph, res) -> dict:
    out = res.to_dict()
    dm = _display(args, g.sigma)
    if res.walk is not None and dm is not None:
        out["spelled"] = dm.render(g.base.spell(res.walk))
    return out


# -- commands -------------------------------------------------------------


def cmd_gen_npc(args) -> int:
    inst = _load_ham(args.input)
    bundle = build_npc_instance(inst, skip_gadget=args.skip_gadget, edge_factor=args.edge_factor)
    paths = write_bundle(bundle, args.out_prefix)
    _emit({"kind": "npc", "files": [str(p) for p in paths], **bundle.params.as_dict(),
           "vertices": len(bundle.graph), "pattern_length": len(bundle.pattern)})
    return OK


def cmd_gen_seth(args) -> int:
    bundle = build_seth_instance(parse_ov(read_text(args.input)))
    paths = write_bundle(bundle, args.out_prefix)
    _emit({"kind": "seth", "files": [str(p) for p in paths], **bundle.params.as_dict(),
           "vertices": len(bundle.graph), "pattern_length": len(bundle.pattern)})
    return OK


def cmd_gen_random(args) -> int:
    rng = random.Random(args.seed)
    if args.kind == "ham":
        if args.n is None:
            raise UsageError("gen-random ham needs --n")
        inst = random_ham(args.n, rng, args.edges, args.two_cycle_free, args.edge_factor)
        text = f"# gen-random ham n={args.n} seed={args.seed}\n" + write_graph(inst.graph)
    else:
        if args.N is None or args.d is None:
            raise UsageError("gen-random ov needs --N and --d")
        ov = random_ov(args.N, args.d, rng, args.density)
        text = f"# gen-random ov N={args.N} d={args.d} density={args.density} seed={args.seed}\n" + write_ov(ov)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def cmd_validate(args) -> int:
    dbg = _load_graph(args.graph)
    k = args.k if args.k is not None else dbg.k
    if not dbg.implicit:
        try:
            dbg = compute_implicit_labels(dbg.base, k)
        except (AmbiguousImplicitLabel, NoIncomingWalk) as exc:
            _emit({"ok": False, "violations": [{"prop": "well_defined", "vertices": [exc.vertex],
                                                "message": str(exc)}]})
            return FAIL
    report = validate_de_bruijn(dbg)
    _emit({
        "ok": report.ok,
        "vertices": len(dbg),
        "k": dbg.k,
        "violations": [
            {"prop": v.prop, "vertices": list(v.vertices), "message": v.message} for v in report.violations
        ],
    })
    return OK if report.ok else FAIL


def cmd_match_exact(args) -> int:
    g = _load_graph(args.graph)
    res = match_exact(g, _load_pattern(args.pattern, args, g.sigma))
    _emit(_result(args, g, res))
    return OK


def cmd_match_pattern_subs(args) -> int:
    g = _load_graph(args.graph)
    res = min_pattern_substitutions(g, _load_pattern(args.pattern, args, g.sigma), args.delta, args.witness)
    _emit(_result(args, g, res))
    return OK


def cmd_match_graph_subs(args) -> int:
    g = _load_graph(args.graph)
    res = min_graph_substitutions(g, _load_pattern(args.pattern, args, g.sigma), args.delta, args.cap)
    _emit(_result(args, g, res))
    return CAPPED if res.indeterminate else OK


def cmd_oracle(args) -> int:
    if args.which == "ham":
        found, cycle = hamiltonian_oracle(_load_ham(args.input), args.cap or HAM_CAP)
        _emit({"hamiltonian": found, "cycle": cycle})
    elif args.which == "ov":
        found, pair = ov_oracle(parse_ov(read_text(args.input)))
        _emit({"orthogonal": found, "pair": pair})
    else:
        if not args.pattern:
            raise UsageError("oracle walks needs --pattern")
        g = _load_graph(args.input)
        ps, gs = walk_enumeration_oracle(g, _load_pattern(args.pattern, args, g.sigma), args.cap or WALK_CAP)
        _emit({"pattern_subs": _cost(ps), "graph_subs": _cost(gs)})
    return OK


def cmd_verify_reduction(args) -> int:
    if args.random:
        rng = random.Random(args.seed)
        if args.kind == "npc":
            instances = [
                random_ham(args.n, rng, two_cycle_free=args.skip_gadget) for _ in range(args.random)
            ]
        else:
            instances = [random_ov(args.N, args.d, rng, args.density) for _ in range(args.random)]
    else:
        if not args.inputs:
            raise UsageError("verify-reduction needs input files or --random")
        load = _load_ham if args.kind == "npc" else (lambda p: parse_ov(read_text(p)))
        instances = [load(p) for p in args.inputs]
    opts = {"skip_gadget": args.skip_gadget, "cap": args.cap} if args.kind == "npc" else {}
    status = OK
    capped = False
    for rec in verify_many(args.kind, instances, workers=args.workers, **opts):
        out = rec.to_dict()
        if args.inputs:
            out["input"] = args.inputs[rec.index]
        _emit(out)
        if rec.indeterminate:
            capped = True
        elif not rec.clean:
            status = FAIL
    if status == OK and capped:
        status = CAPPED
    return status


def cmd_check_structure(args) -> int:
    if args.kind == "npc":
        bundle = build_npc_instance(_load_ham(args.input), skip_gadget=args.skip_gadget)
        report = check_npc_structure(bundle)
    else:
        bundle = build_seth_instance(parse_ov(read_text(args.input)))
        report = check_ov_optimality_probes(bundle)
    _emit({"ok": report.ok, "violations": [v.message for v in report.violations]})
    return OK if report.ok else FAIL


def cmd_bench(args) -> int:
    """Time the pattern-substitution DP on generated OV instances against |E| * m."""
    rng = random.Random(args.seed)
    for N in args.N:
        d = max(args.d, N.bit_length())
        bundle = build_seth_instance(random_ov(N, d, rng))
        edges = bundle.graph.base.num_edges
        m = len(bundle.pattern)
        t = time.perf_counter()
        res = min_pattern_substitutions(bundle.graph, bundle.pattern, witness=False)
        secs = time.perf_counter() - t
        _emit({"N": N, "d": d, "edges": edges, "m": m, "cost": res.cost, "seconds": round(secs, 6),
               "ns_per_cell": round(1e9 * secs / max(edges * m, 1), 3)})
    return OK


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dbgmatch", description="Pattern matching on de Bruijn graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def display_flag(p):
        p.add_argument(
            "--display", nargs="?", const="digits", choices=["digits", "npc"],
            help="read patterns and render walks as characters ('npc' uses $ # 0 1)",
        )

    p = sub.add_parser("gen-npc", help="reduce a Hamiltonian cycle instance")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--skip-gadget", action="store_true", help="input is already free of 2-cycles")
    p.add_argument("--edge-factor", type=int, default=DEFAULT_EDGE_FACTOR)
    p.set_defaults(func=cmd_gen_npc)

    p = sub.add_parser("gen-seth", help="reduce an Orthogonal Vectors instance")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_gen_seth)

    p = sub.add_parser("gen-random", help="seeded random instance")
    p.add_argument("kind", choices=["ham", "ov"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int)
    p.add_argument("--edges", type=int)
    p.add_argument("--two-cycle-free", action="store_true")
    p.add_argument("--edge-factor", type=int, default=DEFAULT_EDGE_FACTOR)
    p.add_argument("--N", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_random)

    p = sub.add_parser("validate", help="check the de Bruijn properties of a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, help="order to use when the file has no implicit labels")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("match-exact")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    display_flag(p)
    p.set_defaults(func=cmd_match_exact)

    p = sub.add_parser("match-pattern-subs")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--delta", type=int)
    p.add_argument("--witness", action="store_true")
    display_flag(p)
    p.set_defaults(func=cmd_match_pattern_subs)

    p = sub.add_parser("match-graph-subs")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_EXPANSION_CAP)
    display_flag(p)
    p.set_defaults(func=cmd_match_graph_subs)

    p = sub.add_parser("oracle", help="brute-force deciders")
    p.add_argument("which", choices=["ham", "ov", "walks"])
    p.add_argument("--in", dest="input", required=True, help="graph or OV file")
    p.add_argument("--pattern")
    p.add_argument("--cap", type=int)
    display_flag(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify-reduction", help="compare oracle and matcher on reduced instances")
    p.add_argument("kind", choices=["npc", "seth"])
    p.add_argument("inputs", nargs="*")
    p.add_argument("--skip-gadget", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_EXPANSION_CAP)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--random", type=int, default=0, help="verify this many seeded random instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--density", type=float, default=0.5)
    p.set_defaults(func=cmd_verify_reduction)

    p = sub.add_parser("check-structure", help="structural checks on a reduced instance")
    p.add_argument("kind", choices=["npc", "seth"])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--skip-gadget", action="store_true")
    p.set_defaults(func=cmd_check_structure)

    p = sub.add_parser("bench", help="time the DP on OV-derived instances")
    p.add_argument("--N", type=int, nargs="+", default=[2, 4, 8, 16])
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CAPPED
    except (UsageError, DbgError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
