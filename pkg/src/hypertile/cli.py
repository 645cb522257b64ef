"""``hypertile`` command line.

Exit codes: 0 success (factor found), 1 staged or selftest failure, 2 usage or
input error, 3 no factor exists, 4 search budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from pathlib import Path

from . import kernels
from .constructions import ConstructionSpec, default_seed
from .errors import BudgetExhausted, HypertileError, InputError
from .formats import from_json, from_text, to_json_obj, to_text
from .hypergraph import PATTERNS, Hypergraph3, edge_extension_check, min_codegree, partition_stats, pattern_by_name
from .solver import DEFAULT_BUDGET, Status, brute_force_threshold, find_factor, max_tiling

log = logging.getLogger("hypertile")

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NO_FACTOR, EXIT_BUDGET = 0, 1, 2, 3, 4


class _Usage(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _floats(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text}") from None
    if any(not v > 0 for v in values):
        raise argparse.ArgumentTypeError("values must be positive")
    return values


def _common(p: argparse.ArgumentParser, with_input: bool = True) -> None:
    if with_input:
        src = p.add_mutually_exclusive_group()
        src.add_argument("--input", "-i", help="hypergraph file, '-' for stdin (default: stdin)")
        src.add_argument("--construct", "-c", metavar="SPEC", help="build a named construction, e.g. hab:a=6,b=6")
    p.add_argument("--json", action="store_true", help="hypergraph input/output in JSON instead of text")
    p.add_argument("--out", "-o", help="write output here instead of stdout")
    p.add_argument("--threads", type=_positive_int, help="cap on worker threads for the compiled kernels")
    p.add_argument("--seed", type=int, help="random seed (default: $HYPERTILE_SEED or 0)")
    p.add_argument("--verbose", "-v", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypertile", description="Tilings of 3-graphs by four-vertex patterns.")
    sub = parser.add_subparsers(dest="command", required=True)
    pattern_help = f"one of {', '.join(PATTERNS)}"

    p = sub.add_parser("gen", help="emit a construction")
    p.add_argument("spec", help="hab:a=,b= | hl:n=,l= | tour:n=,seed= | rand:n=,p=,seed= | complete:n=")
    _common(p, with_input=False)

    p = sub.add_parser("stats", help="codegree, pattern counts, edge-extension slack")
    p.add_argument("--labels", help="class label per vertex, e.g. AAAABBBB")
    p.add_argument("--pattern", default="k4m", help=pattern_help)
    _common(p)

    p = sub.add_parser("factor", help="decide whether a pattern factor exists")
    p.add_argument("--pattern", default="k4m", help=pattern_help)
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    _common(p)

    p = sub.add_parser("tile", help="maximum or local-search tiling")
    p.add_argument("--pattern", default="k4m", help=pattern_help)
    p.add_argument("--local-search", action="store_true", help="weighted local search (K4^- only)")
    p.add_argument("--l", type=_nonneg_int, help="copies wanted by the local search")
    p.add_argument("--target", type=_nonneg_int, help="copies wanted by the exact search (default n // 4)")
    p.add_argument("--trace", help="write the local-search move trace here")
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    _common(p)

    p = sub.add_parser("closeness", help="closed partition, connector counts and bridge counts")
    p.add_argument("--gamma", type=_positive_float, default=0.1)
    p.add_argument("--eta", type=_floats, default=None, help="comma list of eta per length, e.g. 1e-3,1e-6")
    p.add_argument("--samples", type=_positive_int, default=64)
    p.add_argument("--strict", action="store_true", help="refuse when delta_2 < n/2")
    _common(p)

    p = sub.add_parser("absorb", help="sample an absorbing family and absorb a leftover")
    p.add_argument("--demo", action="store_true", help="fixed draw count instead of the asymptotic probability")
    p.add_argument("--count", type=_nonneg_int, default=8, help="draws in demo mode")
    p.add_argument("--i", type=_positive_int, default=1)
    p.add_argument("--eta", type=_positive_float, default=0.1)
    p.add_argument("--probes", type=_nonneg_int, default=8, help="random 4-sets checked for absorbers")
    p.add_argument("--leftover", help="comma-separated vertices to absorb")
    _common(p)

    p = sub.add_parser("pipeline", help="absorb-and-tile factor pipeline")
    p.add_argument("--demo", action="store_true", help="fixed draw count instead of the asymptotic probability")
    p.add_argument("--count", type=_nonneg_int, default=8)
    p.add_argument("--gamma", type=_positive_float, default=0.1)
    p.add_argument("--i", type=_positive_int, default=1)
    p.add_argument("--eta", type=_positive_float, default=0.1)
    p.add_argument("--no-timings", action="store_true", help="omit timings so reports compare byte for byte")
    _common(p)

    p = sub.add_parser("threshold", help="exhaustive codegree threshold (n = 4 only)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pattern", default="k4m", help=pattern_help)
    _common(p, with_input=False)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion keys, e.g. 1,2,C1")
    _common(p, with_input=False)
    return parser


def _read_input(args) -> Hypergraph3:
    if args.construct:
        return ConstructionSpec.parse(args.construct).build()
    if args.input in (None, "-"):
        text = sys.stdin.read()
    else:
        text = Path(args.input).read_text()
    return from_json(text) if args.json else from_text(text)


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _pattern(name: str):
    try:
        return pattern_by_name(name)
    except ValueError as exc:
        raise _Usage(str(exc)) from None


def cmd_gen(args) -> int:
    h = ConstructionSpec.parse(args.spec).build()
    _emit(args, json.dumps(to_json_obj(h)) + "\n" if args.json else to_text(h))
    return EXIT_OK


def cmd_stats(args) -> int:
    h = _read_input(args)
    p = _pattern(args.pattern)
    holds, worst, slack = edge_extension_check(h)
    out = {
        "n": h.n,
        "m": h.m,
        "min_codegree": min_codegree(h) if h.n >= 2 else None,
        "pattern_copies": {name: len(h.copy_masks(q)) for name, q in PATTERNS.items()},
        "edge_extension": {"holds": holds, "worst_edge": list(worst) if worst else None, "slack": slack},
    }
    if args.labels:
        labels = args.labels.split(",") if "," in args.labels else list(args.labels)
        if len(labels) != h.n:
            raise _Usage(f"--labels gives {len(labels)} labels for {h.n} vertices")
        ps = partition_stats(h, labels, p)
        out["partition"] = {"pattern": p.name, "edge_counts": ps.edge_counts, "pattern_counts": ps.pattern_counts}
    _emit(args, out)
    return EXIT_OK


def cmd_factor(args) -> int:
    h = _read_input(args)
    result = find_factor(h, _pattern(args.pattern), args.budget)
    _emit(args, result.to_json_obj())
    return EXIT_OK if result.status is Status.FACTOR_FOUND else EXIT_NO_FACTOR


def cmd_tile(args) -> int:
    from .tiling import greedy_tile, trace_to_json_obj

    h = _read_input(args)
    p = _pattern(args.pattern)
    if not args.local_search:
        result = max_tiling(h, p, args.target, args.budget)
        _emit(args, result.to_json_obj())
        return EXIT_OK
    if p.name != "k4m":
        raise _Usage("the local search only tiles with k4m")
    l = args.l if args.l is not None else max(0, (h.n - 13) // 4)
    seed = args.seed
    t, trace = greedy_tile(h, l, seed=seed)
    obj = trace_to_json_obj(t, trace, l, seed)
    if args.trace:
        Path(args.trace).write_text(json.dumps(obj, indent=1) + "\n")
    _emit(args, {"l": l, "copies": len(t.t1), "reached": len(t.t1) >= l, "steps": len(trace), "tiling": t.to_json_obj()})
    return EXIT_OK if len(t.t1) >= l else EXIT_FAILED


def cmd_closeness(args) -> int:
    from .closeness import DEFAULT_ETAS, closed_partition

    h = _read_input(args)
    etas = args.eta or DEFAULT_ETAS
    if len(etas) < 2:
        raise _Usage("--eta needs one value per length 1 and 2")
    seed = default_seed() if args.seed is None else args.seed
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = closed_partition(h, args.gamma, etas, args.samples, seed, strict=args.strict)
    _emit(args, report.to_json_obj())
    return EXIT_OK


def cmd_absorb(args) -> int:
    from .absorption import AbsorberParams, absorb_with_assignment, sample_absorber_family

    h = _read_input(args)
    seed = default_seed() if args.seed is None else args.seed
    params = AbsorberParams(args.i, args.eta, seed, args.count if args.demo else None, args.probes)
    out: dict = {"seed": seed, "demo": args.demo}
    try:
        fam = sample_absorber_family(h, params)
    except HypertileError as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
        _emit(args, out)
        return EXIT_FAILED
    out["family"] = fam.to_json_obj()
    code = EXIT_OK
    if args.leftover:
        w = [int(v) for v in args.leftover.split(",")]
        try:
            tiles, assignment = absorb_with_assignment(h, fam, w)
            out["absorbed"] = {
                "assignment": [{"four_set": list(t), "member": k} for t, k in assignment.items()],
                "factor": [list(t) for t in tiles],
            }
        except HypertileError as exc:
            out["error"] = f"{type(exc).__name__}: {exc}"
            code = EXIT_FAILED
    _emit(args, out)
    return code


def cmd_pipeline(args) -> int:
    from .absorption import PipelineConfig, factor_via_absorption

    h = _read_input(args)
    seed = default_seed() if args.seed is None else args.seed
    config = PipelineConfig(args.gamma, args.i, args.eta, seed, args.count if args.demo else None)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = factor_via_absorption(h, config)
    _emit(args, report.to_json_obj(timings=not args.no_timings))
    return EXIT_OK if report.success else EXIT_FAILED


def cmd_threshold(args) -> int:
    value = brute_force_threshold(args.n, _pattern(args.pattern))
    _emit(args, {"n": args.n, "pattern": args.pattern, "threshold": value} if args.json else f"{value}\n")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    keys = args.only.split(",") if args.only else None
    echo = None if args.json else (lambda line: print(line, flush=True))
    results = run_all(keys, echo=echo)
    passed = sum(r.passed for r in results)
    if args.json:
        _emit(args, {"passed": passed, "total": len(results), "results": [r.to_json_obj() for r in results]})
    else:
        print(f"{passed}/{len(results)} passed")
    return EXIT_OK if passed == len(results) else EXIT_FAILED


COMMANDS = {
    "gen": cmd_gen,
    "stats": cmd_stats,
    "factor": cmd_factor,
    "tile": cmd_tile,
    "closeness": cmd_closeness,
    "absorb": cmd_absorb,
    "pipeline": cmd_pipeline,
    "threshold": cmd_threshold,
    "selftest": cmd_selftest,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.threads:
        kernels.set_threads(args.threads)
    try:
        return COMMANDS[args.command](args)
    except BudgetExhausted as exc:
        print(f"budget exhausted after {exc.nodes} nodes: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (_Usage, InputError, ValueError, OSError) as exc:
        print(f"hypertile {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HypertileError as exc:
        print(f"hypertile {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


def main() -> None:
    sys.exit(run())
