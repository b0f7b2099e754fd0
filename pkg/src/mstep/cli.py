"""Command-line interface: analyze, limit, verify, gen, bench.

Exit codes form a contract scripts can dispatch on:

    0  success
    1  usage or parse error
    2  validation failure (bad tournament, infeasible generation ask)
    3  refusal: the input has sinks, so no limit is constructed
    4  verification mismatch between constructor and oracle

Inputs are auto-detected (dense matrix text, edge list, or JSON) unless
``--input-format`` says otherwise.
"""

from __future__ import annotations

import argparse
import collections
import json
import sys
import time

import numpy as np

from . import _kernels, boolmat, digraph, gen, limits
from .boolmat import ParseError, competition_profile
from .digraph import ValidationError
from .imprimitivity import kappa_and_sets

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_SINKS = 3
EXIT_MISMATCH = 4

# Default shape rotation for verification campaigns: n <= 12, k in 2..5.
VERIFY_SHAPES = (
    (3, 3),
    (2, 4),
    (6, 6),
    (5, 7),
    (2, 2, 2),
    (1, 3, 2),
    (4, 4, 4),
    (3, 4, 5),
    (2, 2, 2, 2),
    (1, 2, 3, 4),
    (3, 3, 3, 3),
    (1, 1, 1, 1, 2),
    (2, 2, 2, 3, 3),
    (1, 1, 2, 3, 4),
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes:
        raise argparse.ArgumentTypeError("size list is empty")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mstep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p):
        p.add_argument("input", help="input file, or - for stdin")
        p.add_argument(
            "--input-format",
            choices=("auto", "matrix", "edges", "json"),
            default="auto",
        )

    p = sub.add_parser("analyze", help="partition, sinks, components, classes, profile")
    add_input(p)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("limit", help="construct the limit and its block form")
    add_input(p)
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.add_argument("--oracle-only", action="store_true", help="skip the constructor")
    p.add_argument("--trace", action="store_true", help="include the branch trace")

    p = sub.add_parser("verify", help="constructor vs oracle over a seeded grid")
    p.add_argument("--count", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sizes", type=_sizes, default=None, help="fix one shape")
    p.add_argument("--allow-sinks", action="store_true")
    p.add_argument("--trace", action="store_true", help="print branch counters")
    p.add_argument("--dump", default="mismatch.txt", help="counterexample file")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("gen", help="emit random tournaments in edge-list format")
    p.add_argument("--sizes", type=_sizes, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument(
        "--constraint",
        choices=("none", "sink-free", "strong", "kappa", "unusual"),
        default="none",
    )
    p.add_argument("--kappa", type=int, default=None)
    p.add_argument("--max-tries", type=int, default=1000)
    p.add_argument("--out", default=None, help="file (count=1) or prefix (count>1)")

    p = sub.add_parser("bench", help="kernel and constructor-vs-oracle timings")
    p.add_argument("--sizes", type=_sizes, default=(64, 128, 256))
    p.add_argument("--limit-sizes", type=_sizes, default=(24, 48, 96))
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")

    return parser


def _read_input(args) -> digraph.Tournament:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(0, f"cannot read {args.input}: {exc}") from None
    fmt = args.input_format
    if fmt == "auto":
        stripped = text.lstrip()
        if stripped.startswith("{"):
            fmt = "json"
        else:
            head = stripped.splitlines()[0].split() if stripped else []
            fmt = "matrix" if len(head) == 1 else "edges"
    if fmt == "matrix":
        return digraph.tournament_from_arcs(boolmat.parse_matrix_text(text))
    if fmt == "edges":
        return digraph.parse_edge_list(text)
    return digraph.parse_json(text)


def _fmt_set(vs) -> str:
    return "{" + ", ".join(str(v) for v in vs) + "}"


def cmd_analyze(args) -> int:
    t = _read_input(args)
    structure = digraph.ordered_components(t)
    sink_vertices = digraph.sinks(t)
    prof = competition_profile(t.arcs)
    last = structure.components[-1]
    classes = None
    if len(last) >= 2:
        classes = kappa_and_sets(t, last)
    if args.format == "json":
        data = {
            "n": t.n,
            "k": t.k,
            "partition": [list(p) for p in t.partition],
            "sinks": list(sink_vertices),
            "components": [list(c) for c in structure.components],
            "multiple_sinks": structure.multiple_sinks,
            "kappa": classes.kappa if classes else None,
            "classes": [list(u) for u in classes.sets] if classes else None,
            "cindex": prof.cindex,
            "cperiod": prof.cperiod,
        }
        print(json.dumps(data, indent=2))
        return EXIT_OK
    print(f"n = {t.n}, k = {t.k}")
    print("partition: " + "; ".join(f"V{i + 1} = {_fmt_set(p)}" for i, p in enumerate(t.partition)))
    print("sinks: " + (_fmt_set(sink_vertices) if sink_vertices else "none"))
    print(
        "strong components (ordered): "
        + "; ".join(f"Q{i + 1} = {_fmt_set(c)}" for i, c in enumerate(structure.components))
    )
    if classes:
        us = ", ".join(f"U{i + 1} = {_fmt_set(u)}" for i, u in enumerate(classes.sets))
        print(f"last component: kappa = {classes.kappa}, {us}")
    else:
        print("last component: trivial (no classes)")
    print(f"competition index = {prof.cindex}, period = {prof.cperiod}")
    return EXIT_OK


def cmd_limit(args) -> int:
    t = _read_input(args)
    prof = competition_profile(t.arcs)
    sink_vertices = digraph.sinks(t)
    if args.oracle_only:
        payload = {"cindex": prof.cindex, "cperiod": prof.cperiod,
                   "sinks": list(sink_vertices)}
        if args.format == "json":
            print(json.dumps(payload, indent=2))
        else:
            print(f"competition index = {prof.cindex}, period = {prof.cperiod}")
            if sink_vertices:
                print(f"sinks: {_fmt_set(sink_vertices)} (no limit constructed)")
        return EXIT_OK
    if sink_vertices:
        print(
            f"refusing: tournament has sinks {_fmt_set(sink_vertices)}; "
            f"oracle reports cindex = {prof.cindex}, cperiod = {prof.cperiod}",
            file=sys.stderr,
        )
        return EXIT_SINKS
    report = limits.with_profile(limits.construct_limit(t), prof.cindex, prof.cperiod)
    block = limits.block_form(report)
    if args.format == "dot":
        sys.stdout.write(limits.to_dot(report))
        return EXIT_OK
    if args.format == "json":
        data = limits.report_json(report, block)
        if args.trace:
            data["trace"] = dataclass_dict(report.trace)
        print(json.dumps(data, indent=2))
        return EXIT_OK
    print(f"label: {report.label}")
    for slot in sorted(report.cliques):
        print(f"  K({slot}) = {_fmt_set(report.cliques[slot])}")
    dense = report.edges.to_dense()
    pairs = [f"{int(u)}-{int(v)}" for u, v in np.argwhere(np.triu(dense, k=1))]
    print("edges: " + (" ".join(pairs) if pairs else "(none)"))
    print(f"template: {block.template}, block sizes: "
          + ", ".join("absent" if s is None else str(s) for s in block.block_sizes))
    print(f"competition index = {report.cindex}, period = {report.cperiod}")
    if args.trace:
        print(f"trace: {dataclass_dict(report.trace)}")
    return EXIT_OK


def dataclass_dict(obj) -> dict:
    return {k: v for k, v in vars(obj).items() if v is not None}


def _verify_specs(args):
    shapes = [args.sizes] if args.sizes else list(VERIFY_SHAPES)
    constraint = "none" if args.allow_sinks else "sink_free"
    for i in range(args.count):
        shape = shapes[i % len(shapes)]
        yield gen.GenSpec(shape, seed=args.seed + i, constraint=constraint)


def cmd_verify(args) -> int:
    checked = 0
    mismatches = 0
    sink_cases = 0
    period_counts = collections.Counter()
    branches = collections.Counter()
    first_failure = None
    started = time.perf_counter()
    for spec in _verify_specs(args):
        t = gen.random_constrained(spec)
        verdict = limits.verify_against_oracle(t)
        checked += 1
        period_counts[verdict.cperiod] += 1
        if verdict.status == "sinks":
            sink_cases += 1
            bound = 2 if t.k == 2 else 3
            if verdict.cperiod > bound or not verdict.constructor_refused:
                mismatches += 1
                first_failure = first_failure or (spec, t, verdict)
        elif verdict.status == "mismatch":
            mismatches += 1
            first_failure = first_failure or (spec, t, verdict)
        elif args.trace:
            branches[limits.construct_limit(t).trace.branch] += 1
    elapsed = time.perf_counter() - started

    if first_failure is not None:
        spec, t, verdict = first_failure
        with open(args.dump, "w", encoding="utf-8") as fh:
            fh.write(f"# seed {spec.seed} sizes {spec.sizes}\n")
            fh.write(digraph.format_edge_list(t))
            fh.write(f"# verdict: {verdict}\n")
    if args.format == "json":
        print(json.dumps({
            "checked": checked,
            "mismatches": mismatches,
            "sink_cases": sink_cases,
            "periods": {str(k): v for k, v in sorted(period_counts.items())},
            "branches": dict(sorted(branches.items())),
            "seconds": round(elapsed, 3),
        }, indent=2))
    else:
        print(f"checked {checked} instances in {elapsed:.1f}s: "
              f"{checked - mismatches} ok, {mismatches} mismatches")
        print("periods: " + ", ".join(f"{k}: {v}" for k, v in sorted(period_counts.items())))
        if args.trace and branches:
            print("branches:")
            for name, count in sorted(branches.items()):
                print(f"  {name}: {count}")
        if first_failure is not None:
            print(f"first counterexample written to {args.dump}", file=sys.stderr)
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_gen(args) -> int:
    constraint = {
        "none": "none",
        "sink-free": "sink_free",
        "strong": "strong",
        "kappa": "last_kappa",
        "unusual": "unusual_pair",
    }[args.constraint]
    outputs = []
    for i in range(args.count):
        spec = gen.GenSpec(
            args.sizes, seed=args.seed + i, constraint=constraint, kappa=args.kappa
        )
        t = gen.random_constrained(spec, max_tries=args.max_tries)
        outputs.append(digraph.format_edge_list(t))
    if args.out is None:
        if args.count != 1:
            print("--count > 1 needs --out PREFIX", file=sys.stderr)
            return EXIT_USAGE
        sys.stdout.write(outputs[0])
    elif args.count == 1:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(outputs[0])
    else:
        for i, text in enumerate(outputs):
            with open(f"{args.out}-{i}.txt", "w", encoding="utf-8") as fh:
                fh.write(text)
    return EXIT_OK


def _time_call(fn, reps: int) -> float:
    best = float("inf")
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def cmd_bench(args) -> int:
    rng = np.random.Generator(np.random.PCG64(args.seed))
    multiply_rows = []
    for n in args.sizes:
        dense_a = (rng.random((n, n)) < 0.5).astype(np.uint8)
        dense_b = (rng.random((n, n)) < 0.5).astype(np.uint8)
        a = boolmat.BoolMatrix.from_dense(dense_a)
        b = boolmat.BoolMatrix.from_dense(dense_b)
        row = {"n": n}
        for name, impl in sorted(_kernels.MUL_IMPLS.items()):
            out = np.zeros_like(a.words)
            impl(a.words, b.words, out)  # warm-up (JIT compile)
            row[name] = _time_call(
                lambda: impl(a.words, b.words, np.zeros_like(a.words)), args.reps
            )
        if n <= 256:
            row["naive"] = _time_call(lambda: boolmat.naive_mul(a, b), 1)
        multiply_rows.append(row)

    limit_rows = []
    for n in args.limit_sizes:
        third = max(n // 3, 1)
        sizes = (third, third, n - 2 * third)
        spec = gen.GenSpec(sizes, seed=args.seed, constraint="sink_free")
        t = gen.random_constrained(spec)
        limits.construct_limit(t)  # warm-up
        limit_rows.append({
            "n": t.n,
            "constructor": _time_call(lambda: limits.construct_limit(t), args.reps),
            "oracle": _time_call(lambda: competition_profile(t.arcs), args.reps),
        })

    if args.format == "json":
        print(json.dumps({
            "backend": _kernels.BACKEND,
            "multiply": multiply_rows,
            "limit": limit_rows,
        }, indent=2))
        return EXIT_OK
    print(f"default kernel backend: {_kernels.BACKEND}")
    print("multiply (seconds, best of reps):")
    for row in multiply_rows:
        cells = ", ".join(f"{k} {v:.6f}" for k, v in row.items() if k != "n")
        print(f"  n={row['n']}: {cells}")
    print("constructor vs oracle (seconds, best of reps):")
    for row in limit_rows:
        print(f"  n={row['n']}: constructor {row['constructor']:.6f}, "
              f"oracle {row['oracle']:.6f}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = {
        "analyze": cmd_analyze,
        "limit": cmd_limit,
        "verify": cmd_verify,
        "gen": cmd_gen,
        "bench": cmd_bench,
    }[args.command]
    try:
        return handler(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"validation error [{exc.kind}]: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except gen.GenerationError as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except limits.SinksError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_SINKS


if __name__ == "__main__":
    sys.exit(main())
