"""Command-line harness: generate, replay, benchmark, audit, emit gadgets.

Exit codes: 0 pass, 2 oracle mismatch, 3 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import reductions as rd
from . import workload as wl
from .graph import read_graph_file, read_trace, write_graph_file, WeightedEdge
from .hacref import dendrogram_diff, run_hac


def _parse_theta(text):
    if "/" in text:
        return Fraction(text)
    return int(text)


def _workers_list(text):
    return [int(x) for x in text.split(",") if x]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dynmsf",
        description="Batch-dynamic minimum-spanning-forest workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a deterministic workload trace")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-m", type=int, default=None, help="live edge cap (default 4n)")
    p.add_argument("--ops", type=int, default=1000)
    p.add_argument("--batch-min", type=int, default=1)
    p.add_argument("--batch-max", type=int, default=64)
    p.add_argument("--mix", default="0.55,0.35,0.10",
                   help="insert,delete,query mass")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", default="-")

    p = sub.add_parser("run", help="replay a trace with optional checking")
    p.add_argument("trace")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--check", choices=["none", "oracle", "oracle+audit"],
                   default="oracle")
    p.add_argument("--audit-rate", type=float, default=0.1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("audit", help="replay with oracle checks and a full audit")
    p.add_argument("trace")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("bench", help="throughput sweep over worker counts")
    p.add_argument("trace", nargs="?")
    p.add_argument("-n", type=int)
    p.add_argument("--workers", default="1", help="comma list, e.g. 1,2,8")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scaling", action="store_true",
                   help="run the built-in scaling smoke instead of a trace")
    p.add_argument("--sizes", default="10000,100000")
    p.add_argument("--batch-size", type=int, default=1000)
    p.add_argument("--edges-per-phase", type=int, default=20000)

    p = sub.add_parser("reduce", help="emit a lower-bound gadget instance")
    p.add_argument("--kind", required=True, choices=[
        "subconn_to_complete", "subconn_to_wpgma", "subconn_to_upgma",
        "subunion_to_upgma", "subunion_to_complete", "subunion_to_wpgma",
        "subunion_to_upgma_count", "triangle_to_upgma_count"])
    p.add_argument("--lam", type=int, default=1)
    p.add_argument("--variant", default="fully_dynamic",
                   choices=["fully_dynamic", "partially_dynamic"])
    p.add_argument("--size", type=int, default=5, help="source instance size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output path prefix")

    p = sub.add_parser("counterexample",
                       help="emit a dendrogram-instability counterexample")
    p.add_argument("--kind", required=True,
                   choices=["single", "wpgma_complete", "upgma"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True, help="output path prefix")
    p.add_argument("--measure", action="store_true",
                   help="also run the engine and report the dendrogram diff")

    p = sub.add_parser("hac-ref", help="run the reference clustering engine")
    p.add_argument("graph")
    p.add_argument("--linkage", required=True,
                   choices=["single", "complete", "average", "weighted_average"])
    p.add_argument("--theta", required=True, help="int or p/q")
    p.add_argument("--policy", choices=["exact", "adversarial"], default="exact")
    p.add_argument("--lam", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)

    args = parser.parse_args(argv)
    return _COMMANDS[args.command](args)


def _cmd_gen(args):
    mix = tuple(float(x) for x in args.mix.split(","))
    m_cap = args.m if args.m is not None else 4 * args.n
    work = wl.generate(args.n, m_cap, args.ops,
                       batch_range=(args.batch_min, args.batch_max),
                       mix=mix, seed=args.seed)
    text = "\n".join(work.trace_lines()) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as f:
            f.write(text)
    return 0


def _load_workload(args):
    return wl.Workload(args.n, args.seed, read_trace(args.trace))


def _report_out(report, fmt):
    if fmt == "json":
        print(json.dumps({
            "passed": report.passed,
            "batches": report.batches,
            "edges": report.edges_processed,
            "queries": report.queries,
            "mismatches": report.mismatches,
            "audit_failures": report.audit_failures,
            "checksums": report.checksums,
            "seconds": sum(report.timings),
        }, indent=2, default=str))
    else:
        status = "PASS" if report.passed else "FAIL"
        print(f"{status}: {report.batches} batches, {report.edges_processed} edges, "
              f"{report.queries} queries, {sum(report.timings):.3f}s in updates")
        for idx, what in report.mismatches[:10]:
            print(f"  mismatch at batch {idx}: {what}")
        for idx, issues in report.audit_failures[:10]:
            for issue in issues:
                print(f"  invariant violation at batch {idx}: {issue}")
        if report.checksums:
            print(f"final checksum {report.checksums[-1]}")
    return report.exit_code()


def _cmd_run(args):
    report = wl.run(_load_workload(args), check=args.check,
                    workers=args.workers, audit_rate=args.audit_rate,
                    seed=args.seed)
    return _report_out(report, args.format)


def _cmd_audit(args):
    report = wl.run(_load_workload(args), check="oracle+audit",
                    workers=args.workers, audit_rate=1.0, seed=args.seed)
    return _report_out(report, args.format)


def _cmd_bench(args):
    workers = _workers_list(args.workers)
    if args.scaling:
        print(wl.BENCH_HEADER)
        for n in (int(x) for x in args.sizes.split(",")):
            work = wl.scaling_workload(n, args.edges_per_phase,
                                       args.batch_size, seed=args.seed)
            rows = wl.bench(work, workers_list=workers, seed=args.seed)
            for row in rows[1:]:
                print(row)
        return 0
    if not args.trace or args.n is None:
        print("bench needs a trace and -n unless --scaling is set", file=sys.stderr)
        return 1
    for row in wl.bench(_load_workload(args), workers_list=workers, seed=args.seed):
        print(row)
    return 0


def _cmd_reduce(args):
    seed, size, lam = args.seed, args.size, args.lam
    if args.kind.startswith("subconn"):
        src = rd.sample_subconn(seed, max(4, size),
                                pin_terminals=args.kind.endswith("upgma"))
        gadget = {
            "subconn_to_complete": rd.subconn_to_complete,
            "subconn_to_wpgma": rd.subconn_to_wpgma,
            "subconn_to_upgma": rd.subconn_to_upgma,
        }[args.kind](src, lam)
        updates = [("add", v) for v in range(src.n)] + \
                  [("remove", v) for v in range(src.n)]
        source = {"kind": "SubConn", "n": src.n, "edges": src.edges,
                  "s": src.s, "t": src.t, "active": sorted(src.active)}
    elif args.kind.startswith("subunion"):
        src = rd.sample_subunion(seed, max(2, size), max(2, size - 1))
        fn = {
            "subunion_to_upgma": rd.subunion_to_upgma,
            "subunion_to_complete": rd.subunion_to_complete,
            "subunion_to_wpgma": rd.subunion_to_wpgma,
            "subunion_to_upgma_count": rd.subunion_to_upgma_count,
        }[args.kind]
        if args.kind in ("subunion_to_upgma", "subunion_to_upgma_count"):
            gadget = fn(src, lam, args.variant)
        else:
            gadget = fn(src, lam)
        updates = [("add", i) for i in range(len(src.sets))] + \
                  [("remove", i) for i in range(len(src.sets))]
        source = {"kind": "SubUnion", "universe": src.u,
                  "sets": [sorted(s) for s in src.sets],
                  "chosen": sorted(src.chosen)}
    else:
        src = rd.sample_triangle(seed, max(3, size))
        gadget = rd.triangle_to_upgma_count(src, lam)
        copies = sorted(gadget.special["a_side"].values()) + \
            sorted(gadget.special["b_side"].values())
        updates = [("activate", c) for c in copies] + \
                  [("deactivate", c) for c in copies]
        source = {"kind": "Triangle", "n": src.n, "edges": src.edges}

    edges = [WeightedEdge(u, v, w) if isinstance(w, int) else None
             for (u, v), w in sorted(gadget.edges.items())]
    if any(e is None for e in edges):
        print("gadget emitted non-integer weights", file=sys.stderr)
        return 1
    write_graph_file(f"{args.out}.graph", gadget.n, edges)
    table = []
    for update in updates:
        try:
            ops = gadget.edge_ops(update)
        except Exception:
            continue
        table.append({"update": list(update),
                      "ops": [list(op) for op in ops]})
    meta = {
        "kind": args.kind,
        "lambda": lam,
        "theta": str(gadget.theta),
        "linkage": gadget.linkage,
        "query": gadget.kind,
        "n": gadget.n,
        "special": {k: v for k, v in gadget.special.items()
                    if isinstance(v, (int, str))},
        "source": source,
        "update_table": table,
    }
    with open(f"{args.out}.meta.json", "w") as f:
        json.dump(meta, f, indent=2, default=str)
    print(f"wrote {args.out}.graph and {args.out}.meta.json "
          f"({gadget.n} vertices, {len(gadget.edges)} edges)")
    return 0


def _cmd_counterexample(args):
    n, edges, extra = rd.counterexample(args.kind, args.k)
    records = [WeightedEdge(u, v, w) for u, v, w in edges]
    write_graph_file(f"{args.out}.graph", n, records)
    with open(f"{args.out}.extra", "w") as f:
        f.write(f"{extra[0]} {extra[1]} {extra[2]}\n")
    print(f"wrote {args.out}.graph (+ {args.out}.extra) with n={n}")
    if args.measure:
        for linkage in rd.COUNTEREXAMPLE_LINKAGES[args.kind]:
            before = run_hac(n, edges, linkage, theta=0).dendrogram
            after = run_hac(n, edges + [extra], linkage, theta=0).dendrogram
            diff = dendrogram_diff(before, after)
            print(f"{linkage}: dendrogram diff {diff} over n={n} "
                  f"(ratio {diff / n:.2f})")
    return 0


def _cmd_hac_ref(args):
    n, edges = read_graph_file(args.graph)
    result = run_hac(n, [(e.u, e.v, e.w) for e in edges], args.linkage,
                     _parse_theta(args.theta), policy=args.policy,
                     lam=args.lam, seed=args.seed)
    print(result.dendrogram.format())
    print("clusters:")
    for group in result.clusters:
        print("  " + " ".join(map(str, group)))
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "run": _cmd_run,
    "audit": _cmd_audit,
    "bench": _cmd_bench,
    "reduce": _cmd_reduce,
    "counterexample": _cmd_counterexample,
    "hac-ref": _cmd_hac_ref,
}


if __name__ == "__main__":
    sys.exit(main())
