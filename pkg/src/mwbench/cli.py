"""Command-line front end.

Machine-readable output (one JSON record per line, or CSV) goes to stdout,
logs to stderr.  Exit codes: 0 ok, 1 verification failure, 2 usage error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import re
import sys
from importlib import resources
from pathlib import Path

from . import bounds, bp, family, formats, graphs, mw, transforms, verify

log = logging.getLogger("mwbench")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(rec) -> None:
    print(formats.record(rec))


def _parse_graph(spec: str) -> graphs.Graph:
    """A .gr path or a builtin: K<n>, C<n>, P<n>, T<r>(K<n>|P<n>|C<n>), fam<k>,<r>."""
    m = re.fullmatch(r"([KCP])(\d+)", spec)
    if m:
        n = int(m.group(2))
        return {"K": family.complete_graph, "C": family.cycle_graph, "P": family.path_graph}[m.group(1)](n)
    m = re.fullmatch(r"T(\d+)\((.+)\)", spec)
    if m:
        return family.tree_product(family.complete_binary_tree(int(m.group(1))), _parse_graph(m.group(2))).graph
    m = re.fullmatch(r"fam(\d+),(\d+)", spec)
    if m:
        return family.family_graph(int(m.group(1)), int(m.group(2))).graph
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"no such graph file or builtin: {spec}")
    return formats.read_gr(path.read_text())


def _read_bp(spec: str):
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        return formats.read_bp(resources.files("mwbench.data").joinpath(name).read_text())
    return formats.read_bp(Path(spec).read_text())


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _check_limit(value: int, default: int, what: str) -> None:
    if value > default:
        log.warning("raising %s limit to %d (default %d); expect exponential cost", what, value, default)


def cmd_gen(args) -> int:
    if args.k < 3:
        raise UsageError("k must be at least 3")
    if args.r < 0:
        raise UsageError("r must be non-negative")
    fam = family.family_graph(args.k, args.r)
    td = family.canonical_tree_decomposition(fam.product.tree, fam.product.template)
    meta = fam.metadata()
    meta["td_width"] = td.width
    meta["max_degree"] = graphs.max_degree(fam.graph)
    if args.out:
        base = Path(args.out)
        base.with_suffix(".gr").write_text(formats.write_gr(fam.graph))
        base.with_suffix(".cnf").write_text(formats.write_cnf(graphs.phi(fam.graph)))
        base.with_suffix(".td").write_text(formats.write_td(td, fam.graph.vertex_count))
        base.with_suffix(".json").write_text(formats.record(meta) + "\n")
    _emit(meta)
    return EXIT_OK


def cmd_phi(args) -> int:
    g = _parse_graph(args.graph)
    _write(args.out, formats.write_cnf(graphs.phi(g)))
    return EXIT_OK


def cmd_mw(args) -> int:
    g = _parse_graph(args.graph)
    if args.method == "exact":
        _check_limit(args.limit, mw.DP_LIMIT, "DP")
        res = mw.exact_mw(g, args.limit)
    else:
        res = mw.heuristic_mw_upper(g, args.budget, args.seed)
    rec = {"graph": args.graph, "method": args.method, "n": g.vertex_count}
    rec.update(res.as_record())
    if args.falsify is not None:
        perm = mw.falsify_lower_bound(g, args.falsify, args.budget, args.seed)
        rec["falsify_bound"] = args.falsify
        rec["falsifier"] = None if perm is None else list(perm)
    _emit(rec)
    return EXIT_OK


def cmd_build(args) -> int:
    g = _parse_graph(args.graph)
    order = list(range(g.vertex_count)) if args.order is None else [int(x) for x in args.order.split(",")]
    z = bp.build_frontier_obdd(g, order)
    _write(args.out, formats.write_nrobp(z))
    log.info("built program with %d nodes, %d edges", z.num_nodes, len(z.edges))
    return EXIT_OK


def cmd_uniformize(args) -> int:
    z = _read_bp(args.input)
    if not isinstance(z, bp.Nrobp):
        raise UsageError("uniformize expects an nrobp program")
    tr = transforms.UniformizeTrace()
    u = transforms.uniformize(z, tr)
    if args.trace:
        for tail, head, added in tr.steps:
            print(formats.record({"step": "eliminate", "edge": [tail, head], "edges_added": added}), file=sys.stderr)
    _write(args.out, formats.write_nrobp(u))
    return EXIT_OK


def cmd_convert(args) -> int:
    z = _read_bp(args.input)
    if isinstance(z, bp.Nrobp):
        out = formats.write_traditional(transforms.to_traditional(z))
    else:
        out = formats.write_nrobp(transforms.to_arosrn(z))
    if args.trace:
        print(formats.record({"step": "convert", "from": type(z).__name__}), file=sys.stderr)
    _write(args.out, out)
    return EXIT_OK


def cmd_certify(args) -> int:
    g = _parse_graph(args.graph)
    z = _read_bp(args.bp) if args.bp else bp.build_frontier_obdd(g, range(g.vertex_count))
    if not bp.equivalent_to_cnf(z, graphs.phi(g)):
        _emit({"accepted": False, "reason": "program does not compute phi(G)"})
        return EXIT_FAIL
    try:
        cert = bounds.certificate_from_nrobp(z, g, args.t)
    except bounds.CertificateError as exc:
        _emit({"accepted": False, "reason": str(exc)})
        return EXIT_FAIL
    rec = {"accepted": True, "program_nodes": z.num_nodes, "program_edges": len(z.edges)}
    rec.update(cert.as_record())
    _emit(rec)
    return EXIT_OK


def cmd_bounds(args) -> int:
    g = _parse_graph(args.graph)
    x = graphs.max_degree(g)
    rec = {"graph": args.graph, "max_degree": x, "f": bounds.f_const(x) if x else None, "rng": bounds.RNG_ALGORITHM}
    if args.t is not None:
        rec["t"] = args.t
        rec["cover_lower_bound"] = bounds.size_lower_bound(args.t, x) if x else None
        try:
            rec["min_t_cover"] = bounds.min_t_cover_size(g, args.t)
        except bounds.NoCoverError as exc:
            rec["min_t_cover"] = None
            rec["note"] = str(exc)
    if args.subset is not None:
        s = [int(v) for v in args.subset.split(",") if v]
        est = bounds.estimate_containment_prob(g, s, args.trials, args.seed)
        rec.update({"subset": s, "estimate": est.estimate, "analytic_bound": est.bound,
                    "stderr": est.stderr, "all_vertex_covers": est.all_vertex_covers, "seed": args.seed})
    _emit(rec)
    return EXIT_OK


CSV_FIELDS = ["r", "n", "mw_bound", "nrobp_lb", "ddnnf_ub", "ratio", "log2_ratio", "k_ge_50", "r_ge_5ceillogk"]


def cmd_separation(args) -> int:
    rows = bounds.separation_report(range(args.r_min, args.r_max + 1))
    if args.csv:
        buf = io.StringIO()
        w = csv.DictWriter(buf, CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({**row, **row["regime_flags"]})
        sys.stdout.write(buf.getvalue())
    else:
        for row in rows:
            _emit(row)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.equiv:
        a = _read_bp(args.equiv[0])
        other = args.equiv[1]
        if other.endswith(".cnf"):
            ok = bp.equivalent_to_cnf(a, formats.read_cnf(Path(other).read_text()))
        else:
            ok = bp.equivalent(a, _read_bp(other))
        _emit({"check": "equivalence", "passed": ok})
        return EXIT_OK if ok else EXIT_FAIL
    names = list(verify.SUITES) if args.suite == "all" else args.suite.split(",")
    failed = False
    for chk in verify.run(names, args.seed):
        _emit(chk.as_record())
        failed |= not chk.passed
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mwbench", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--threads", type=int, default=1, help="cap on internal parallelism (work runs single-threaded)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="generate T_r(P_q) with decomposition and CNF")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--out", help="output path prefix (.gr, .cnf, .td, .json)")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("phi", help="write phi(G) as DIMACS")
    s.add_argument("graph")
    s.add_argument("--out")
    s.set_defaults(func=cmd_phi)

    s = sub.add_parser("mw", help="matching width")
    s.add_argument("graph")
    s.add_argument("--method", choices=["exact", "heuristic"], default="exact")
    s.add_argument("--limit", type=int, default=mw.DP_LIMIT)
    s.add_argument("--budget", type=int, default=20_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--falsify", type=int, help="also search for an ordering of width below this bound")
    s.set_defaults(func=cmd_mw)

    s = sub.add_parser("build-obdd", help="frontier OBDD of phi(G)")
    s.add_argument("graph")
    s.add_argument("--order", help="comma-separated vertex order")
    s.add_argument("--out")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("uniformize", help="make an nrobp uniform")
    s.add_argument("input", help="BP file or builtin:<name>")
    s.add_argument("--out")
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_uniformize)

    s = sub.add_parser("convert", help="nrobp <-> traditional two-leaf form")
    s.add_argument("input")
    s.add_argument("--out")
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("certify", help="t-cover certificate from a program for phi(G)")
    s.add_argument("graph")
    s.add_argument("--bp", help="program file (default: frontier OBDD in natural order)")
    s.add_argument("--t", type=int, required=True)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("bounds", help="f(x), minimum t-cover, containment estimate")
    s.add_argument("graph")
    s.add_argument("--t", type=int)
    s.add_argument("--subset", help="comma-separated vertex set for the containment estimate")
    s.add_argument("--trials", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("separation", help="T_r(P_2r) lower vs upper bound table")
    s.add_argument("--r-min", type=int, default=1)
    s.add_argument("--r-max", type=int, default=40)
    s.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_separation)

    s = sub.add_parser("verify", help="run property suites or an equivalence check")
    s.add_argument("--suite", default="all", help=f"comma list of {','.join(verify.SUITES)} or all")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--equiv", nargs=2, metavar=("BP", "OTHER"), help="BP vs BP or BP vs .cnf")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.command == "bounds" and args.subset is not None and args.seed is None:
        parser.error("--seed is required with --subset")
    if args.command == "verify" and args.suite != "all":
        unknown = set(args.suite.split(",")) - set(verify.SUITES)
        if unknown:
            parser.error(f"unknown suites: {', '.join(sorted(unknown))}")
    try:
        return args.func(args)
    except graphs.SizeLimitError as exc:
        log.error("%s", exc)
        return EXIT_LIMIT
    except (UsageError, formats.FormatError, graphs.IsolatedVertexError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (bp.StructureError, transforms.ConstantFalseError) as exc:
        log.error("%s", exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
