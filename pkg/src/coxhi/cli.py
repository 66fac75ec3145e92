"""Command-line front end.

Subcommands: analyze, classify, hindex, ends, betti, duplex, collapse,
family, rh-check, batch.  Exit codes: 0 ok, 1 input error, 2 rank cap
exceeded, 3 RH check failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys as _sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import classify, families, hindex, report
from .core import (
    INFINITY,
    CoxeterSystem,
    ParseError,
    RankCapExceeded,
    RankLimitError,
    mask_from_names,
    mask_of,
    names_of_mask,
    parse_cxs,
    parse_json_system,
    to_cxs,
    betti as betti_of,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CAP = 2
EXIT_RH = 3


class CliError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def load_system(path) -> CoxeterSystem:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise CliError("cannot read %s: %s" % (path, exc))
    if p.suffix == ".json":
        try:
            return parse_json_system(json.loads(text))
        except json.JSONDecodeError as exc:
            raise CliError("%s: invalid JSON (%s)" % (path, exc))
    return parse_cxs(text)


def _emit(args, text, out=None):
    target = getattr(args, "output", None) if out is None else out
    if target:
        Path(target).write_text(text)
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def cmd_analyze(args):
    sys = load_system(args.file)
    if args.json:
        doc = report.build_report(sys, max_rank=args.max_rank,
                                  trace=args.trace, timing=args.timing)
        print(json.dumps(doc, indent=2))
    else:
        # the human layout always brackets the equivalence classes
        doc = report.build_report(sys, max_rank=args.max_rank, trace=True,
                                  timing=args.timing)
        print(report.render_human(sys, doc, trace=True))
    return EXIT_OK


def cmd_classify(args):
    sys = load_system(args.file)
    verdict = classify.classify_subset(sys, sys.full_mask) if sys.rank else None
    if sys.rank == 0:
        print("rank 0 system: spherical (trivial group)")
        return EXIT_OK
    lines = ["components:"]
    for mask, typ in verdict.components:
        lines.append("  %s: %s" % ("{%s}" % ",".join(names_of_mask(sys, mask)),
                                   typ.name))
    lines.append("spherical: %s" % ("yes" if verdict.spherical else "no"))
    lines.append("irreducible affine: %s"
                 % ("yes" if verdict.irreducible_affine else "no"))
    lines.append("minimal nonspherical: %s"
                 % ("yes" if verdict.minimal_nonspherical else "no"))
    if sys.rank <= hindex.CLASS_T_RANK_CAP:
        in_t, steps = hindex.in_class_T(sys, max_rank=args.max_rank)
        lines.append("in class T (strongly algebraically thick): %s"
                     % ("yes" if in_t else "no"))
        if in_t and args.trace:
            lines.append("derivation:")
            for step in steps:
                mask, rule = step[0], step[1]
                refs = step[2:]
                detail = " ".join(
                    "{%s}" % ",".join(names_of_mask(sys, r)) if r > 64 or True
                    else str(r)
                    for r in refs if isinstance(r, int))
                lines.append("  %s via %s %s"
                             % ("{%s}" % ",".join(names_of_mask(sys, mask)),
                                rule, detail))
    else:
        lines.append("in class T: skipped (rank above %d)"
                     % hindex.CLASS_T_RANK_CAP)
    print("\n".join(lines))
    return EXIT_OK


def cmd_hindex(args):
    sys = load_system(args.file)
    ana = hindex.analysis(sys, args.max_rank)
    lam = ana.lambda_analysis()
    if args.trace and not args.json:
        doc = report.build_report(sys, max_rank=args.max_rank, trace=True)
        print(report.render_human(sys, doc, trace=True))
    elif args.json:
        print(json.dumps({"h": "infinity" if lam.h == INFINITY else lam.h}))
    else:
        print("h = %s" % ("infinity" if lam.h == INFINITY else lam.h))
    return EXIT_OK


def cmd_ends(args):
    sys = load_system(args.file)
    value = classify.ends(sys, args.max_rank)
    print("infinity" if value == INFINITY else value)
    return EXIT_OK


def cmd_betti(args):
    sys = load_system(args.file)
    print(betti_of(sys))
    return EXIT_OK


def _parse_n(token):
    if token == "inf":
        return INFINITY
    try:
        return int(token)
    except ValueError:
        raise CliError("bad n value %r (integer or 'inf')" % token)


def cmd_duplex(args):
    sys = load_system(args.file)
    try:
        params = families.DuplexParams(args.m, _parse_n(args.n))
        doubled = families.duplex(sys, params)
    except ValueError as exc:
        raise CliError(str(exc))
    if args.verify:
        h0 = hindex.hypergraph_index(sys, args.max_rank)
        h1 = hindex.hypergraph_index(doubled, args.max_rank)
        fmt = lambda h: "infinity" if h == INFINITY else str(h)
        print("# h(input) = %s, h(duplex) = %s" % (fmt(h0), fmt(h1)))
    _emit(args, to_cxs(doubled))
    return EXIT_OK


def cmd_collapse(args):
    sys = load_system(args.file)
    try:
        collapsed = families.collapse_labels(sys, args.threshold)
    except ValueError as exc:
        raise CliError(str(exc))
    _emit(args, to_cxs(collapsed))
    return EXIT_OK


def cmd_family(args):
    if args.kind == "gamma":
        if args.d is None:
            raise CliError("family gamma requires --d")
        sys = families.gamma_d(args.d)
    elif args.kind == "path4":
        if args.n is None:
            raise CliError("family path4 requires --n")
        sys = families.path4(args.n)
    else:  # catalog
        try:
            sys = families.catalog(args.name)
        except KeyError as exc:
            raise CliError(str(exc.args[0]))
    _emit(args, to_cxs(sys))
    return EXIT_OK


def _parse_peripherals(sys, text):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError("bad --peripherals JSON: %s" % exc)
    if not isinstance(data, list):
        raise CliError("--peripherals must be a JSON array of arrays")
    masks = []
    for entry in data:
        if not isinstance(entry, list):
            raise CliError("each peripheral must be an array of names/indices")
        mask = 0
        for item in entry:
            if isinstance(item, int):
                if not (1 <= item <= sys.rank):
                    raise CliError("generator index %d out of range" % item)
                mask |= 1 << (item - 1)
            else:
                try:
                    mask |= 1 << sys.index_of(str(item))
                except KeyError as exc:
                    raise CliError(str(exc.args[0]))
        masks.append(mask)
    return masks


def cmd_rh_check(args):
    sys = load_system(args.file)
    ana = hindex.analysis(sys, args.max_rank)
    if args.peripherals:
        periph = _parse_peripherals(sys, args.peripherals)
    else:
        periph = ana.peripheral_structure()
        if periph is None:
            raise CliError("finite hypergraph index: no peripheral structure "
                           "to extract; pass --peripherals explicitly")
    try:
        verdict = ana.check_rh(periph)
    except ValueError as exc:
        raise CliError(str(exc))
    if verdict.ok:
        print("RH check: pass (%d peripheral subsets)" % len(periph))
        return EXIT_OK
    print("RH check: FAIL")
    for v in verdict.violations:
        sets = ", ".join("{%s}" % ",".join(names_of_mask(sys, m))
                         for m in v.witness)
        print("  %s: %s: %s" % (v.condition, v.detail, sets))
    return EXIT_RH


def _batch_one(item):
    path, max_rank = item
    row = {"file": Path(path).name}
    try:
        sys = load_system(path)
        ana = hindex.analysis(sys, max_rank)
        h = ana.hypergraph_index()
        div = ana.divergence_report()
        row.update({
            "rank": sys.rank,
            "betti": betti_of(sys),
            "h": "infinity" if h == INFINITY else h,
            "ends": ("infinity" if classify.ends(sys, max_rank) == INFINITY
                     else classify.ends(sys, max_rank)),
            "classification": div.label,
            "error": "",
        })
    except Exception as exc:  # recorded per row; batch carries on
        row.update({"rank": "", "betti": "", "h": "", "ends": "",
                    "classification": "", "error": str(exc)})
    return row


_BATCH_FIELDS = ["file", "rank", "betti", "h", "ends", "classification", "error"]


def cmd_batch(args):
    root = Path(args.dir)
    if not root.is_dir():
        raise CliError("%s is not a directory" % args.dir)
    paths = sorted(p for p in root.iterdir()
                   if p.suffix in (".cxs", ".json") and p.is_file())
    items = [(str(p), args.max_rank) for p in paths]
    if args.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_batch_one, items))
    else:
        rows = [_batch_one(item) for item in items]
    rows.sort(key=lambda r: r["file"])
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=_BATCH_FIELDS)
            writer.writeheader()
            writer.writerows(rows)
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        widths = {f: max([len(f)] + [len(str(r[f])) for r in rows])
                  for f in _BATCH_FIELDS}
        print("  ".join(f.ljust(widths[f]) for f in _BATCH_FIELDS))
        for r in rows:
            print("  ".join(str(r[f]).ljust(widths[f]) for f in _BATCH_FIELDS))
    if rows and all(r["error"] for r in rows):
        return EXIT_INPUT
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="coxhi",
        description="Hypergraph index and divergence/thickness structure "
                    "of Coxeter systems.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="machine-readable JSON output")
    common.add_argument("--trace", action="store_true",
                        help="include per-level equivalence-class detail")
    common.add_argument("--max-rank", type=int, default=20, dest="max_rank",
                        help="cap for exhaustive subset sweeps (default 20)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized helpers (reserved)")
    common.add_argument("--timing", action="store_true",
                        help="include timing in reports (breaks byte-for-byte "
                             "determinism)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="full analysis report")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", parents=[common],
                       help="component types and class-T membership")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("hindex", parents=[common], help="hypergraph index")
    p.add_argument("file")
    p.set_defaults(func=cmd_hindex)

    p = sub.add_parser("ends", parents=[common], help="number of ends")
    p.add_argument("file")
    p.set_defaults(func=cmd_ends)

    p = sub.add_parser("betti", parents=[common],
                       help="first Betti number of the Dynkin diagram")
    p.add_argument("file")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("duplex", parents=[common],
                       help="doubling construction on a right-angled system")
    p.add_argument("file")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", required=True, help="integer >= 5 or 'inf'")
    p.add_argument("-o", "--output")
    p.add_argument("--verify", action="store_true",
                   help="print the hypergraph indices of input and duplex")
    p.set_defaults(func=cmd_duplex)

    p = sub.add_parser("collapse", parents=[common],
                       help="collapse finite labels >= threshold")
    p.add_argument("file")
    p.add_argument("--threshold", type=int, default=7)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("family", parents=[common],
                       help="emit a generated system as CXS")
    fam = p.add_subparsers(dest="kind", required=True)
    g = fam.add_parser("gamma", parents=[common])
    g.add_argument("--d", type=int, required=True)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_family, kind="gamma")
    g = fam.add_parser("path4", parents=[common])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_family, kind="path4")
    g = fam.add_parser("catalog", parents=[common])
    g.add_argument("name")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_family, kind="catalog")

    p = sub.add_parser("rh-check", parents=[common],
                       help="check Caprace's relative-hyperbolicity conditions")
    p.add_argument("file")
    p.add_argument("--peripherals",
                   help="JSON array of generator-name/index arrays, or "
                        "@file; defaults to the extracted structure")
    p.set_defaults(func=cmd_rh_check)

    p = sub.add_parser("batch", parents=[common],
                       help="analyze a directory of CXS/JSON files")
    p.add_argument("dir")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", help="also write the summary as CSV")
    p.set_defaults(func=cmd_batch)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print("error: %s" % exc, file=_sys.stderr)
        return exc.code
    except (ParseError, RankLimitError) as exc:
        print("error: %s" % exc, file=_sys.stderr)
        return EXIT_INPUT
    except RankCapExceeded as exc:
        print("error: %s" % exc, file=_sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    _sys.exit(main())
