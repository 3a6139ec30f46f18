"""Command-line interface.

Exit codes: 0 all pass, 1 verification failure, 2 hypothesis violation,
3 parse error (including document dimension mismatches).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import workbench as wb
from .arith import Modulus
from .abelian import AbelianPGroup
from .correspond import brace_to_prelie, group_of_flows, roundtrip_brace_check, roundtrip_prelie_check
from .errors import AlgebraError, HypothesisViolated, InvariantViolation, ParseError
from .hopfgalois import hopf_galois_structures
from .report import VerificationReport


def _emit(args, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_text(report: VerificationReport, fmt: str) -> str:
    if fmt == "machine":
        return wb.suite_to_machine([report])
    return str(report)


def _load_object(path: str):
    doc = wb.load_document(path)
    if doc.kind == "brace":
        return wb.document_to_brace(doc)
    return wb.document_to_prelie(doc)


def cmd_verify_brace(args) -> int:
    B = wb.document_to_brace(wb.load_document(args.file))
    rep = B.verify(max_exhaustive=args.max_exhaustive, samples=args.samples)
    _emit(args, _report_text(rep, args.format))
    return 0 if rep.passed else 1


def cmd_verify_prelie(args) -> int:
    P = wb.document_to_prelie(wb.load_document(args.file))
    rep = P.verify()
    _emit(args, _report_text(rep, args.format))
    return 0 if rep.passed else 1


def cmd_to_prelie(args) -> int:
    B = wb.document_to_brace(wb.load_document(args.file))
    P = brace_to_prelie(B)
    _emit(args, wb.serialize(wb.prelie_to_document(P)))
    return 0


def cmd_to_brace(args) -> int:
    P = wb.document_to_prelie(wb.load_document(args.file))
    B = group_of_flows(P)
    _emit(args, wb.serialize(wb.brace_to_document(B)))
    return 0


def cmd_roundtrip(args) -> int:
    obj = _load_object(args.file)
    if isinstance(obj, wb.Brace):
        ok = roundtrip_brace_check(obj)
    else:
        ok = roundtrip_prelie_check(obj)
    _emit(args, "roundtrip: exact" if ok else "roundtrip: MISMATCH")
    return 0 if ok else 1


def cmd_series(args) -> int:
    obj = _load_object(args.file)
    rep = obj.series(args.kind)
    idx = rep.index if rep.nilpotent else rep.marker
    lines = [f"{args.kind} series sizes: {rep.sizes()}", f"index: {idx}"]
    if args.format == "machine":
        _emit(args, json.dumps({"kind": args.kind, "sizes": rep.sizes(), "index": rep.index}))
    else:
        _emit(args, "\n".join(lines))
    return 0


def cmd_ideals(args) -> int:
    obj = _load_object(args.file)
    report = VerificationReport(getattr(obj, "name", "") or args.file)
    if isinstance(obj, wb.Brace):
        G = obj.group
        n = G.modulus.n
        for i in range(0, n + 1):
            additive, _, equal = obj.frobenius_subgroups(i)
            report.add(f"p^{i} A equals the o-power subgroup", equal)
            report.add(f"p^{i} A is an ideal", obj.ideal_check(additive))
            report.add(f"ann(p^{i}) is an ideal", obj.ideal_check(G.annihilator(i)))
    else:
        soc = obj.socle()
        report.add("socle is an ideal", obj.ideal_check(soc))
        prod = obj.product_ideal(obj.group.full_subgroup())
        report.add("A.A is an ideal", obj.ideal_check(prod))
        solv = obj.solvable_series()
        report.add(
            "solvable series terminates",
            solv.nilpotent,
            f"sizes {solv.sizes()}",
        )
    _emit(args, _report_text(report, args.format))
    return 0 if report.passed else 1


def cmd_hopf_galois(args) -> int:
    P = wb.document_to_prelie(wb.load_document(args.file))
    structures = hopf_galois_structures(P)
    if args.format == "machine":
        payload = [
            [
                {"translation": list(h.translation),
                 "images": [list(img) for img in h.auto.images]}
                for h in s.elements
            ]
            for s in structures
        ]
        _emit(args, json.dumps({"count": len(structures), "structures": payload}))
        return 0
    lines = [f"{len(structures)} pairwise-distinct regular subgroups of Hol(A,+)"]
    for k, s in enumerate(structures):
        lines.append(f"structure {k}: size {len(s)}")
        for h in s.elements:
            lines.append(f"  {h.translation} with generator images {h.auto.images}")
    _emit(args, "\n".join(lines))
    return 0


def cmd_enumerate(args) -> int:
    bits = [int(t) for t in args.group.split(",")]
    if len(bits) < 3:
        raise InvariantViolation("--group needs p,n,e1[,e2,...]")
    p, n, inv = bits[0], bits[1], tuple(bits[2:])
    G = AbelianPGroup(Modulus(p, n), inv)
    rings = wb.enumerate_prelie(G, require_nilpotent=args.nilpotent)
    if args.format == "machine":
        payload = [
            {"name": P.name, "sc": {f"{i},{j}": list(P.sc[i][j])
                                    for i in range(G.rank) for j in range(G.rank)}}
            for P in rings
        ]
        _emit(args, json.dumps({"count": len(rings), "rings": payload}))
        return 0
    lines = [f"{len(rings)} structure(s) on {G!r}"
             + (" (nilpotent only)" if args.nilpotent else "")]
    for P in rings:
        sc = "; ".join(
            f"g{i}.g{j}={P.sc[i][j]}" for i in range(G.rank) for j in range(G.rank)
        )
        lines.append(f"  {P.name}: {sc}")
    _emit(args, "\n".join(lines))
    return 0


def cmd_catalog(args) -> int:
    if args.family != "radical":
        raise InvariantViolation(f"unknown catalog family {args.family!r}")
    B = wb.radical_brace(args.p, args.n)
    _emit(args, wb.serialize(wb.brace_to_document(B)))
    return 0


def cmd_suite(args) -> int:
    docs = [wb.load_document(f) for f in args.files]
    reports = wb.run_suite(docs)
    if args.format == "machine":
        _emit(args, wb.suite_to_machine(reports))
    else:
        _emit(args, "\n".join(str(r) for r in reports))
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-exhaustive", type=int, default=625,
                        help="largest |A| for full O(|A|^3) checks (sampled above)")
    common.add_argument("--samples", type=int, default=50000,
                        help="sample count for sampled-mode checks")
    common.add_argument("--output", help="write output to this file instead of stdout")
    common.add_argument("--format", choices=("text", "machine"), default="text")

    parser = argparse.ArgumentParser(
        prog="braceflows",
        description="Verify, convert and analyze finite braces and pre-Lie rings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        sp = sub.add_parser(name, parents=[common], **kwargs)
        sp.set_defaults(func=func)
        return sp

    sp = add("verify-brace", cmd_verify_brace, help="check the brace axioms of a file")
    sp.add_argument("file")
    sp = add("verify-prelie", cmd_verify_prelie, help="check the pre-Lie axioms of a file")
    sp.add_argument("file")
    sp = add("to-prelie", cmd_to_prelie, help="brace file -> associated pre-Lie ring")
    sp.add_argument("file")
    sp = add("to-brace", cmd_to_brace, help="pre-Lie file -> group of flows brace")
    sp.add_argument("file")
    sp = add("roundtrip", cmd_roundtrip, help="check the exact round-trip identity")
    sp.add_argument("file")
    sp = add("series", cmd_series, help="print a nilpotency series")
    sp.add_argument("file")
    sp.add_argument("--kind", choices=("left", "right", "strong"), default="strong")
    sp = add("ideals", cmd_ideals, help="run the ideal-theoretic checks")
    sp.add_argument("file")
    sp = add("hopf-galois", cmd_hopf_galois,
             help="emit the regular subgroups attached to a pre-Lie file")
    sp.add_argument("file")
    sp = add("enumerate", cmd_enumerate, help="enumerate pre-Lie rings on a group")
    sp.add_argument("--group", required=True, metavar="p,n,e1[,e2,...]")
    sp.add_argument("--nilpotent", action="store_true")
    sp = add("catalog", cmd_catalog, help="emit a catalog object")
    sp.add_argument("family", choices=("radical",))
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp = add("suite", cmd_suite, help="run the invariant battery over files")
    sp.add_argument("files", nargs="+")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3
    except InvariantViolation as exc:
        print(f"invalid document: {exc}", file=sys.stderr)
        return 3
    except HypothesisViolated as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return 2
    except AlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
