"""Command line front end: ``segrekit {classify,verify,audit,complexify,corpus}``.

Names refer to blocks in the bundled corpus, or in files given with ``--file``.
Every command builds one report tree; ``--format`` only chooses how it is printed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .corpus import CorpusError, Library, run_corpus
from .hypersurface import ComplexifyError, NotNormalError
from .invariants import ChainViolation, classify
from .maps import AuditFailure, audit, verify_hspm
from .parser import ParseError
from .series import DEFAULT_ORDER, MAX_ORDER, SeriesError


def _order(text: str) -> int:
    k = int(text)
    if not 1 <= k <= MAX_ORDER:
        raise argparse.ArgumentTypeError(f"order must be between 1 and {MAX_ORDER}")
    return k


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=_order, default=DEFAULT_ORDER, help="total-degree truncation K")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for the rank search")
    common.add_argument("--file", action="append", default=[], metavar="PATH",
                        help="extra declaration file (repeatable); its names shadow the corpus")

    ap = argparse.ArgumentParser(prog="segrekit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common], help="run the nondegeneracy checks on a hypersurface")
    p.add_argument("hypersurface")
    for name, text in (("verify", "check that a map is Segre preserving"),
                       ("audit", "check every theorem's conclusion on an instance")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("source")
        p.add_argument("target")
        p.add_argument("map")
    p = sub.add_parser("complexify", parents=[common], help="normal form of an imw = ... hypersurface")
    p.add_argument("hypersurface")
    sub.add_parser("corpus", parents=[common], help="check every bundled entry against its expectations")
    return ap


def _library(args) -> Library:
    extra = []
    for path in args.file:
        with open(path, encoding="utf-8") as fh:
            extra.append(fh.read())
    return Library.bundled(args.order, extra)


def cmd_classify(args) -> tuple[dict, int]:
    M = _library(args).hypersurface(args.hypersurface)
    report = classify(M, seed=args.seed).to_dict()
    report["Q"] = str(M.Q)
    report["real"] = M.reality.to_dict()
    return report, 0


def cmd_verify(args) -> tuple[dict, int]:
    lib = _library(args)
    M, Mp, H = lib.hypersurface(args.source), lib.hypersurface(args.target), lib.segre_map(args.map)
    v = verify_hspm(M, Mp, H)
    return {"source": M.name, "target": Mp.name, "map": H.name, "hspm": v.to_dict()}, 0 if v.is_proved else 1


def cmd_audit(args) -> tuple[dict, int]:
    lib = _library(args)
    M, Mp, H = lib.hypersurface(args.source), lib.hypersurface(args.target), lib.segre_map(args.map)
    report = audit(M, Mp, H, seed=args.seed)
    return {"source": M.name, "target": Mp.name, "map": H.name, "entries": report.to_dict()}, 0


def cmd_complexify(args) -> tuple[dict, int]:
    lib = _library(args)
    M = lib.hypersurface(args.hypersurface)
    if lib.block("hypersurface", args.hypersurface).get("imw") is None:
        raise CorpusError(f"hypersurface {args.hypersurface!r} is already given by Q")
    return {"hypersurface": M.name, "n": M.n, "order": M.order, "Q": str(M.Q), "exact": M.Q.exact,
            "normal": "proved", "real": M.reality.to_dict()}, 0


def cmd_corpus(args) -> tuple[dict, int]:
    extra = []
    for path in args.file:
        with open(path, encoding="utf-8") as fh:
            extra.append(fh.read())
    results = run_corpus(args.order, args.seed, extra)
    entries = {}
    first_failure = None
    for name, outcomes in results.items():
        ok = all(o.ok for o in outcomes)
        entries[name] = {"ok": ok, "checks": [o.to_dict() for o in outcomes]}
        if not ok and first_failure is None:
            bad = next(o for o in outcomes if not o.ok)
            first_failure = f"{name}: {bad.key} expected {bad.expected}, got {bad.actual}"
    report = {"entries": entries, "passed": sum(e["ok"] for e in entries.values()), "total": len(entries)}
    if first_failure:
        report["first_failure"] = first_failure
    return report, 0 if first_failure is None else 1


COMMANDS = {
    "classify": cmd_classify,
    "verify": cmd_verify,
    "audit": cmd_audit,
    "complexify": cmd_complexify,
    "corpus": cmd_corpus,
}


def render_text(tree, indent: int = 0) -> list[str]:
    """Indented ``key: value`` lines carrying exactly the content of the JSON form."""
    pad = "  " * indent
    lines = []
    if isinstance(tree, dict):
        for key, value in tree.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.extend(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(value)}")
    elif isinstance(tree, list):
        for item in tree:
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}-")
                lines.extend(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(pad + _scalar(tree))
    return lines


def _scalar(value) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value)


def emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    return "\n".join(render_text(report))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, status = COMMANDS[args.command](args)
    except AuditFailure as exc:
        print(f"audit failure: {exc}", file=sys.stderr)
        return 1
    except (CorpusError, ParseError, SeriesError, NotNormalError, ComplexifyError, ChainViolation, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(emit(report, args.format))
    if status and "first_failure" in report:
        print(f"first failing check: {report['first_failure']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
