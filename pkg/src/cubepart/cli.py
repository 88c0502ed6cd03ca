"""Command line interface.

Exit status: 0 success, 1 semantic failure (e.g. a partition is not
equitable), 2 bad input, 3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .analysis import IdentityViolation, full_report, group_table
from .codec import (
    NUM_RECORDS,
    CorruptRecord,
    PartitionFile,
    decode_appendix,
    load_appendix,
    parse_partition_files,
)
from .partition import TARGET, QuotientMatrix, equitable_violation, strength, strength_plus
from .search import FAMILIES, ValidationError, family_config, run_pipeline

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


def _quotient(text: str | None, n: int | None = None) -> QuotientMatrix | None:
    if text is None:
        return None
    try:
        S = QuotientMatrix.parse(text)
    except ValueError as exc:
        raise InputError(f"bad quotient {text!r}: {exc}") from None
    if n is not None and S.n != n:
        raise InputError(f"quotient {S} has row sum {S.n}, not n={n}")
    return S


def _read_records(paths: list[str]) -> list[tuple[str, PartitionFile]]:
    out = []
    for p in paths:
        try:
            text = sys.stdin.read() if p == "-" else Path(p).read_text()
            recs = parse_partition_files(text)
        except (OSError, ValueError) as exc:
            raise InputError(f"{p}: {exc}") from None
        if not recs:
            raise InputError(f"{p}: no partition records")
        for i, rec in enumerate(recs):
            name = rec.meta.get("index") or (Path(p).stem if len(recs) == 1 else f"{Path(p).stem}:{i + 1}")
            out.append((name, rec))
    return out


def _record_quotient(rec: PartitionFile, override: QuotientMatrix | None) -> QuotientMatrix:
    S = override or rec.quotient
    if S is None:
        raise InputError("no quotient given (use --quotient or a quotient= header)")
    if S.n != rec.n:
        raise InputError(f"quotient {S} has row sum {S.n}, not n={rec.n}")
    return S


# subcommands


def cmd_verify(args) -> int:
    override = _quotient(args.quotient)
    status = EXIT_OK
    for name, rec in _read_records(args.files):
        S = _record_quotient(rec, override)
        P = rec.partition()
        ok = equitable_violation(P, S) is None
        t = strength(P.cell_plus, P.n)
        plus = strength_plus(P.cell_plus, P.n, t)
        print(f"{name}: size={len(P)} equitable={'yes' if ok else 'no'} strength={t} "
              f"plus={'yes' if plus else 'no'}")
        if not ok:
            status = EXIT_FAIL
    return status


def _appendix_index(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise InputError(f"bad index {text!r}") from None
    if not 1 <= k <= NUM_RECORDS:
        raise InputError(f"index must be in 1..{NUM_RECORDS}, got {k}")
    return k


def cmd_decode(args) -> int:
    records = load_appendix(args.appendix)
    if args.all == (args.index is not None):
        raise InputError("give either an index or --all")
    indices = sorted(records) if args.all else [_appendix_index(args.index)]
    out_dir = Path(args.output) if args.output else None
    if args.all and out_dir is None:
        raise InputError("--all needs --output DIR")
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for k in indices:
        if k not in records:
            raise InputError(f"record {k} missing from the listing")
        P = decode_appendix(records[k])
        rec = PartitionFile.from_partition(P, TARGET, index=k)
        if out_dir:
            (out_dir / f"partition_{k:03d}.txt").write_text(rec.format())
        else:
            sys.stdout.write(rec.format())
        t = strength(P.cell_plus, P.n)
        summary.append(f"{k} size={len(P)} strength={t} plus={'yes' if strength_plus(P.cell_plus, P.n, t) else 'no'}")
    if out_dir and args.all:
        (out_dir / "summary.txt").write_text("\n".join(summary) + "\n")
        print(f"wrote {len(indices)} partitions to {out_dir}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    override = _quotient(args.quotient)
    items = []
    if args.appendix_all:
        from .codec import decode_all

        items += [(str(k), P, TARGET) for k, P in decode_all().items()]
    for name, rec in _read_records(args.files):
        items.append((name, rec.partition(), _record_quotient(rec, override)))
    if not items:
        raise InputError("nothing to analyze")
    status = EXIT_OK
    reports = []
    for name, P, S in items:
        if equitable_violation(P, S) is not None:
            logging.warning("%s is not %s-equitable; skipped", name, S)
            status = EXIT_FAIL
            continue
        rep = full_report(P, S, name, extended=args.extended)
        reports.append(rep)
        if not args.table:
            print(rep.as_json() if args.format == "json" else rep.as_text())
    if args.table:
        sys.stdout.write(group_table(reports))
    return status


def _level(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(",")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected r0,r1, got {text!r}") from None


def cmd_classify(args) -> int:
    S = _quotient(args.quotient, args.n) if args.quotient else (TARGET if args.n == 12 else None)
    if S is None:
        raise InputError("--quotient is required unless n=12")
    if S.n != args.n:
        raise InputError(f"quotient {S} has row sum {S.n}, not n={args.n}")
    try:
        cfg = family_config(args.family, args.n, S, leading=not args.no_leading, threads=args.threads,
                            checkpoint_dir=args.checkpoint_dir, stop_after_level=args.stop_after_level)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    progress = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else (lambda msg: None)
    res = run_pipeline(cfg, progress)
    if args.format == "json":
        doc = {
            "n": args.n,
            "quotient": S.as_text(),
            "family": args.family,
            "levels": [{"level": list(r.level), "raw": r.raw, "classes": r.count, "leading": r.leading_count}
                       for r in res.levels],
            "final": None if res.stopped_at else [
                {"aut": f.aut_order, "size": len(f.partition), "words": sorted(f.partition.cell_plus)}
                for f in res.final],
        }
        print(json.dumps(doc))
    else:
        for line in res.summary_lines():
            print(line)
    if args.output and res.stopped_at is None:
        recs = [PartitionFile.from_partition(f.partition, S, aut=f.aut_order).format() for f in res.final]
        Path(args.output).write_text("".join(recs))
    return EXIT_OK


def cmd_construct(args) -> int:
    from .constructions import AdditionScheme, construct, fingerprint, identify

    try:
        scheme = AdditionScheme.parse(args.scheme)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if scheme.width != 6:
        raise InputError(f"scheme {scheme} must cover the 6 coordinates of the base")
    P = construct(scheme)
    fp = fingerprint(P)
    match = identify(P)
    print(f"scheme={scheme} size={len(P)} cycles={fp.cycle_formula.replace(' ', '*')} aut={fp.aut_order} "
          f"periods={fp.periods} match={match if match is not None else 'none'}")
    if args.output:
        Path(args.output).write_text(PartitionFile.from_partition(P, TARGET, scheme=str(scheme)).format())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cubepart", description="Equitable 2-partitions of hypercubes.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check partition files for equitability")
    p.add_argument("files", nargs="+")
    p.add_argument("--quotient", help="a,b,c,d (default: from the file header)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decode", help="decode records of the shipped 103-class listing")
    p.add_argument("index", nargs="?")
    p.add_argument("--all", action="store_true")
    p.add_argument("--output", "-o", help="output directory")
    p.add_argument("--appendix", help="alternative listing file")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("analyze", help="report invariants of partitions")
    p.add_argument("files", nargs="*")
    p.add_argument("--appendix-all", action="store_true", help="analyze all 103 listed classes")
    p.add_argument("--quotient")
    p.add_argument("--table", action="store_true", help="group by cycle formula and aut order")
    p.add_argument("--extended", action="store_true", help="add cycle direction statistics")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="run the classification pipeline")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--quotient")
    p.add_argument("--family", choices=FAMILIES, default="all")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--checkpoint-dir")
    p.add_argument("--stop-after-level", type=_level)
    p.add_argument("--no-leading", action="store_true", help="extend every class, not only leading ones")
    p.add_argument("--output", "-o", help="write final partitions here")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("construct", help="double the Q6 base partition")
    p.add_argument("scheme", help='e.g. "z2z2z2z2z2z2", "z4z4z4", "z4z2z2z2z2", "z4z4z2z2"')
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_construct)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (InputError, CorruptRecord) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValidationError, IdentityViolation, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
