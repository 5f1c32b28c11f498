"""Command-line front end.

Exit status: 0 success, 2 input error, 3 enumeration cap exceeded,
4 a bound certificate failed, 1 a table determinant disagreed with its ``det`` column.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path

from .bound import verify
from .coloring import (
    DEFAULT_CAP,
    EnumerationCapExceeded,
    canonical_colorings,
    determinant,
    enumerate_colorings,
    prime_factors,
    theorem_lower_bound,
)
from .diagram import DiagramError, LinkDiagram, PDError, load_diagram
from .tables import TableEntry, TableError, check_expected, find_entry, load_table, resolve_table


EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_CAP, EXIT_THEOREM = 0, 1, 2, 3, 4
PARTIAL_MARKER = "# PARTIAL OUTPUT: enumeration cap exceeded"


class InputError(Exception):
    pass


def parse_modulus(text: str) -> list[int]:
    """``7`` or an inclusive range ``2..30``."""
    try:
        if ".." in text:
            lo, hi = (int(p) for p in text.split("..", 1))
            values = list(range(lo, hi + 1))
        else:
            values = [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid modulus {text!r}") from None
    if not values or min(values) < 2:
        raise argparse.ArgumentTypeError("modulus must be at least 2")
    return values


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _diagrams(args) -> list[LinkDiagram]:
    """Resolve the single diagram source into one or more diagrams."""
    try:
        if args.pd is not None:
            return [load_diagram(args.pd)]
        if args.file is not None:
            text = Path(args.file).read_text()
            d = load_diagram(text)
            return [d if d.name else load_diagram(text, name=Path(args.file).stem)]
        if args.knot is not None:
            try:
                entry = find_entry(args.knot)
            except KeyError:
                raise InputError(f"unknown table entry {args.knot!r}") from None
            return [entry.diagram()]
        return [e.diagram() for e in load_table(resolve_table(args.table))]
    except OSError as exc:
        raise InputError(f"cannot read {exc.filename}: {exc.strerror}") from None
    except (PDError, DiagramError, TableError) as exc:
        raise InputError(str(exc)) from None


def _moduli(args, d: LinkDiagram, det_value: int) -> list[int]:
    if args.n is None:
        return []
    if len(args.n) == 1:
        return args.n
    # in a range, skip n with a prime factor not dividing det: no effective coloring exists there
    return [n for n in args.n if det_value and all(det_value % p == 0 for p in prime_factors(n))]


def _label(d: LinkDiagram) -> str:
    return d.name if d.name is not None else "-"


@contextmanager
def _output(args):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            yield fh
    else:
        yield sys.stdout


def cmd_det(args) -> int:
    with _output(args) as out:
        for d in _diagrams(args):
            value = determinant(d)
            if args.format == "json":
                out.write(json.dumps({"name": d.name, "det": value}) + "\n")
            elif args.format == "csv":
                out.write(f"{_label(d)},{value}\n")
            elif d.name is None:
                out.write(f"{value}\n")
            else:
                out.write(f"{d.name} {value}\n")
    return EXIT_OK


def cmd_colorings(args) -> int:
    if args.n is None or len(args.n) != 1:
        raise InputError("colorings needs a single modulus -n")
    n = args.n[0]
    status = EXIT_OK
    with _output(args) as out:
        for d in _diagrams(args):
            counts = {"trivial": 0, "nontrivial": 0, "effective": 0}
            try:
                for col, cls in enumerate_colorings(d, n, args.filter, args.cap):
                    counts["trivial" if cls.is_trivial else "nontrivial"] += 1
                    counts["effective"] += cls.is_effective
                    if args.format == "json":
                        out.write(json.dumps({
                            "diagram_name": d.name, "n": n, "coloring": list(col.values),
                            "class": cls.label, "palette": cls.palette_size,
                            "p_trivial": sorted(cls.p_trivial_primes),
                        }) + "\n")
                    else:
                        sep = "," if args.format == "csv" else " "
                        out.write(f"{_label(d)}{sep}{' '.join(map(str, col.values))}{sep}{cls.label}{sep}{cls.palette_size}\n")
            except EnumerationCapExceeded as exc:
                out.write(f"{PARTIAL_MARKER} ({exc})\n")
                status = EXIT_CAP
            total = sum(counts[k] for k in ("trivial", "nontrivial"))
            summary = (f"{_label(d)} n={n}: {total} listed, {counts['trivial']} trivial, "
                       f"{counts['nontrivial']} nontrivial, {counts['effective']} effective")
            if args.format == "human":
                out.write(f"# {summary}\n")
            else:
                print(summary, file=sys.stderr)
    return status


def cmd_mincolors(args) -> int:
    if args.n is None:
        raise InputError("mincolors needs -n")
    filt = args.filter if args.filter != "all" else "effective"
    status = EXIT_OK
    with _output(args) as out:
        for d in _diagrams(args):
            for n in args.n:
                lower = theorem_lower_bound(n)
                try:
                    if args.full_enumeration:
                        palettes = [c.palette_size for c, _ in enumerate_colorings(d, n, filt, args.cap)]
                    else:
                        palettes = [c.palette_size for c, _ in canonical_colorings(d, n, filt, args.cap)]
                except EnumerationCapExceeded as exc:
                    out.write(f"{PARTIAL_MARKER} ({exc})\n")
                    status = EXIT_CAP
                    continue
                best = min(palettes) if palettes else None
                if args.format == "json":
                    out.write(json.dumps({
                        "diagram_name": d.name, "n": n, "filter": filt,
                        "lower": lower, "diagram_min": best, "interval": [lower, best],
                    }) + "\n")
                elif args.format == "csv":
                    out.write(f"{_label(d)},{n},{filt},{lower},{'' if best is None else best}\n")
                else:
                    shown = "none" if best is None else best
                    out.write(f"{_label(d)} n={n} {filt}: lower {lower}, diagram-min {shown}; "
                              f"minimal number of colors lies in [{lower}, {shown}]\n")
    return status


def _verify_one(d: LinkDiagram, moduli, cap: int, full: bool):
    """Certificates for one diagram; returns (records, per-n counts, cap hit)."""
    det_value = determinant(d)
    records, counts, capped = [], {}, False
    if det_value == 0:
        return records, {"det_zero": True}, capped
    for n in moduli:
        source = enumerate_colorings if full else canonical_colorings
        made = 0
        try:
            for col, _ in source(d, n, "effective", cap):
                records.append(verify(d, col).to_record())
                made += 1
        except EnumerationCapExceeded:
            capped = True
            records.append({"partial": True, "diagram_name": d.name, "n": n})
        counts[n] = made
    return records, counts, capped


def _verify_task(payload):
    d, moduli, cap, full = payload
    return _verify_one(d, moduli, cap, full)


CERT_CSV_FIELDS = ["n", "diagram_name", "coloring", "l", "det_B", "row_types",
                   "n_le_det_B", "det_B_le_2_pow_l_minus_1", "l_ge_1_plus_log2_n", "kink_flag", "valid"]


def _cert_csv_row(rec) -> list:
    c = rec["checks"]
    return [rec["n"], rec["diagram_name"], " ".join(map(str, rec["coloring"])), rec["l"], rec["det_B"],
            " ".join(rec["row_types"]), c["n_le_det_B"], c["det_B_le_2_pow_l_minus_1"],
            c["l_ge_1_plus_log2_n"], rec["kink_flag"], rec["valid"]]


def cmd_verify(args) -> int:
    if args.n is None:
        raise InputError("verify needs -n")
    diagrams = _diagrams(args)
    payloads = [(d, _moduli(args, d, determinant(d)), args.cap, args.full_enumeration) for d in diagrams]
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_task, payloads))
    else:
        results = [_verify_task(p) for p in payloads]

    total = invalid = 0
    capped = False
    with _output(args) as out:
        writer = csv.writer(out, lineterminator="\n") if args.format == "csv" else None
        if writer:
            writer.writerow(CERT_CSV_FIELDS)
        for d, (records, counts, hit) in zip(diagrams, results):
            capped = capped or hit
            for rec in records:
                if rec.get("partial"):
                    out.write(f"{PARTIAL_MARKER} ({_label(d)}, n={rec['n']})\n")
                    continue
                total += 1
                invalid += not rec["valid"]
                if writer:
                    writer.writerow(_cert_csv_row(rec))
                elif args.format == "json":
                    out.write(json.dumps(rec) + "\n")
                else:
                    out.write(f"{_label(d)} n={rec['n']} coloring={rec['coloring']} l={rec['l']} "
                              f"det_B={rec['det_B']} {'valid' if rec['valid'] else 'INVALID'}\n")
            if counts.get("det_zero"):
                print(f"{_label(d)}: determinant 0, outside the theorem's hypothesis; skipped", file=sys.stderr)
            elif not any(counts.values()):
                print(f"{_label(d)}: no effective colorings", file=sys.stderr)
            else:
                per_n = ", ".join(f"n={n}: {c}" for n, c in counts.items() if c)
                print(f"{_label(d)}: {per_n}", file=sys.stderr)
    print(f"{total} certificates, {invalid} invalid", file=sys.stderr)
    if invalid:
        return EXIT_THEOREM
    return EXIT_CAP if capped else EXIT_OK


def _table_row(payload):
    entry, moduli, cap = payload
    d = entry.diagram()
    det_value = determinant(d)
    row = [entry.name, d.crossing_count, det_value]
    capped = invalid = False
    for n in moduli:
        try:
            eff = sum(1 for _ in enumerate_colorings(d, n, "effective", cap))
            canon = list(canonical_colorings(d, n, "effective", cap))
        except EnumerationCapExceeded:
            row += ["cap", "cap", theorem_lower_bound(n), "cap"]
            capped = True
            continue
        best = min((c.palette_size for c, _ in canon), default=None)
        if not canon:
            status = "none"
        elif det_value == 0:
            status = "n/a"
        elif all(verify(d, c).valid for c, _ in canon):
            status = "valid"
        else:
            status = "invalid"
            invalid = True
        row += [eff, "" if best is None else best, theorem_lower_bound(n), status]
    return row, capped, invalid


def cmd_table(args) -> int:
    source = args.table or "knots8.jsonl"
    try:
        entries: list[TableEntry] = load_table(resolve_table(source))
    except TableError as exc:
        raise InputError(str(exc)) from None
    report = check_expected(entries)
    for name, expected, got in report.mismatches:
        print(f"{name}: expected det {expected}, computed {got}", file=sys.stderr)
    moduli = args.n or []
    header = ["name", "crossings", "det"]
    for n in moduli:
        header += [f"effective_n{n}", f"min_palette_n{n}", f"bound_n{n}", f"certificate_n{n}"]
    payloads = [(e, moduli, args.cap) for e in entries]
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_table_row, payloads))
    else:
        results = [_table_row(p) for p in payloads]
    with _output(args) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row, _, _ in results:
            writer.writerow(row)
    if any(inv for _, _, inv in results):
        return EXIT_THEOREM
    if any(cap for _, cap, _ in results):
        return EXIT_CAP
    return EXIT_OK if report.ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linkchroma",
        description="Fox n-colorings, link determinants and the palette lower bound 2^(l-1) >= n.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--pd", help="inline PD code, PD[X[...],...] or JSON")
    src.add_argument("--file", help="file holding one PD code (text or JSON)")
    src.add_argument("--knot", help="entry name in the bundled or $LINKCHROMA_TABLE_DIR tables")
    src.add_argument("--table", help="JSON-lines table path or name")
    common.add_argument("-n", type=parse_modulus, help="modulus N or inclusive range A..B")
    common.add_argument("--filter", choices=("all", "nontrivial", "effective"), default=None)
    common.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="enumeration cap")
    common.add_argument("--format", choices=("human", "json", "csv"), default=None)
    common.add_argument("--out", help="write data output here instead of stdout")
    common.add_argument("--full-enumeration", action="store_true",
                        help="use every coloring instead of one per affine orbit")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes for multi-diagram runs")

    for name, func, fmt, filt, help_ in (
        ("det", cmd_det, "human", "all", "print link determinants"),
        ("colorings", cmd_colorings, "human", "all", "list n-colorings with their classification"),
        ("mincolors", cmd_mincolors, "human", "effective", "diagram-level minimal palette and the lower bound"),
        ("verify", cmd_verify, "json", "effective", "emit bound certificates, one JSON object per line"),
        ("table", cmd_table, "csv", "effective", "CSV summary over a table"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func, default_format=fmt, default_filter=filt)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.format is None:
        args.format = args.default_format
    if args.filter is None:
        args.filter = args.default_filter
    sources = [args.pd, args.file, args.knot, args.table]
    if args.command != "table" and all(s is None for s in sources):
        parser.error("one of --pd, --file, --knot, --table is required")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
