"""Bundled knot and link tables in JSON-lines form.

One entry per line::

    {"name": "3_1", "pd": [[1,4,2,5],[3,6,4,1],[5,2,6,3]], "det": 3}

``det`` is optional and serves as a regression oracle for the determinant.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .coloring import determinant
from .diagram import LinkDiagram, PDCode, PDError, build_diagram

__all__ = [
    "TABLE_DIR_ENV",
    "BUNDLED_TABLES",
    "TableError",
    "TableEntry",
    "TableReport",
    "load_table",
    "parse_table",
    "serialize_table",
    "check_expected",
    "resolve_table",
    "bundled_entries",
    "find_entry",
]

TABLE_DIR_ENV = "LINKCHROMA_TABLE_DIR"
BUNDLED_TABLES = ("knots8.jsonl", "links.jsonl")


class TableError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line


@dataclass(frozen=True)
class TableEntry:
    name: str
    pd: PDCode
    expected_det: int | None = None

    def diagram(self) -> LinkDiagram:
        return build_diagram(PDCode(self.pd.crossings, name=self.name))

    def to_json(self) -> str:
        obj = {"name": self.name, "pd": [list(c) for c in self.pd.crossings]}
        if self.expected_det is not None:
            obj["det"] = self.expected_det
        return json.dumps(obj)


def parse_table(text: str, source: str | None = None) -> list[TableEntry]:
    entries: list[TableEntry] = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TableError(f"invalid JSON ({exc.msg})", lineno, source) from None
        if not isinstance(obj, dict) or not isinstance(obj.get("name"), str) or "pd" not in obj:
            raise TableError("entry needs a string 'name' and a 'pd' list", lineno, source)
        name = obj["name"]
        if name in seen:
            raise TableError(f"duplicate name {name!r} (first on line {seen[name]})", lineno, source)
        pd = obj["pd"]
        if not isinstance(pd, list) or not all(
            isinstance(c, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in c) for c in pd
        ):
            raise TableError("'pd' must be a list of integer 4-lists", lineno, source)
        det = obj.get("det")
        if det is not None and (not isinstance(det, int) or isinstance(det, bool) or det < 0):
            raise TableError("'det' must be a non-negative integer", lineno, source)
        try:
            code = PDCode(tuple(tuple(c) for c in pd), name=name)
            build_diagram(code)
        except (PDError, ValueError) as exc:
            raise TableError(f"{name}: {exc}", lineno, source) from None
        seen[name] = lineno
        entries.append(TableEntry(name, code, det))
    return entries


def load_table(path: str | os.PathLike) -> list[TableEntry]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise TableError(f"cannot read table: {exc.strerror}", source=str(path)) from None
    return parse_table(text, source=str(path))


def serialize_table(entries) -> str:
    return "".join(e.to_json() + "\n" for e in entries)


@dataclass
class TableReport:
    checked: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    mismatches: list[tuple[str, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def check_expected(entries) -> TableReport:
    """Compare computed determinants with every entry's ``det`` column."""
    report = TableReport()
    for e in entries:
        if e.expected_det is None:
            report.skipped.append(e.name)
            continue
        got = determinant(e.diagram())
        report.checked.append(e.name)
        if got != e.expected_det:
            report.mismatches.append((e.name, e.expected_det, got))
    return report


def _bundled_dir():
    return resources.files("linkchroma") / "data"


def resolve_table(name_or_path: str) -> Path:
    """A table given by path, or by file name under $LINKCHROMA_TABLE_DIR or the bundled data."""
    p = Path(name_or_path)
    if p.exists():
        return p
    env = os.environ.get(TABLE_DIR_ENV)
    if env:
        for d in env.split(os.pathsep):
            if d and (Path(d) / name_or_path).exists():
                return Path(d) / name_or_path
    bundled = _bundled_dir() / name_or_path
    if bundled.is_file():
        return Path(str(bundled))
    raise TableError(f"table not found: {name_or_path}")


def _search_paths() -> list[Path]:
    paths = []
    env = os.environ.get(TABLE_DIR_ENV)
    if env:
        for d in env.split(os.pathsep):
            if d and Path(d).is_dir():
                paths.extend(sorted(Path(d).glob("*.jsonl")))
    paths.extend(Path(str(_bundled_dir() / t)) for t in BUNDLED_TABLES)
    return paths


def bundled_entries() -> list[TableEntry]:
    out = []
    for t in BUNDLED_TABLES:
        out.extend(load_table(Path(str(_bundled_dir() / t))))
    return out


def find_entry(name: str) -> TableEntry:
    """Look ``name`` up in $LINKCHROMA_TABLE_DIR tables first, then the bundled ones."""
    for path in _search_paths():
        for e in load_table(path):
            if e.name == name:
                return e
    raise KeyError(f"unknown table entry {name!r}")
