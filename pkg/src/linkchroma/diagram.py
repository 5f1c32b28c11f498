"""Link diagrams from planar-diagram (PD) codes.

A PD code lists, for every crossing, the four incident edge labels read
counterclockwise from the incoming under-edge, so positions 0 and 2 are the
under-strand and positions 1 and 3 the over-strand. Colorings live on arcs,
which only break at undercrossings, so the two over-edges of every crossing
are fused into one arc.
"""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field

__all__ = [
    "PDError",
    "PDSyntaxError",
    "DiagramError",
    "PDCode",
    "Crossing",
    "LinkDiagram",
    "parse_pd",
    "build_diagram",
    "load_diagram",
]


class PDError(ValueError):
    """Invalid PD code."""


class PDSyntaxError(PDError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DiagramError(ValueError):
    """A PD code that does not describe a usable link diagram."""


@dataclass(frozen=True)
class PDCode:
    crossings: tuple[tuple[int, int, int, int], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(int(v) for v in c) for c in self.crossings))
        validate_pd(self.crossings)

    def __len__(self) -> int:
        return len(self.crossings)

    @property
    def edge_count(self) -> int:
        return 2 * len(self.crossings)

    def to_text(self) -> str:
        return "PD[" + ",".join("X[{},{},{},{}]".format(*c) for c in self.crossings) + "]"

    def to_json(self) -> str:
        obj = {"pd": [list(c) for c in self.crossings]}
        if self.name is not None:
            obj = {"name": self.name, **obj}
        return json.dumps(obj)

    def __str__(self) -> str:
        return self.to_text()


def validate_pd(crossings) -> None:
    if not crossings:
        raise PDError("empty diagram unsupported")
    for c in crossings:
        if len(c) != 4:
            raise PDError(f"crossing {list(c)} does not have 4 edge labels")
    counts = Counter(v for c in crossings for v in c)
    bad = sorted(v for v, k in counts.items() if k != 2)
    if bad:
        raise PDError(f"edge labels must appear exactly twice; offending labels {bad}")
    expected = set(range(1, 2 * len(crossings) + 1))
    if set(counts) != expected:
        raise PDError(f"edge labels must be exactly 1..{2 * len(crossings)}")


_TOKEN = re.compile(r"\s*(?:(PD|X)|(\[)|(\])|(,)|(-?\d+))")


def _parse_text(text: str) -> list[tuple[int, ...]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise PDSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                                len(text) - len(text[pos:].lstrip()))
        kind = m.lastindex
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append((0, "<end>", len(text)))

    i = 0

    def expect(kind, what):
        nonlocal i
        k, val, at = tokens[i]
        if k != kind or (kind == 1 and val != what):
            raise PDSyntaxError(f"expected {what!r}, found {val!r}", at)
        i += 1
        return val

    expect(1, "PD")
    expect(2, "[")
    crossings = []
    if tokens[i][0] != 3:
        while True:
            expect(1, "X")
            expect(2, "[")
            labels = []
            while True:
                k, val, at = tokens[i]
                if k != 5:
                    raise PDSyntaxError(f"expected an edge label, found {val!r}", at)
                if int(val) < 1:
                    raise PDSyntaxError(f"edge labels must be >= 1, found {val}", at)
                labels.append(int(val))
                i += 1
                if tokens[i][0] == 4:
                    i += 1
                    continue
                break
            at = tokens[i][2]
            expect(3, "]")
            if len(labels) != 4:
                raise PDSyntaxError(f"crossing has {len(labels)} labels, expected 4", at)
            crossings.append(tuple(labels))
            if tokens[i][0] == 4:
                i += 1
                continue
            break
    expect(3, "]")
    if tokens[i][0] != 0:
        raise PDSyntaxError(f"trailing input {tokens[i][1]!r}", tokens[i][2])
    return crossings


def parse_pd(text: str) -> PDCode:
    """Parse ``PD[X[a,b,c,d],...]`` text or its JSON form ``{"name": ..., "pd": [[a,b,c,d],...]}``."""
    stripped = text.strip()
    name = None
    if stripped.startswith(("{", "[")):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise PDSyntaxError(f"invalid JSON: {exc.msg}", exc.pos) from None
        if isinstance(obj, dict):
            if "pd" not in obj:
                raise PDError("JSON diagram needs a 'pd' field")
            name = obj.get("name")
            obj = obj["pd"]
        if not isinstance(obj, list) or not all(
            isinstance(c, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in c)
            for c in obj
        ):
            raise PDError("'pd' must be a list of integer 4-lists")
        if any(v < 1 for c in obj for v in c):
            raise PDError("edge labels must be >= 1")
        crossings = [tuple(c) for c in obj]
    else:
        crossings = _parse_text(stripped)
    return PDCode(tuple(crossings), name=name)


@dataclass(frozen=True)
class Crossing:
    over: int
    under_in: int
    under_out: int

    @property
    def is_kink(self) -> bool:
        return self.over in (self.under_in, self.under_out)


@dataclass(frozen=True)
class LinkDiagram:
    """Arcs are numbered 0..k-1 by their smallest PD edge label."""

    arcs: tuple[int, ...]
    crossings: tuple[Crossing, ...]
    component_count: int
    name: str | None = None
    arc_edges: tuple[tuple[int, ...], ...] = ()

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def has_kink(self) -> bool:
        return any(c.is_kink for c in self.crossings)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def classes(self):
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def _count_components(pd: PDCode) -> int:
    occurrences: dict[int, list[tuple[int, int]]] = {}
    for ci, c in enumerate(pd.crossings):
        for p, e in enumerate(c):
            occurrences.setdefault(e, []).append((ci, p))
    unvisited = set(occurrences)
    components = 0
    while unvisited:
        start = min(unvisited)
        components += 1
        edge = start
        ci, p = occurrences[edge][0]
        for _ in range(pd.edge_count + 1):
            unvisited.discard(edge)
            # the strand continues straight through the crossing
            nxt = pd.crossings[ci][(p + 2) % 4]
            ends = occurrences.get(nxt, [])
            others = [o for o in ends if o != (ci, (p + 2) % 4)] or ends
            if len(ends) != 2:
                raise DiagramError(f"edge {nxt} does not have two endpoints")
            edge = nxt
            ci, p = others[0]
            if edge == start:
                break
        else:
            raise DiagramError(f"strand starting at edge {start} never closes")
    return components


def build_diagram(pd: PDCode) -> LinkDiagram:
    """Fuse over-edges into arcs and record each crossing's over and under arcs."""
    components = _count_components(pd)
    uf = _UnionFind(range(1, pd.edge_count + 1))
    for c in pd.crossings:
        uf.union(c[1], c[3])
    classes = sorted(sorted(v) for v in uf.classes().values())
    arc_of = {e: i for i, edges in enumerate(classes) for e in edges}

    under_edges = {c[0] for c in pd.crossings} | {c[2] for c in pd.crossings}
    for edges in classes:
        if not under_edges.intersection(edges):
            raise DiagramError(
                f"a component made of edges {edges} never passes under a crossing (split diagram)"
            )

    crossings = tuple(
        Crossing(over=arc_of[c[1]], under_in=arc_of[c[0]], under_out=arc_of[c[2]])
        for c in pd.crossings
    )
    return LinkDiagram(
        arcs=tuple(range(len(classes))),
        crossings=crossings,
        component_count=components,
        name=pd.name,
        arc_edges=tuple(tuple(e) for e in classes),
    )


def load_diagram(text: str, name: str | None = None) -> LinkDiagram:
    pd = parse_pd(text)
    d = build_diagram(pd)
    if name is not None:
        d = LinkDiagram(d.arcs, d.crossings, d.component_count, name, d.arc_edges)
    return d
