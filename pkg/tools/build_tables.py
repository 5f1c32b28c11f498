"""Regenerate the bundled tables' ``det`` column from the brute-force coloring-count oracle.

Usage: python tools/build_tables.py SOURCE.json

SOURCE is a JSON list of [name, pd] pairs. Knots (one component) go to
knots8.jsonl, everything else to links.jsonl.
"""
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))
sys.path.insert(0, str(ROOT / "src"))

from oracles import determinant_from_counts  # noqa: E402
from linkchroma.diagram import PDCode, build_diagram  # noqa: E402


def main(source):
    knots, links = [], []
    for name, pd, *_ in json.loads(Path(source).read_text()):
        d = build_diagram(PDCode(tuple(map(tuple, pd)), name=name))
        triples = [(c.over, c.under_in, c.under_out) for c in d.crossings]
        det = determinant_from_counts(triples, len(d.arcs))
        line = json.dumps({"name": name, "pd": pd, "det": det})
        (knots if d.component_count == 1 else links).append(line)
        print(name, det, file=sys.stderr)
    data = ROOT / "src" / "linkchroma" / "data"
    (data / "knots8.jsonl").write_text("\n".join(knots) + "\n")
    (data / "links.jsonl").write_text("\n".join(links) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
