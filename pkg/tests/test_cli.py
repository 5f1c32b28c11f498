import csv
import io
import json
import subprocess
import sys

import pytest

from linkchroma.cli import PARTIAL_MARKER, main

from conftest import TREFOIL


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestDet:
    def test_inline(self, capsys):
        code, out, _ = run(capsys, "det", "--pd", TREFOIL)
        assert code == 0 and out.strip() == "3"

    def test_knot(self, capsys):
        code, out, _ = run(capsys, "det", "--knot", "4_1")
        assert code == 0 and out.split()[-1] == "5"

    def test_unknown(self, capsys):
        code, _, err = run(capsys, "det", "--knot", "nosuch")
        assert code == 2 and "unknown table entry" in err

    def test_file(self, capsys, tmp_path):
        p = tmp_path / "hopf.json"
        p.write_text('{"name": "hopf", "pd": [[1,3,2,4],[3,1,4,2]]}')
        code, out, _ = run(capsys, "det", "--file", str(p), "--format", "json")
        assert code == 0 and json.loads(out) == {"name": "hopf", "det": 2}

    def test_bad_pd(self, capsys):
        code, _, err = run(capsys, "det", "--pd", "PD[X[1,2]]")
        assert code == 2 and "position" in err

    def test_needs_source(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["det"])
        assert info.value.code == 2

    def test_table_det_csv(self, capsys):
        code, out, _ = run(capsys, "det", "--table", "links.jsonl", "--format", "csv")
        assert code == 0 and out.splitlines()[0] == "L2a1,2"


class TestColorings:
    def test_effective(self, capsys):
        code, out, _ = run(capsys, "colorings", "--knot", "3_1", "-n", "3", "--filter", "effective")
        lines = [l for l in out.splitlines() if not l.startswith("#")]
        assert code == 0 and len(lines) == 6
        assert all(l.endswith("effective 3") for l in lines)

    def test_none(self, capsys):
        code, out, _ = run(capsys, "colorings", "--knot", "3_1", "-n", "2")
        assert code == 0 and "0 nontrivial" in out

    def test_modulus_one(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["colorings", "--knot", "3_1", "-n", "1"])
        assert info.value.code == 2

    def test_cap(self, capsys):
        code, out, _ = run(capsys, "colorings", "--knot", "3_1", "-n", "3", "--cap", "4")
        assert code == 3 and PARTIAL_MARKER in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "colorings", "--knot", "4_1", "-n", "5", "--format", "json", "--filter", "effective")
        recs = [json.loads(l) for l in out.splitlines()]
        assert code == 0 and len(recs) == 20
        assert {r["palette"] for r in recs} == {4}


class TestMinColors:
    def test_trefoil(self, capsys):
        code, out, _ = run(capsys, "mincolors", "--knot", "3_1", "-n", "3", "--filter", "effective")
        assert code == 0 and "lower 3" in out and "diagram-min 3" in out

    def test_figure_eight(self, capsys):
        code, out, _ = run(capsys, "mincolors", "--knot", "4_1", "-n", "5", "--format", "json")
        rec = json.loads(out)
        assert rec["lower"] == 4 and rec["diagram_min"] == 4 and rec["interval"] == [4, 4]

    def test_none(self, capsys):
        code, out, _ = run(capsys, "mincolors", "--knot", "3_1", "-n", "2")
        assert code == 0 and "lower 2" in out and "diagram-min none" in out

    def test_full_enumeration_agrees(self, capsys):
        _, a, _ = run(capsys, "mincolors", "--knot", "8_18", "-n", "15", "--format", "json")
        _, b, _ = run(capsys, "mincolors", "--knot", "8_18", "-n", "15", "--format", "json", "--full-enumeration")
        assert a == b


class TestVerify:
    def test_trefoil(self, capsys):
        code, out, _ = run(capsys, "verify", "--knot", "3_1", "-n", "3")
        recs = [json.loads(l) for l in out.splitlines()]
        assert code == 0 and len(recs) == 1
        rec = recs[0]
        assert rec["valid"] and rec["l"] == 3 and abs(rec["det_B"]) == 3
        assert all(rec["checks"].values()) and rec["kink_flag"] is False

    def test_no_effective(self, capsys):
        code, out, err = run(capsys, "verify", "--knot", "3_1", "-n", "2")
        assert code == 0 and out == "" and "no effective colorings" in err

    def test_table_range(self, capsys, tmp_path):
        target = tmp_path / "certs.jsonl"
        code, out, err = run(capsys, "verify", "--table", "knots8.jsonl", "-n", "2..30", "--out", str(target))
        recs = [json.loads(l) for l in target.read_text().splitlines()]
        assert code == 0 and out == ""
        assert recs and all(r["valid"] for r in recs)
        assert "0 invalid" in err

    def test_range_skips_coprime_moduli(self, capsys):
        _, out, _ = run(capsys, "verify", "--knot", "4_1", "-n", "2..12")
        assert {json.loads(l)["n"] for l in out.splitlines()} == {5}

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "verify", "--knot", "L2a1", "-n", "2", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and rows[0][0] == "n" and rows[1][-1] == "True"

    def test_cap(self, capsys):
        code, out, _ = run(capsys, "verify", "--knot", "8_18", "-n", "15", "--cap", "3")
        assert code == 3 and PARTIAL_MARKER in out

    def test_deterministic(self, capsys):
        _, a, _ = run(capsys, "verify", "--table", "links.jsonl", "-n", "2..16")
        _, b, _ = run(capsys, "verify", "--table", "links.jsonl", "-n", "2..16", "--jobs", "2")
        assert a == b and a

    def test_invalid_certificate_exit(self, capsys, monkeypatch):
        import linkchroma.cli as cli
        real = cli.verify

        def broken(d, c):
            cert = real(d, c)
            cert.failures.append("forced")
            return cert

        monkeypatch.setattr(cli, "verify", broken)
        code, out, _ = run(capsys, "verify", "--knot", "3_1", "-n", "3")
        assert code == 4 and json.loads(out)["valid"] is False


class TestTable:
    def test_trefoil_row(self, capsys):
        code, out, _ = run(capsys, "table", "-n", "3")
        rows = out.splitlines()
        assert code == 0
        assert rows[0] == "name,crossings,det,effective_n3,min_palette_n3,bound_n3,certificate_n3"
        assert rows[1] == "3_1,3,3,6,3,3,valid"

    def test_det_only(self, capsys):
        code, out, _ = run(capsys, "table")
        rows = out.splitlines()
        assert code == 0 and rows[0] == "name,crossings,det" and rows[2] == "4_1,4,5"

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "table", "--table", "/nonexistent/t.jsonl")
        assert code == 2

    def test_mismatch(self, capsys, tmp_path):
        p = tmp_path / "t.jsonl"
        p.write_text('{"name": "3_1", "pd": [[1,4,2,5],[3,6,4,1],[5,2,6,3]], "det": 4}\n')
        code, _, err = run(capsys, "table", "--table", str(p))
        assert code == 1 and "expected det 4" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "linkchroma", "det", "--pd", TREFOIL],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "3"
