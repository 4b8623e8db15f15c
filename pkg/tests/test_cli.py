import csv
import json

import pytest

from spectralchroma.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBounds:
    def test_petersen_json(self, capsys):
        code, out, _ = run_cli(
            capsys, "bounds", "--family", "petersen", "--format", "json", "--no-timestamp"
        )
        assert code == 0
        data = json.loads(out)
        assert data["schema"] == 1
        assert data["h_bracket"] == [3, 3]
        assert data["chi_f_rational"] == "5/2"
        assert data["chain_ok"] is True

    def test_k2_graph6(self, capsys):
        code, out, _ = run_cli(
            capsys, "bounds", "--graph6", "A_", "--format", "json", "--no-timestamp"
        )
        assert code == 0
        data = json.loads(out)
        assert data["chi"] == 2
        assert data["h_bracket"] == [2, 2]

    def test_empty_family_text(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "--family", "empty", "4", "--no-timestamp")
        assert code == 0
        assert "alpha               4" in out
        assert "[1, 1]" in out

    def test_deterministic_json_output(self, capsys):
        args = ("bounds", "--family", "cycle", "7", "--format", "json", "--no-timestamp")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_parse_error_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "bounds", "--graph6", "A" + chr(30))
        assert code == 2
        assert "graph" in err.lower() or "offset" in err.lower()

    def test_requires_exactly_one_source(self, capsys):
        code, _, err = run_cli(capsys, "bounds", "--family", "cycle", "5", "--graph6", "A_")
        assert code == 2


class TestThetaK:
    def test_c5_fractional_level(self, capsys):
        code, out, _ = run_cli(
            capsys, "theta-k", "--family", "cycle", "5", "--k", "2.5",
            "--format", "json", "--no-timestamp",
        )
        assert code == 0
        data = json.loads(out)
        assert data["value"] == pytest.approx(5.0, abs=1e-5)

    def test_complete_integer_level(self, capsys):
        code, out, _ = run_cli(
            capsys, "theta-k", "--family", "complete", "6", "--k", "3",
            "--format", "json", "--no-timestamp",
        )
        data = json.loads(out)
        assert data["value"] == pytest.approx(3.0, abs=1e-6)

    def test_witness_flag(self, capsys):
        code, out, _ = run_cli(
            capsys, "theta-k", "--family", "cycle", "5", "--k", "1", "--witness",
            "--format", "json", "--no-timestamp",
        )
        data = json.loads(out)
        assert "witnesses" in data
        assert len(data["witnesses"]["X"]) == 5

    def test_weights_file(self, capsys, tmp_path):
        wfile = tmp_path / "w.txt"
        wfile.write_text("1.0\n2.0\n1.0\n1.0\n1.0\n")
        code, out, _ = run_cli(
            capsys, "theta-k", "--family", "cycle", "5", "--k", "5", "--weights", str(wfile),
            "--format", "json", "--no-timestamp",
        )
        data = json.loads(out)
        assert data["value"] == pytest.approx(6.0, abs=1e-9)

    def test_weights_length_mismatch(self, capsys, tmp_path):
        wfile = tmp_path / "w.txt"
        wfile.write_text("1.0\n")
        code, _, err = run_cli(
            capsys, "theta-k", "--family", "cycle", "5", "--k", "1", "--weights", str(wfile)
        )
        assert code == 2

    def test_k_out_of_range(self, capsys):
        code, _, err = run_cli(capsys, "theta-k", "--family", "cycle", "5", "--k", "9")
        assert code == 2


class TestHBracket:
    def test_writes_certificates(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code, _, _ = run_cli(
            capsys, "hbracket", "--family", "petersen", "--format", "json",
            "--out", str(out_path), "--no-timestamp",
        )
        assert code == 0
        data = json.loads(out_path.read_text())
        assert data["h_bracket"] == [3, 3]
        cert_dir = tmp_path / "report.json.cert"
        files = list(cert_dir.glob("*.json"))
        assert any("fractional-coloring" in f.name for f in files)


class TestBatch:
    def test_cycle_range_csv(self, capsys, tmp_path):
        out_csv = tmp_path / "chain.csv"
        code, _, _ = run_cli(
            capsys, "batch", "--family", "cycle", "3..11", "--out", str(out_csv), "--no-timestamp"
        )
        assert code == 0
        with out_csv.open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 9
        assert all(row["chain_ok"] == "ok" for row in rows)
        assert rows[0]["name"] == "cycle-3"
        header = out_csv.read_text().splitlines()[0]
        assert header == (
            "name,n,m,alpha,theta,theta_complement,chi_f,chi_f_rational,chi,"
            "hoffman_adj,ratio_adj,h_lo,h_hi,chain_ok,seconds"
        )

    def test_resume_skips_existing_rows(self, capsys, tmp_path):
        out_csv = tmp_path / "chain.csv"
        run_cli(capsys, "batch", "--family", "cycle", "3..5", "--out", str(out_csv), "--no-timestamp")
        first = out_csv.read_text()
        run_cli(capsys, "batch", "--family", "cycle", "3..7", "--out", str(out_csv), "--no-timestamp")
        second = out_csv.read_text()
        assert second.startswith(first)
        with out_csv.open() as fh:
            rows = list(csv.DictReader(fh))
        assert [r["name"] for r in rows] == [f"cycle-{n}" for n in range(3, 8)]

    def test_graph6_file_input(self, capsys, tmp_path):
        source = tmp_path / "graphs.g6"
        source.write_text("A_\nBw\n")
        code, out, _ = run_cli(capsys, "batch", "--input", str(source), "--no-timestamp")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert len(rows) == 2

    def test_jobs_flag(self, capsys, tmp_path):
        out_csv = tmp_path / "par.csv"
        code, _, _ = run_cli(
            capsys, "batch", "--family", "cycle", "3..8", "--jobs", "3",
            "--out", str(out_csv), "--no-timestamp",
        )
        assert code == 0
        with out_csv.open() as fh:
            rows = list(csv.DictReader(fh))
        assert [r["name"] for r in rows] == [f"cycle-{n}" for n in range(3, 9)]


class TestInputFormats:
    def test_dimacs_file(self, capsys, tmp_path):
        path = tmp_path / "triangle.col"
        path.write_text("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n")
        code, out, _ = run_cli(
            capsys, "bounds", "--input", str(path), "--format", "json", "--no-timestamp"
        )
        data = json.loads(out)
        assert data["chi"] == 3

    def test_edge_list_file(self, capsys, tmp_path):
        path = tmp_path / "edges.txt"
        path.write_text("0 1\n1 2\n2 0\n")
        code, out, _ = run_cli(
            capsys, "bounds", "--input", str(path), "--format-in", "edges",
            "--format", "json", "--no-timestamp",
        )
        data = json.loads(out)
        assert data["chi"] == 3
