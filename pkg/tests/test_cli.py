import csv
import json
import subprocess
import sys

import pytest

from magicrom.cli import (
    CSV_FIELDS,
    EXIT_CONFIG,
    EXIT_INTERNAL,
    EXIT_IO,
    EXIT_OK,
    fit_growth,
    main,
)
from magicrom.l1 import read_decomposition, recheck_residual
from magicrom.polytope import cache_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestVertices:
    def test_summary_and_cache(self, capsys, tmp_path):
        code, out, _ = run(capsys, "vertices", "--mode", "H", "-n", "3", "--cache", str(tmp_path))
        assert code == EXIT_OK
        assert out.strip() == "connected=11 products=8 vertices=8"
        assert cache_path(tmp_path, "H", 3).is_file()

    def test_env_cache(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("MAGICROM_CACHE", str(tmp_path))
        assert run(capsys, "vertices", "--mode", "T", "-n", "2")[0] == EXIT_OK
        assert cache_path(tmp_path, "T", 2).is_file()

    def test_catalog_gap_is_config_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "vertices", "--mode", "T", "-n", "10", "--cache", str(tmp_path))
        assert code == EXIT_CONFIG and "n=10" in err
        assert not any(tmp_path.iterdir())

    def test_missing_catalog_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "vertices", "--mode", "H", "-n", "3", "--catalog", str(tmp_path / "no.txt"))
        assert code == EXIT_CONFIG and "does not exist" in err

    def test_bad_qubits(self, capsys):
        assert run(capsys, "vertices", "--mode", "H", "-n", "0", "--no-cache")[0] == EXIT_CONFIG


class TestExact:
    def test_summary(self, capsys):
        code, out, _ = run(capsys, "exact", "--mode", "H", "-n", "2", "--no-cache")
        assert code == EXIT_OK
        assert out.startswith("H2 exact: value=1.747") and "lower_bound=1.457107" in out

    def test_csv_byte_stable(self, capsys):
        a = run(capsys, "exact", "--mode", "T", "-n", "4", "--no-cache", "--csv")[1]
        b = run(capsys, "exact", "--mode", "T", "-n", "4", "--no-cache", "--csv")[1]
        assert a == b
        header, row = a.splitlines()
        assert header == ",".join(CSV_FIELDS)
        fields = row.split(",")
        assert fields[:3] == ["T", "4", "exact"] and fields[-2:] == ["true", ""]
        assert fields[3] == f"{float(fields[3]):.10f}"

    def test_timings(self, capsys):
        out = run(capsys, "exact", "--mode", "T", "-n", "2", "--no-cache", "--csv", "--timings")[1]
        assert float(out.splitlines()[1].split(",")[-1]) >= 0

    def test_out_directory(self, capsys, tmp_path):
        for _ in range(2):
            assert run(capsys, "exact", "--mode", "H", "-n", "3", "--no-cache", "--out", str(tmp_path))[0] == 0
        rows = list(csv.DictReader((tmp_path / "results.csv").open()))
        assert len(rows) == 2 and rows[0] == rows[1]
        d = read_decomposition(tmp_path / "decomposition_H3_exact.jsonl")
        assert abs(recheck_residual(d) - d.residual) <= 1e-12
        assert float(rows[0]["value"]) == pytest.approx(d.value, abs=1e-10)

    def test_out_is_a_file(self, capsys, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        code, _, err = run(capsys, "exact", "--mode", "H", "-n", "2", "--no-cache", "--out", str(blocker))
        assert code == EXIT_IO and "error" in err


class TestApprox:
    def test_bell(self, capsys):
        out = run(capsys, "approx", "--mode", "H", "-n", "5", "--csv")[1]
        row = out.splitlines()[1].split(",")
        assert row[2] == "bell" and float(row[3]) == pytest.approx(3.68930, abs=1e-4)

    def test_level(self, capsys, tmp_path):
        code, out, _ = run(capsys, "approx", "--mode", "H", "-n", "4", "--level", "2", "--cache", str(tmp_path))
        assert code == EXIT_OK and out.startswith("H4 level2: value=2.862")

    def test_bad_level(self, capsys):
        assert run(capsys, "approx", "--mode", "H", "-n", "4", "--level", "five")[0] == EXIT_CONFIG
        assert run(capsys, "approx", "--mode", "H", "-n", "4", "--level", "5")[0] == EXIT_CONFIG

    def test_large_n_bell(self, capsys):
        code, out, _ = run(capsys, "approx", "--mode", "T", "-n", "26", "--csv")
        assert code == EXIT_OK and out.splitlines()[1].split(",")[6] in ("true", "false")


class TestVerify:
    def test_quick(self, capsys):
        code, out, _ = run(capsys, "verify", "--quick")
        assert code == EXIT_OK and out.strip().endswith("PASS")

    def test_corrupted_cache(self, capsys, tmp_path):
        run(capsys, "vertices", "--mode", "T", "-n", "3", "--cache", str(tmp_path))
        path = cache_path(tmp_path, "T", 3)
        lines = path.read_text().splitlines()
        rec = json.loads(lines[0])
        rec["coeffs"][1] = -rec["coeffs"][1] + 1
        lines[0] = json.dumps(rec)
        path.write_text("\n".join(lines) + "\n")
        code, out, _ = run(capsys, "verify", "--quick", "--cache", str(tmp_path))
        assert code == EXIT_INTERNAL
        assert "FAIL cache T3" in out
        assert "PASS cache T2" in out


class TestFit:
    def test_growth(self):
        a, c = fit_growth([1, 2, 3, 4], [2 * 1.5**n for n in range(1, 5)])
        assert a == pytest.approx(2) and c == pytest.approx(1.5)

    def test_fit_command(self, capsys, tmp_path):
        for n in (2, 3, 4):
            run(capsys, "approx", "--mode", "H", "-n", str(n), "--out", str(tmp_path))
        code, out, _ = run(capsys, "fit", str(tmp_path / "results.csv"))
        assert code == EXIT_OK and out.startswith("H bell: value ~")

    def test_no_rows(self, capsys, tmp_path):
        (tmp_path / "e.csv").write_text(",".join(CSV_FIELDS) + "\n")
        assert run(capsys, "fit", str(tmp_path / "e.csv"))[0] == EXIT_CONFIG


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "magicrom", "approx", "--mode", "T", "-n", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith("T3 bell: value=3.098")
