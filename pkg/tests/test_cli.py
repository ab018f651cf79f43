"""Command-line entry points, exercised in process via main(argv)."""

import json
from fractions import Fraction

import pytest
from mpmath import mp

from assoclab.cli import main
from assoclab.ncseries import NCSeries, save_series


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# -- mzv ----------------------------------------------------------------------

def test_eval_prints_the_requested_digits(capsys):
    rc, out, _ = run(capsys, "mzv", "eval", "--index", "2", "--digits", "30")
    assert rc == 0
    with mp.workdps(45):
        assert abs(mp.mpf(out.strip()) - mp.pi ** 2 / 6) < mp.mpf(10) ** -29


def test_eval_depth_two(capsys):
    rc, out, _ = run(capsys, "mzv", "eval", "--index", "1,2", "--digits", "30")
    assert rc == 0
    with mp.workdps(45):
        assert abs(mp.mpf(out.strip()) - mp.zeta(3)) < mp.mpf(10) ** -29


def test_eval_rejects_divergent_index(capsys):
    rc, _, err = run(capsys, "mzv", "eval", "--index", "2,1")
    assert rc == 2
    assert "error:" in err
    assert "admissible" in err


def test_table_reports_record_count(capsys, tmp_path):
    cache = str(tmp_path / "cache.txt")
    rc, out, _ = run(capsys, "mzv", "table", "--max-weight", "6", "--cache", cache)
    assert rc == 0
    assert "31 values through weight 6" in out
    assert "31 records" in out
    assert (tmp_path / "cache.txt").exists()


def test_table_validates_inputs(capsys, tmp_path):
    cache = str(tmp_path / "cache.txt")
    rc, _, err = run(capsys, "mzv", "table", "--max-weight", "1", "--cache", cache)
    assert rc == 2 and "at least 2" in err
    rc, _, err = run(capsys, "mzv", "table", "--max-weight", "4",
                     "--digits", "20", "--cache", cache)
    assert rc == 2 and "at least 30 digits" in err


# -- assoc ----------------------------------------------------------------------

def test_solve_writes_series_and_dimension_sidecar(capsys, tmp_path):
    out_path = str(tmp_path / "phi.series.txt")
    rc, out, _ = run(capsys, "assoc", "solve", "--max-weight", "4",
                     "--seed", "1", "--out", out_path)
    assert rc == 0
    assert "wrote" in out
    doc = json.loads((tmp_path / "phi.series.txt.dims.json").read_text())
    assert doc["max_weight"] == 4
    assert doc["seed"] == 1
    assert doc["dims"] == {"1": 0, "2": 1, "3": 1, "4": 0}
    assert "generic(W=4, seed=1" in doc["source"]

    rc, out, _ = run(capsys, "assoc", "check", out_path)
    assert rc == 0
    assert "PASS" in out
    assert "degenerate associator (mu = 0): False" in out
    for name in ("grouplike", "pentagon", "hexagon_a", "hexagon_b", "two_cycle"):
        assert name in out
    assert "tolerance    exact" in out


def test_check_flags_the_degenerate_orbit(capsys, tmp_path):
    out_path = str(tmp_path / "deg.series.txt")
    rc, _, _ = run(capsys, "assoc", "solve", "--max-weight", "3", "--seed", "2",
                   "--hexagon-mu", "0", "--out", out_path)
    assert rc == 0
    rc, out, _ = run(capsys, "assoc", "check", out_path)
    assert rc == 0
    assert "degenerate associator (mu = 0): True" in out


def test_check_unit_series_is_degenerate(capsys, tmp_path):
    path = tmp_path / "one.series.txt"
    save_series(NCSeries.one(3, Fraction(1)), str(path))
    rc, out, _ = run(capsys, "assoc", "check", str(path))
    assert rc == 0
    assert "degenerate associator (mu = 0): True" in out


def test_check_corrupted_file(capsys, tmp_path):
    path = tmp_path / "bad.series.txt"
    path.write_text("ncseries W=2 kind=rational\n01 nope\n")
    rc, _, err = run(capsys, "assoc", "check", str(path))
    assert rc == 2
    assert "error:" in err


def test_check_missing_file(capsys, tmp_path):
    rc, _, err = run(capsys, "assoc", "check", str(tmp_path / "absent.txt"))
    assert rc == 2
    assert "error:" in err


# -- relations ------------------------------------------------------------------

def test_verify_generic_multi_N(capsys):
    rc, out, _ = run(capsys, "relations", "verify", "--which", "B",
                     "--phi", "generic", "--max-weight", "5",
                     "--N", "3,4,5", "--seed", "7")
    assert rc == 0
    doc = json.loads(out)
    assert doc["relation"] == "B"
    assert doc["pass"] is True
    assert doc["N"] == [3, 4, 5]
    assert doc["tolerance"] == "exact"
    assert all("N" in r for r in doc["residuals"])
    assert doc["provenance"]["config"]["seed"] == 7
    assert doc["provenance"]["config"]["which"] == "B"
    assert doc["provenance"]["cache_digest"] is None
    assert doc["phi_source"].startswith("generic(W=5, seed=7")
    assert set(doc) == {
        "relation", "phi_source", "mu", "N", "residuals",
        "tolerance", "pass", "elapsed_ms", "provenance",
    }


def test_verify_argument_contract(capsys):
    rc, _, err = run(capsys, "relations", "verify", "--which", "B",
                     "--phi", "generic", "--max-weight", "4", "--N", "1")
    assert rc == 2 and "N = 1" in err
    rc, _, err = run(capsys, "relations", "verify", "--which", "D",
                     "--phi", "generic", "--max-weight", "4", "--N", "2")
    assert rc == 2 and "drop --N" in err
    rc, _, err = run(capsys, "relations", "verify", "--which", "A",
                     "--phi", "generic", "--max-weight", "4")
    assert rc == 2 and "needs --N" in err
    rc, _, err = run(capsys, "relations", "verify", "--which", "E",
                     "--phi", "generic", "--max-weight", "4", "--N", "2")
    assert rc == 2 and "unknown relation" in err
    rc, _, err = run(capsys, "relations", "verify", "--which", "A",
                     "--phi", "kz", "--max-weight", "4", "--N", "2",
                     "--digits", "50", "--tol-exp", "45")
    assert rc == 2 and "working precision" in err


def test_verify_printed_convention_fails_with_report(capsys, tmp_path):
    report = tmp_path / "c_printed.json"
    rc, out, _ = run(capsys, "relations", "verify", "--which", "C",
                     "--phi", "generic", "--max-weight", "4", "--N", "2",
                     "--seed", "7", "--convention", "printed-pa1",
                     "--report", str(report))
    assert rc == 1
    assert "relation C N=2: FAIL" in out
    assert "report written to" in out
    doc = json.loads(report.read_text())
    assert doc["pass"] is False
    assert doc["convention"] == "printed-pa1"
    assert doc["provenance"]["convention"] == "printed-pa1"
    assert doc["calibrations"][0]["N"] == 2
    assert doc["calibrations"][0]["trailing"] == "pa1"


def test_reports_are_reproducible(capsys, tmp_path):
    report = str(tmp_path / "a.json")
    docs = []
    for _ in range(2):
        rc, _, _ = run(capsys, "relations", "verify", "--which", "A",
                       "--phi", "generic", "--max-weight", "4",
                       "--N", "2,3", "--seed", "3", "--report", report)
        assert rc == 0
        doc = json.loads(open(report).read())
        doc.pop("elapsed_ms")
        docs.append(doc)
    assert docs[0] == docs[1]


def test_verify_through_a_saved_numeric_truncation(capsys, tmp_path):
    cache = str(tmp_path / "cache.txt")
    kz_path = str(tmp_path / "kz4.series.txt")
    rc, out, _ = run(capsys, "kz", "build", "--max-weight", "4",
                     "--digits", "50", "--cache", cache, "--out", kz_path)
    assert rc == 0
    assert "wrote" in out and "cache digest" in out

    rc, out, _ = run(capsys, "relations", "verify", "--which", "A",
                     "--phi", kz_path, "--max-weight", "4", "--N", "2")
    assert rc == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert doc["phi_source"] == f"file:{kz_path}"
    assert doc["tolerance"] == "1.0e-40"

    rc, out, _ = run(capsys, "assoc", "check", kz_path)
    assert rc == 0
    assert "PASS" in out
    assert "degenerate associator (mu = 0): False" in out


def test_verify_kz_provider_relation_D(capsys, tmp_path):
    cache = str(tmp_path / "cache.txt")
    rc, out, _ = run(capsys, "relations", "verify", "--which", "D",
                     "--phi", "kz", "--max-weight", "4",
                     "--digits", "50", "--cache", cache)
    assert rc == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert doc["N"] is None
    assert doc["phi_source"] == "kz"
    assert doc["provenance"]["cache_digest"] is not None
