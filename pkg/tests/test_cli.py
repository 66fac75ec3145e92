import json
from pathlib import Path

import pytest

import coxhi
from coxhi.cli import main
from coxhi.core import INFINITY, parse_cxs
from coxhi.families import catalog_dir


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def cat(name):
    return str(catalog_dir() / (name + ".cxs"))


def test_analyze_human(capsys):
    code, out, _ = run(capsys, "analyze", cat("fig4"))
    assert code == 0
    assert "h = 2" in out
    assert "Lambda_2" in out and "[" in out
    assert "PolyUpperBound(3)" in out


def test_analyze_json_deterministic(capsys):
    code1, out1, _ = run(capsys, "analyze", cat("fig4"), "--json")
    code2, out2, _ = run(capsys, "analyze", cat("fig4"), "--json")
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["schema"] == "coxhi/1"
    assert doc["h"] == 2
    assert doc["system"]["rank"] == 9
    assert json.loads(json.dumps(doc)) == doc
    assert "timing" not in doc


def test_analyze_json_h_infinity(capsys):
    code, out, _ = run(capsys, "analyze", cat("fig7d"), "--json")
    doc = json.loads(out)
    assert doc["h"] == "infinity"
    assert doc["divergence"]["classification"] == "Exponential"
    assert doc["peripherals"] is not None and len(doc["peripherals"]) == 3


def test_analyze_spherical(capsys, tmp_path):
    p = tmp_path / "sph.cxs"
    p.write_text("rank 2\nedge 1 2 5\n")
    code, out, _ = run(capsys, "analyze", str(p))
    assert code == 0 and "h = infinity" in out and "ends: 0" in out


def test_analyze_bad_input(capsys, tmp_path):
    p = tmp_path / "bad.cxs"
    p.write_text("rank 2\nedge 1 2 3\nedge 2 1 4\n")
    code, _, err = run(capsys, "analyze", str(p))
    assert code == 1 and "conflicting" in err


def test_analyze_rank_cap(capsys):
    code, _, err = run(capsys, "analyze", cat("fig8"), "--max-rank", "10")
    assert code == 2 and "cap" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "analyze", "/nonexistent.cxs")
    assert code == 1


def test_hindex_and_trace(capsys):
    code, out, _ = run(capsys, "hindex", cat("fig7b"))
    assert code == 0 and out.strip() == "h = 1"
    code, out, _ = run(capsys, "hindex", cat("fig7b"), "--json")
    assert json.loads(out) == {"h": 1}


def test_ends_betti(capsys):
    assert run(capsys, "ends", cat("fig7a"))[1].strip() == "1"
    assert run(capsys, "betti", cat("fig8"))[1].strip() == "5"


def test_duplex_roundtrip(capsys, tmp_path):
    g3 = tmp_path / "g3.cxs"
    code, out, _ = run(capsys, "family", "gamma", "--d", "3")
    assert code == 0
    g3.write_text(out)
    out_path = tmp_path / "g3d.cxs"
    code, out, _ = run(capsys, "duplex", str(g3), "--m", "4", "--n", "inf",
                       "-o", str(out_path), "--verify")
    assert code == 0
    assert "h(input) = 2, h(duplex) = 2" in out
    doubled = parse_cxs(out_path.read_text())
    assert doubled.rank == 16


def test_duplex_rejects_bad_n(capsys, tmp_path):
    g1 = tmp_path / "g1.cxs"
    g1.write_text(coxhi.to_cxs(coxhi.gamma_d(1)))
    code, _, err = run(capsys, "duplex", str(g1), "--m", "2", "--n", "4")
    assert code == 1


def test_duplex_rejects_non_right_angled(capsys):
    code, _, err = run(capsys, "duplex", cat("fig4"), "--m", "2", "--n", "5")
    assert code == 1


def test_family_catalog_and_path4(capsys, tmp_path):
    code, out, _ = run(capsys, "family", "catalog", "fig7d")
    assert code == 0 and parse_cxs(out) == coxhi.catalog("fig7d")
    code, out, _ = run(capsys, "family", "path4", "--n", "8")
    assert code == 0 and parse_cxs(out) == coxhi.path4(8)
    code, _, err = run(capsys, "family", "catalog", "fig99")
    assert code == 1


def test_collapse(capsys, tmp_path):
    p = tmp_path / "s.cxs"
    p.write_text("rank 2\nedge 1 2 12\n")
    code, out, _ = run(capsys, "collapse", str(p))
    assert code == 0 and parse_cxs(out).labels[0][1] == 7
    code, _, err = run(capsys, "collapse", str(p), "--threshold", "5")
    assert code == 1


def test_rh_check(capsys, tmp_path):
    code, out, _ = run(capsys, "rh-check", cat("fig7d"))
    assert code == 0 and "pass" in out
    # dropping a peripheral: fail with exit 3 and an RH1 witness printed
    peri = [["s1", "s3", "s4", "s5", "s7", "s8", "s9"]]
    code, out, _ = run(capsys, "rh-check", cat("fig7d"),
                       "--peripherals", json.dumps(peri))
    assert code == 3 and "RH1" in out
    # 1-based indices are accepted too
    code, out, _ = run(capsys, "rh-check", cat("fig7d"),
                       "--peripherals",
                       json.dumps([[1, 3, 4, 5, 7, 8, 9],
                                   [1, 2, 4, 5, 6, 7, 9],
                                   [2, 3, 4, 6, 7, 8, 9]]))
    assert code == 0
    # extraction impossible for finite h without explicit peripherals
    code, _, err = run(capsys, "rh-check", cat("fig4"))
    assert code == 1


def test_batch(capsys, tmp_path):
    code, out, _ = run(capsys, "batch", str(catalog_dir()))
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1 + len(coxhi.catalog_names())
    assert any("fig4.cxs" in line and " 2 " in line for line in lines)
    # empty dir: empty summary, exit 0
    empty = tmp_path / "empty"
    empty.mkdir()
    code, out, _ = run(capsys, "batch", str(empty))
    assert code == 0
    # mixed valid/invalid: invalid flagged per row, exit 0
    mixed = tmp_path / "mixed"
    mixed.mkdir()
    (mixed / "ok.cxs").write_text("rank 2\nedge 1 2 inf\n")
    (mixed / "broken.cxs").write_text("edge 1 2 3\n")
    code, out, _ = run(capsys, "batch", str(mixed), "--json")
    rows = json.loads(out)
    assert code == 0
    assert [r["file"] for r in rows] == ["broken.cxs", "ok.cxs"]
    assert rows[0]["error"] and not rows[1]["error"]
    # all invalid: exit 1
    allbad = tmp_path / "allbad"
    allbad.mkdir()
    (allbad / "x.cxs").write_text("nope\n")
    code, _, _ = run(capsys, "batch", str(allbad))
    assert code == 1


def test_batch_jobs_parallel_deterministic(capsys):
    code1, out1, _ = run(capsys, "batch", str(catalog_dir()), "--json")
    code2, out2, _ = run(capsys, "batch", str(catalog_dir()), "--json",
                         "--jobs", "3")
    assert code1 == code2 == 0 and out1 == out2


def test_batch_csv(capsys, tmp_path):
    target = tmp_path / "summary.csv"
    code, _, _ = run(capsys, "batch", str(catalog_dir()), "--csv", str(target))
    assert code == 0
    lines = target.read_text().strip().splitlines()
    assert lines[0].startswith("file,rank,betti,h,ends,classification")
    assert len(lines) == 1 + len(coxhi.catalog_names())


def test_classify_command(capsys):
    code, out, _ = run(capsys, "classify", cat("fig7a"))
    assert code == 0 and "affA_8" in out and "in class T" in out


def test_json_input(capsys, tmp_path):
    p = tmp_path / "sys.json"
    p.write_text(json.dumps({"rank": 2, "edges": [[1, 2, "inf"]]}))
    code, out, _ = run(capsys, "ends", str(p))
    assert code == 0 and out.strip() == "2"
