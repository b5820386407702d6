import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from pantslab import __version__
from pantslab.cli import EXIT_CODES, ExperimentConfig, main
from pantslab.pants import decomposition_from_dict, loose_disks, validate_decomposition

ROOT = Path(__file__).resolve().parents[1]
DATA = Path(__file__).parent / "data"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    lines = text.splitlines()
    assert lines[0].startswith(f"# pantslab {__version__} config_hash=")
    return [line.split(",") for line in lines[2:]]


def test_exit_code_table_is_published():
    readme = (ROOT / "README.md").read_text()
    table = dict(re.findall(r"^\|\s*(\d+)\s*\|\s*([^|]+?)\s*\|\s*$", readme, re.M))
    assert {int(k): v for k, v in table.items()} == EXIT_CODES
    codes = list(EXIT_CODES)
    assert len(set(codes)) == len(codes)


def test_sample_is_byte_identical(tmp_path, capsys):
    args = ["sample", "--n", "32", "--count", "60", "--seed", "42", "--condition", "connected"]
    assert run(args + ["--out", str(tmp_path / "a")], capsys)[0] == 0
    assert run(args + ["--out", str(tmp_path / "b"), "--jobs", "3"], capsys)[0] == 0
    for name in ("samples.jsonl", "genus_histogram.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    lines = (tmp_path / "a" / "samples.jsonl").read_text().splitlines()
    meta = json.loads(lines[0])["meta"]
    assert meta["version"] == __version__ and len(meta["config_hash"]) == 16
    assert len(lines) == 61
    hist = csv_rows((tmp_path / "a" / "genus_histogram.csv").read_text())
    assert sum(int(c) for _, c in hist) == 60


def test_config_hash_tracks_parameters():
    a = ExperimentConfig("sample", {"n": 8, "count": 5, "condition": "any"}, 1)
    b = ExperimentConfig("sample", {"n": 8, "count": 5, "condition": "any"}, 1, out="x", jobs=4)
    c = ExperimentConfig("sample", {"n": 8, "count": 5, "condition": "any"}, 2)
    assert a.config_hash == b.config_hash != c.config_hash


def test_sample_genus_shorthand(capsys):
    code, out, _ = run(["sample", "--n", "12", "--count", "5", "--g", "2"], capsys)
    assert code == 0
    rows = [json.loads(x) for x in out.splitlines()[1:]]
    assert {r["genus"] for r in rows} == {2}


def test_census(capsys):
    code, out, _ = run(["census", "--n", "4"], capsys)
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 17
    assert sum(int(r[1]) for r in rows) == 10395


def test_decompose_with_tighten(tmp_path, capsys):
    code, _, _ = run(["decompose", "--in", str(DATA / "g2.surf.json"), "--tighten",
                      "--out", str(tmp_path)], capsys)
    assert code == 0
    data = json.loads((tmp_path / "decomposition.json").read_text())
    assert data["tightened"] is True and "config_hash" in data["meta"]
    dec = decomposition_from_dict(data)
    validate_decomposition(dec)
    assert not loose_disks(dec)


@pytest.mark.parametrize("kind,extra", [
    ("hyperbolic", ["--g", "50", "--eps", "0.1"]),
    ("combinatorial", ["--n", "10000", "--eps", "0.0833"]),
    ("pants-count", ["--g", "4", "--n", "30", "--l", "20"]),
])
def test_bounds_reports(kind, extra, capsys):
    code, out, _ = run(["bounds", kind] + extra, capsys)
    assert code == 0
    rep = json.loads(out)
    assert {"factors", "total_log", "baseline_log", "margin", "params", "meta"} <= set(rep)
    assert abs(rep["margin"] - (rep["total_log"] - rep["baseline_log"])) < 1e-9


@pytest.mark.parametrize("kind", ["brown", "matchings", "trivalent"])
def test_oracle_tables(kind, capsys):
    argv = ["oracle", kind] + (["--n", "4"] if kind == "brown" else [])
    code, out, _ = run(argv, capsys)
    assert code == 0
    rows = csv_rows(out)
    assert rows and all(r[-1] == "True" for r in rows)


@pytest.mark.parametrize("argv,code", [
    (["sample"], 2),
    (["sample", "--n", "3"], 2),
    (["frobnicate"], 2),
    (["bounds", "hyperbolic", "--eps", "0.5"], 2),
    (["census", "--n", "6", "--budget", "100"], 3),
    (["decompose", "--in", "/nonexistent/surface.json"], 5),
    (["sample", "--n", "4", "--condition", "genus:4-5"], 6),
    (["decompose", "--in", "PILLOW"], 7),
])
def test_exit_codes(argv, code, tmp_path, capsys):
    if "PILLOW" in argv:
        p = tmp_path / "pillow.json"
        p.write_text('{"n": 2, "pairs": [[0, 3], [1, 5], [2, 4]]}')
        argv = [str(p) if a == "PILLOW" else a for a in argv]
    got, _, err = run(argv, capsys)
    assert got == code
    assert err


def test_malformed_input(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(["decompose", "--in", str(p)], capsys)[0] == 5


def test_unwritable_output(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(["census", "--n", "2", "--out", str(blocker / "sub")], capsys)[0] == 4


def test_budget_env(monkeypatch, capsys):
    monkeypatch.setenv("PANTSLAB_BUDGET", "10")
    assert run(["census", "--n", "4"], capsys)[0] == 3


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "pantslab", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and __version__ in r.stdout
