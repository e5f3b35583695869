import json
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("KEG_CLI")
DATA = Path(os.environ.get("KEG_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))

pytestmark = pytest.mark.skipif(not CLI, reason="KEG_CLI not set")


def run(*args, check=True):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, check=check)


def generate(path, year, seed, ins, ages=True):
    args = ["generate", "--n", 12, "--year", year, "--players", "ON,BCYT,AB", "--seed", seed,
            "--dist", DATA / "generator_default.json", "--ins", ins, "-o", path]
    if ages:
        args += ["--ages", DATA / "donor_ages.json"]
    run(*args)


def test_generate_is_reproducible(tmp_path):
    generate(tmp_path / "a.json", 2009, 5, 1)
    generate(tmp_path / "b.json", 2009, 5, 1)
    assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()
    doc = json.loads((tmp_path / "a.json").read_text())
    assert doc["mode"] == "weighted"
    assert [p["label"] for p in doc["players"]] == ["ON", "BCYT", "AB"]


def test_sample_swe_verify(tmp_path):
    inst = tmp_path / "i.json"
    generate(inst, 2009, 8, 1, ages=False)
    lines = run("sample", "--instance", inst, "--n", 5, "--seed", 3).stdout.splitlines()
    assert len(lines) == 5
    sizes = {len(json.loads(line)) for line in lines}
    assert len(sizes) == 1
    swe = run("swe", "--instance", inst, "--ia", "card").stdout
    assert len(json.loads(swe)) in sizes
    (tmp_path / "m.json").write_text(swe)
    report = run("verify", "--instance", inst, "--matching", tmp_path / "m.json", "--strict", "card")
    assert json.loads(report.stdout)["is_ne"] is True


def test_experiment_csv_is_byte_identical(tmp_path):
    inst = tmp_path / "inst"
    inst.mkdir()
    for i, (year, seed) in enumerate([(2009, 1), (2013, 2)], start=1):
        generate(inst / f"{i}.json", year, seed, i)
    for mode in ("card", "weighted"):
        a, b = tmp_path / f"{mode}_a.csv", tmp_path / f"{mode}_b.csv"
        for out in (a, b):
            run("experiment", "--mode", mode, "--instances", inst, "--budget", 50, "--no-timings", "--out", out)
        assert a.read_bytes() == b.read_bytes()
        assert len(a.read_text().splitlines()) == 3


def test_bad_input_is_reported(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    result = run("swe", "--instance", bad, check=False)
    assert result.returncode == 2
    assert result.stderr.startswith("error:")
