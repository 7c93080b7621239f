import csv
import json
import subprocess
import sys

import pytest

from distortion_lab.harness import cli, core, suites
from distortion_lab.harness.core import CSV_COLUMNS, SweepConfig, parse_range, run_once, run_sweep
from distortion_lab.errors import BadParams, UnknownName
from distortion_lab.model import load_instance, random_instance, save_instance
from distortion_lab.adversarial import gen_tightness


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_gen_query_lb_variant(tmp_path, capsys):
    out = tmp_path / "q.json"
    assert cli.main(["gen", "--family", "query-lb", "--k", "6", "--variant", "3", "--out", str(out)]) == 0
    inst = load_instance(out)
    assert inst.m == 10
    assert "m=10" in capsys.readouterr().out


def test_gen_random_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert cli.main(["gen", "--random", "--n", "20", "--m", "8", "--seed", "7", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.json"
    cli.main(["gen", "--random", "--n", "20", "--m", "8", "--seed", "8", "--out", str(c)])
    assert c.read_bytes() != a.read_bytes()


def test_gen_remark_and_run_greedy(tmp_path, capsys):
    inst_path = tmp_path / "remark.json"
    assert cli.main(["gen", "--family", "greedy-remark", "--n", "10", "--out", str(inst_path)]) == 0
    assert load_instance(inst_path).same_as(gen_tightness("greedy-remark", n=10))
    csv_path = tmp_path / "row.csv"
    assert cli.main(["run", str(inst_path), "--rule", "greedy", "--k", "3", "--out", str(csv_path)]) == 0
    assert "[0, 3, 4]" in capsys.readouterr().out
    (row,) = _rows(csv_path)
    assert float(row["dist_sc"]) == pytest.approx(10 / 3, abs=1e-3)


def test_run_coreset_with_bounds(tmp_path):
    path = save_instance(random_instance(3, 60, 30, active_only=True), tmp_path / "r.json")
    assert cli.main(["run", str(path), "--rule", "coreset", "--k", "4", "--assert-bounds",
                     "--counterexamples", str(tmp_path / "ce")]) == 0
    assert not (tmp_path / "ce").exists()


def test_run_errors(tmp_path, capsys):
    path = save_instance(random_instance(1, 10, 5), tmp_path / "r.json")
    assert cli.main(["run", str(path), "--rule", "two-of-three"]) == 2
    assert "WrongM" in capsys.readouterr().err
    assert cli.main(["run", str(tmp_path / "missing.json"), "--rule", "greedy", "--k", "3"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["run", str(path), "--rule", "nope"])
    assert exc.value.code == 2
    assert cli.main(["gen", "--family", "query-lb", "--k", "2"]) == 2


def test_violation_is_persisted(tmp_path, monkeypatch):
    monkeypatch.setattr(core, "bound_violations", lambda *a, **kw: ["dist_sc = 9 exceeds 5"])
    path = save_instance(random_instance(5, 30, 12, active_only=True), tmp_path / "r.json")
    ce = tmp_path / "ce"
    assert cli.main(["run", str(path), "--rule", "coreset", "--k", "3", "--assert-bounds",
                     "--counterexamples", str(ce)]) == 3
    (saved,) = ce.iterdir()
    assert load_instance(saved).same_as(load_instance(path))


def test_sweep_rows_and_header(tmp_path):
    out = tmp_path / "s.csv"
    argv = ["sweep", "--rule", "greedy,coreset,full-axis-dp,median2", "--k", "3-4", "--n", "10-30",
            "--m", "6-12", "--trials", "100", "--seed", "11", "--out", str(out)]
    assert cli.main(argv) == 0
    header = out.read_text().splitlines()[0]
    assert header == ",".join(CSV_COLUMNS)
    rows = _rows(out)
    assert len(rows) == 400
    assert [(r["instance_id"], r["rule"]) for r in rows] == sorted((r["instance_id"], r["rule"]) for r in rows)


def test_sweep_reproducible_across_threads(tmp_path, monkeypatch):
    cfg = SweepConfig(rules=("greedy", "coreset"), k=(3, 5), n=(10, 30), m=(6, 14), trials=25, seed=4)
    strip = lambda rows: [{c: v for c, v in r.items() if c != "runtime_ms"} for r in rows]
    one, _ = run_sweep(cfg, threads=1)
    four, _ = run_sweep(cfg, threads=4)
    assert strip(one) == strip(four)
    monkeypatch.setenv(core.THREADS_ENV, "3")
    assert core.thread_count() == 3
    monkeypatch.setenv(core.THREADS_ENV, "x")
    with pytest.raises(BadParams):
        core.thread_count()


def test_sweep_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    out = tmp_path / "c.csv"
    cfg.write_text(json.dumps({"rules": ["greedy"], "k": 3, "n": [8, 12], "m": "5-7", "trials": 6,
                               "seed": 2, "out": str(out)}))
    assert cli.main(["sweep", "--config", str(cfg)]) == 0
    assert len(_rows(out)) == 6
    assert cli.main(["sweep", "--config", str(cfg), "--trials", "3"]) == 0
    assert len(_rows(out)) == 3
    loaded = SweepConfig.from_json(cfg)
    assert loaded.k == (3,) and loaded.n == (8, 9, 10, 11, 12)


def test_sweep_config_validation():
    with pytest.raises(UnknownName):
        SweepConfig(rules=("nope",))
    with pytest.raises(BadParams):
        SweepConfig(k=(5,), m=(4, 6))
    with pytest.raises(BadParams):
        SweepConfig(rules=("two-of-three",), m=(4,))
    with pytest.raises(BadParams):
        SweepConfig(rules=("coreset",), k=(2, 3))
    assert parse_range("3,5,3") == (3, 5)
    assert parse_range([2, 4]) == (2, 3, 4)
    with pytest.raises(BadParams):
        parse_range("5-3")


def test_csv_row_distortion_matches_ratio():
    res = run_once(random_instance(9, 25, 10, active_only=True), "greedy", 3)
    row = res.row()
    assert row["dist_sc"] == pytest.approx(row["sc_rule"] / row["sc_opt"])
    text = core.format_rows([row])
    assert text.splitlines()[1].count(",") == len(CSV_COLUMNS) - 1


@pytest.mark.parametrize("suite", ["exact", "lower-bounds"])
def test_verify_passes(suite, capsys):
    assert cli.main(["verify", suite, "--scale", "0.2"]) == 0
    assert f"[PASS] {suite}" in capsys.readouterr().out


def test_verify_failure_saves_counterexample(tmp_path, monkeypatch):
    inst = random_instance(0, 5, 4)

    def broken(seed, scale):
        raise suites._Fail("planted", inst)

    monkeypatch.setitem(suites._RUNNERS, "exact", broken)
    ce = tmp_path / "ce"
    assert cli.main(["verify", "exact", "--counterexamples", str(ce)]) == 3
    (saved,) = ce.iterdir()
    assert load_instance(saved).same_as(inst)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "distortion_lab.harness.cli", "verify", "exact",
                           "--scale", "0.05"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "verify: PASS" in proc.stdout
