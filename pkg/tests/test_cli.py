import json

import pytest

from jamnet import cli
from jamnet.errors import SpecError
from jamnet.experiments import (
    CSV_FIELDS,
    ResultRow,
    emit,
    load_spec,
    parse_jsonl,
    preset_names,
    run_experiment,
)

SMALL = """
[experiment]
name = small
metric = outage
sweep = jammer.N_J
grid = 0, 1, 4
engines = both
trials = 2000
seed = 5
"""


def write(tmp_path, text, name="spec.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_presets_bundled():
    names = preset_names()
    assert "fig2_outage_vs_NJ" in names
    for name in names:
        load_spec(name)


def test_header_only_csv():
    assert emit([], "csv") == ",".join(CSV_FIELDS) + "\n"


def test_analytic_only_row_leaves_mc_empty():
    text = emit([ResultRow(4, analytic=0.5)], "csv")
    assert text.splitlines()[1] == "4,0.5,,,,,"


def test_twelve_significant_digits():
    line = emit([ResultRow(1, analytic=1 / 3)], "csv").splitlines()[1]
    assert line.split(",")[1] == "0.333333333333"


def test_jsonl_round_trip(tmp_path):
    spec = load_spec(write(tmp_path, SMALL))
    rows = run_experiment(spec)
    assert parse_jsonl(emit(rows, "jsonl")) == rows
    first = json.loads(emit(rows, "jsonl").splitlines()[0])
    assert list(first) == ["sweep", "analytic", "mc", "mc_stderr", "trials", "wall_ms", "flags"]


def test_rows_in_grid_order_and_complete(tmp_path):
    rows = run_experiment(load_spec(write(tmp_path, SMALL)), timing=True)
    assert [r.sweep for r in rows] == [0, 1, 4]
    assert all(r.analytic is not None and r.mc is not None and r.wall_ms >= 0 for r in rows)
    assert all(abs(r.analytic - r.mc) < 4 * r.mc_stderr + 1e-3 for r in rows)


def test_empty_grid_rejected(tmp_path):
    with pytest.raises(SpecError):
        load_spec(write(tmp_path, SMALL.replace("grid = 0, 1, 4", "grid =")))


def test_seed_required_for_monte_carlo(tmp_path):
    with pytest.raises(SpecError):
        load_spec(write(tmp_path, SMALL.replace("seed = 5", "")))
    load_spec(write(tmp_path, SMALL.replace("seed = 5", "").replace("both", "analytic")))


def test_unknown_sweep_key(tmp_path):
    with pytest.raises(SpecError):
        load_spec(write(tmp_path, SMALL.replace("jammer.N_J", "jammer.count")))


def test_set_override(tmp_path):
    spec = load_spec(write(tmp_path, SMALL), ["network.p=0.5", "experiment.grid=2"])
    assert spec.grid == [2] and spec.config["network"]["p"] == "0.5"
    with pytest.raises(SpecError):
        load_spec(write(tmp_path, SMALL), ["p=0.5"])


def test_cli_byte_identical_runs(tmp_path):
    spec = write(tmp_path, SMALL)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["run", spec, "--out", str(a)]) == 0
    assert cli.main(["run", spec, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_thread_count_does_not_change_output(tmp_path, monkeypatch):
    spec = write(tmp_path, SMALL.replace("trials = 2000", "trials = 50000"))
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("JAMNET_THREADS", threads)
        path = tmp_path / f"t{threads}.csv"
        cli.main(["run", spec, "--out", str(path)])
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["run", "no_such_preset"]) == 1
    bad = write(tmp_path, SMALL.replace("grid = 0, 1, 4", "grid = 1, -3"))
    assert cli.main(["run", bad, "--engine", "analytic"]) == 2
    out = capsys.readouterr().out
    assert "error:DomainError" in out


def test_cli_flags_override(tmp_path, capsys):
    spec = write(tmp_path, SMALL)
    assert cli.main(["run", spec, "--engine", "analytic", "--format", "jsonl", "--set", "experiment.grid=1"]) == 0
    rows = parse_jsonl(capsys.readouterr().out)
    assert len(rows) == 1 and rows[0].mc is None


def test_cli_unwritable_output(tmp_path):
    spec = write(tmp_path, SMALL)
    assert cli.main(["run", spec, "--engine", "analytic", "--out", str(tmp_path / "missing" / "x.csv")]) == 1


def test_cli_list(capsys):
    assert cli.main(["list"]) == 0
    assert "retx_drop" in capsys.readouterr().out


def test_njstar_and_retx_rows(tmp_path):
    spec = load_spec("retx_drop", ["experiment.grid=8"])
    (row,) = run_experiment(spec)
    assert 0 < row.analytic < 1 and row.mc is None
    spec = load_spec("njstar_vs_p", ["experiment.grid=0.1", "sizing.N_max=50"])
    (row,) = run_experiment(spec)
    assert row.analytic == 50 and "saturated" in row.flags


def test_inline_comments_allowed(tmp_path):
    text = SMALL.replace("metric = outage", "metric = outage   # outage | ser | njstar | retx")
    assert load_spec(write(tmp_path, text)).metric == "outage"
