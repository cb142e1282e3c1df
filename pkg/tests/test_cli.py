import io
import json
import subprocess
import sys

import jsonschema
import pytest

from grigorchuk.cli import EXIT_CHECK, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, RunConfig, emit_plot_data, main, run
from grigorchuk.growth import GROWTH_SCHEMA, enumerate_ball
from grigorchuk.walks import WALKS_SCHEMA


def run_cfg(**kw):
    out = io.StringIO()
    status = run(RunConfig(**kw), out)
    return status, out.getvalue()


def test_config_round_trip(tmp_path, capsys):
    cfg = RunConfig("walk", oracle="(01)*", steps=4, samples=0, workers=2)
    assert RunConfig.from_json(cfg.to_json()) == cfg
    with pytest.raises(ValueError):
        RunConfig.from_json('{"command": "growth", "bogus": 1}')
    assert main(["--dump-config", "growth", "--radius", "3", "--oracle", "(01)*"]) == EXIT_OK
    dumped = capsys.readouterr().out
    path = tmp_path / "cfg.json"
    path.write_text(dumped)
    assert RunConfig.from_json(dumped).radius == 3
    assert main(["--config", str(path), "growth", "--radius", "4"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["oracle"] == "(01)*" and data["radius"] == 4


def test_growth_json(tmp_path):
    status, text = run_cfg(command="growth", radius=5)
    assert status == EXIT_OK
    data = json.loads(text)
    jsonschema.validate(data, GROWTH_SCHEMA)
    assert [r["ball"] for r in data["rows"]] == [1, 5, 11, 23, 40, 68]


def test_growth_other_formats():
    _, csv = run_cfg(command="growth", radius=3, format="csv")
    assert csv.splitlines()[-1] == "3,23,12"
    _, plot = run_cfg(command="growth", radius=3, format="text")
    assert plot.startswith("n,ball,log_ball,loglog_ball\n0,1,0.0,\n")


def test_byte_identical_across_workers():
    _, one = run_cfg(command="growth", radius=8, workers=1)
    _, many = run_cfg(command="growth", radius=8, workers=3)
    assert one == many
    _, w1 = run_cfg(command="walk", steps=4, samples=70_000, seed=3, workers=1)
    _, w3 = run_cfg(command="walk", steps=4, samples=70_000, seed=3, workers=3)
    assert w1 == w3


def test_walk_json():
    status, text = run_cfg(command="walk", steps=4, samples=1000)
    data = json.loads(text)
    jsonschema.validate(data, WALKS_SCHEMA)
    assert data["rows"][2]["P"] == "1/4"
    assert status == EXIT_OK


def test_exit_codes():
    assert run_cfg(command="growth", oracle="(013)*")[0] == EXIT_USAGE
    assert run_cfg(command="nope")[0] == EXIT_USAGE
    assert run_cfg(command="growth", radius=10, max_elements=50)[0] == EXIT_RESOURCE
    assert run_cfg(command="contraction", radius=5, constant=0.0)[0] == EXIT_CHECK
    assert run_cfg(command="contraction", radius=5)[0] == EXIT_OK
    assert run_cfg(command="relators", oracle="(01)*")[0] == EXIT_USAGE
    assert run_cfg(command="orbit", base="(1)")[0] == EXIT_USAGE


def test_other_commands():
    for cmd, kw in [("schreier", {"level": 3}), ("orbit", {"radius": 5}),
                    ("inverted-orbit", {"steps": 4}), ("constants", {}),
                    ("classify", {"oracle": "0(12)*"}), ("relators", {"depth": 2}),
                    ("psi", {"measure": "kaimanovich", "length_cap": 20})]:
        status, text = run_cfg(command=cmd, **kw)
        assert status == EXIT_OK, cmd
        json.loads(text)
    _, text = run_cfg(command="psi", measure="kaimanovich", length_cap=24, tol=1e-3)
    assert json.loads(text)["self_similar"] is True
    _, text = run_cfg(command="schreier", level=2, format="text")
    assert len(text.splitlines()) == 16
    _, text = run_cfg(command="relators", depth=0, format="text")
    assert text.splitlines()[-1] == "adacacadacacadacacadacac"


def test_custom_measure():
    status, text = run_cfg(command="walk", steps=2, samples=0,
                           measure='{"a": "1/2", "b": "1/6", "c": "1/6", "d": "1/6"}')
    assert status == EXIT_OK
    # (1/2)^2 + 3 (1/6)^2
    assert json.loads(text)["rows"][2]["P"] == "1/3"


def test_emit_plot_data(ctx_xi):
    text = emit_plot_data(enumerate_ball(ctx_xi, 2))
    assert text.count("\n") == 4


def test_module_entry_point(tmp_path):
    meta = tmp_path / "meta.json"
    proc = subprocess.run([sys.executable, "-m", "grigorchuk", "--metadata", str(meta),
                           "classify", "--oracle", "(012)*"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["in_Theta"] is True
    assert json.loads(meta.read_text())["status"] == 0
    bad = subprocess.run([sys.executable, "-m", "grigorchuk", "growth", "--oracle", "012"],
                         capture_output=True, text=True)
    assert bad.returncode == EXIT_USAGE and "position 3" in bad.stderr
