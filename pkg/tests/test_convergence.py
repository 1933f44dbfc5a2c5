import json
import math
from pathlib import Path

import pytest

from lagsym.cli import EXIT_OK, main
from lagsym.convergence import LadderSpec, _level, run_ladder
from lagsym.gas import GasModel
from lagsym.io import ENV_OUTPUT_DIR

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
BUMP = dict(U=0.1, shape="bump", width=0.15)


def test_uniform_static_orders_are_flagged_undefined():
    res = run_ladder(LadderSpec("sp", GasModel(0, 1.4), "uniform-static", N0=8, t_end=0.04, tau0=0.01, levels=3))
    assert all(r["error"] <= 1e-14 for r in res.rows)
    assert all(math.isnan(o) for o in res.orders)
    assert math.isnan(res.min_order)


def test_non_smooth_preset_warns():
    with pytest.warns(UserWarning, match="not smooth"):
        run_ladder(LadderSpec("sp", GasModel(0, 1.4), "sod-like-two-state", N0=8, t_end=0.04, tau0=0.01, levels=3))


def test_t_end_must_be_whole_number_of_steps():
    with pytest.raises(ValueError):
        _level(LadderSpec("sp", GasModel(0, 1.4), "uniform-static", N0=8, t_end=0.035, tau0=0.01), 0)


@pytest.mark.parametrize("n", [0, 1])
def test_sp_is_second_order(n):
    spec = LadderSpec("sp", GasModel(n, 1.4), "isentropic-smooth", BUMP, N0=32, r_origin=0.5 * n,
                      t_end=0.1, tau0=0.005, levels=4)
    res = run_ladder(spec)
    assert res.min_order >= 1.8, res.orders


def test_explicit_is_first_order_in_tau():
    spec = LadderSpec("explicit-invariant", GasModel.special(0), "isentropic-smooth", BUMP, N0=32,
                      t_end=0.1, tau0=0.005, levels=4, tau_scaling="parabolic")
    res = run_ladder(spec)
    assert res.min_order >= 0.9, res.orders
    assert [r["tau"] for r in res.rows] == pytest.approx([0.005, 0.005 / 4, 0.005 / 16])


def test_convergence_command(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(ENV_OUTPUT_DIR, str(tmp_path))
    assert main(["convergence", str(CONFIGS / "convergence_sp_n2.toml"), "--levels", "3"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert len(out["orders"]) == 1 and out["min_order"] >= 1.8
    lines = (tmp_path / "convergence.csv").read_text().splitlines()
    assert lines[0] == "level,N,h,tau,error,order" and len(lines) == 3
    assert json.loads((tmp_path / "convergence.json").read_text())["tau_scaling"] == "linear"
