"""Run a configured simulation and write its outputs."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from .config import RunConfig
from .errors import StepFailure
from .gas import MassMesh, init_state
from .io import MonitorWriter, write_json, write_snapshot
from .monitors import LawMonitor
from .presets import make_preset
from .schemes import run_steps

log = logging.getLogger(__name__)


def build_initial(cfg: RunConfig):
    mesh = MassMesh.uniform(cfg.N, cfg.s_min, cfg.s_max)
    pre = make_preset(cfg.preset, cfg.gas, (cfg.s_min, cfg.s_max), **cfg.preset_params)
    return mesh, init_state(pre, mesh, cfg.gas, r_origin=cfg.r_origin)


def run_config(cfg: RunConfig, outdir) -> dict:
    """Advance the configured problem, writing snapshots, monitors.csv and summary.json.

    A step failure still flushes the monitor series, the last good snapshot
    and a summary with ``"status": "step-failure"``, then re-raises.
    """
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    gas, scfg = cfg.gas, cfg.scheme_config()
    mesh, state = build_initial(cfg)
    monitors = [LawMonitor(law, cfg.scheme, gas, scfg) for law in cfg.monitor_laws()]
    writer = MonitorWriter(out / "monitors.csv")
    snaps = []

    def snap(k, t, st):
        name = f"snapshot_{k:06d}.csv"
        write_snapshot(out / name, st, mesh, gas, t)
        snaps.append(name)

    snap(0, mesh.t, state)
    stats = {"iterations": [], "residual": 0.0, "retries": 0, "fallbacks": 0}
    last = {"k": 0, "t": mesh.t, "state": state}

    def cb(k, t, old, t_new, new, rep):
        for m in monitors:
            writer.write(m.update(mesh, t, old, t_new, new).row(t_new))
        stats["iterations"].append(rep.iterations)
        stats["residual"] = max(stats["residual"], rep.residual)
        stats["retries"] += rep.retries
        stats["fallbacks"] += int(rep.fallback_used)
        last.update(k=k + 1, t=t_new, state=new)
        if cfg.snapshot_every and (k + 1) % cfg.snapshot_every == 0:
            snap(k + 1, t_new, new)

    status, error = "ok", None
    try:
        run_steps(cfg.scheme, state, mesh, gas, scfg, n_steps=cfg.steps, t_end=cfg.t_end, callback=cb,
                  keep_states=False)
    except StepFailure as exc:
        status, error = "step-failure", str(exc)
        log.error("run stopped: %s", exc)
    finally:
        writer.close()
    if not snaps or snaps[-1] != f"snapshot_{last['k']:06d}.csv":
        snap(last["k"], last["t"], last["state"])
    its = stats["iterations"]
    summary = {
        "status": status,
        "error": error,
        "scheme": cfg.scheme,
        "n": gas.n,
        "gamma": gas.gamma,
        "preset": cfg.preset,
        "steps": last["k"],
        "final_t": last["t"],
        "max_drift": {m.law_id: m.max_drift for m in monitors},
        "max_abs_residual": {m.law_id: m.max_residual for m in monitors},
        "newton": {
            "mean_iterations": float(np.mean(its)) if its else 0.0,
            "max_iterations": int(max(its)) if its else 0,
            "max_residual": stats["residual"],
            "retries": stats["retries"],
            "fallbacks": stats["fallbacks"],
        },
        "snapshots": snaps,
    }
    write_json(out / "summary.json", summary)
    if status != "ok":
        raise StepFailure(error)
    return summary
