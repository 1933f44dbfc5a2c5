"""Snapshot, monitor and summary writers.

Snapshots hold one row per node i = 0..N. Node columns (s, r, u) belong to
node i, cell columns (rho, p, eps, S) to the cell i+1/2 on its right; the
last row leaves the cell columns empty. Floats are written with 17
significant digits, which round-trips IEEE doubles exactly.
"""

from __future__ import annotations

import csv
import json
import math
import os
from pathlib import Path

import numpy as np

from .gas import FlowState, GasModel, MassMesh

SNAPSHOT_COLUMNS = ("i", "s", "r", "u", "rho", "p", "eps", "S")
SNAPSHOT_HEADER = ("i", "s [mass]", "r [length]", "u [length/time]", "rho [mass/length^(n+1)]",
                   "p [pressure]", "eps [energy/mass]", "S [p/rho^gamma]")
MONITOR_COLUMNS = ("t", "law_id", "total", "drift", "max_abs_residual")
ENV_OUTPUT_DIR = "LAGSYM_OUTPUT_DIR"


def fmt(x) -> str:
    return "%.17g" % x


def output_dir(configured) -> Path:
    """The environment variable wins over the configured directory."""
    return Path(os.environ.get(ENV_OUTPUT_DIR) or configured)


def write_snapshot(path, state: FlowState, mesh: MassMesh, gas: GasModel, t: float) -> None:
    S = state.entropy(gas)
    N = state.N
    with open(path, "w", newline="") as fh:
        fh.write(f"# t={fmt(t)} n={gas.n} gamma={fmt(gas.gamma)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SNAPSHOT_HEADER)
        for i in range(N + 1):
            row = [str(i), fmt(mesh.s_nodes[i]), fmt(state.r[i]), fmt(state.u[i])]
            if i < N:
                row += [fmt(state.rho[i]), fmt(state.p[i]), fmt(state.eps[i]), fmt(S[i])]
            else:
                row += ["", "", "", ""]
            w.writerow(row)


def read_snapshot(path):
    """Return (t, gas, mesh, state) from a snapshot file."""
    with open(path, newline="") as fh:
        meta = fh.readline()
        if not meta.startswith("#"):
            raise ValueError(f"{path}: missing snapshot metadata line")
        kv = dict(item.split("=", 1) for item in meta[1:].split())
        rows = list(csv.reader(fh))
    if tuple(c.split(" ")[0] for c in rows[0]) != SNAPSHOT_COLUMNS:
        raise ValueError(f"{path}: unexpected header {rows[0]}")
    body = rows[1:]
    col = lambda k, rr: np.array([float(r[k]) for r in rr])  # noqa: E731
    s, r, u = col(1, body), col(2, body), col(3, body)
    cells = body[:-1]
    state = FlowState(r=r, u=u, rho=col(4, cells), p=col(5, cells), eps=col(6, cells))
    t = float(kv["t"])
    gas = GasModel(int(kv["n"]), float(kv["gamma"]))
    return t, gas, MassMesh(s, t=t), state


class MonitorWriter:
    """Streams monitor rows to CSV; flushed after each write so partial runs keep their data."""

    def __init__(self, path):
        self.fh = open(path, "w", newline="")
        self.w = csv.writer(self.fh, lineterminator="\n")
        self.w.writerow(MONITOR_COLUMNS)

    def write(self, row: dict) -> None:
        self.w.writerow([fmt(row["t"]), row["law_id"], fmt(row["total"]), fmt(row["drift"]),
                         fmt(row["max_abs_residual"])])
        self.fh.flush()

    def close(self) -> None:
        self.fh.close()


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps_json(obj) -> str:
    """Stable JSON (sorted keys; non-finite floats become null)."""
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_json(obj))
