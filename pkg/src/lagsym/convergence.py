"""Richardson self-convergence ladders.

Level k uses N0 * 2^k cells and tau0 / 2^k (or tau0 / 4^k with
``tau_scaling="parabolic"``). Consecutive levels are compared at the nodes of
the coarser one, and cell values of the finer level are averaged in pairs.
The observed order is log(e_{k-1} / e_k) / log(tau ratio), where e_k is the
max-norm difference of levels k and k+1; with linear scaling this is the
usual log2 ratio, with parabolic scaling it is the order in tau.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .gas import FlowState, GasModel, MassMesh, init_state
from .presets import make_preset
from .schemes import SchemeConfig, run_steps

ZERO_ERROR = 1e-14


@dataclass
class LadderSpec:
    scheme: str
    gas: GasModel
    preset: str
    params: dict = field(default_factory=dict)
    N0: int = 16
    s_range: tuple = (0.0, 1.0)
    r_origin: float = 0.0
    t_end: float = 0.1
    tau0: float = 0.01
    levels: int = 4
    alpha: float = 0.5
    bc: str = "rigid-walls"
    tau_scaling: str = "linear"  # or "parabolic" (tau ~ h^2)
    workers: int = 4


@dataclass
class LadderResult:
    rows: list  # dicts: level, N, h, tau, error, order
    orders: list

    @property
    def min_order(self) -> float:
        finite = [o for o in self.orders if o is not None and math.isfinite(o)]
        return min(finite) if finite else float("nan")

    def csv_rows(self):
        return [[r["level"], r["N"], r["h"], r["tau"], r["error"], r["order"]] for r in self.rows]


def _level(spec: LadderSpec, k: int):
    N = spec.N0 * 2**k
    div = 2**k if spec.tau_scaling == "linear" else 4**k
    tau = spec.tau0 / div
    steps = int(round(spec.t_end / tau))
    if abs(steps * tau - spec.t_end) > 1e-9 * spec.t_end:
        raise ValueError("t_end must be a whole number of coarse steps")
    mesh = MassMesh.uniform(N, *spec.s_range)
    pre = make_preset(spec.preset, spec.gas, spec.s_range, **spec.params)
    st = init_state(pre, mesh, spec.gas, r_origin=spec.r_origin)
    cfg = SchemeConfig(alpha=spec.alpha, bc=spec.bc, tau=tau)
    res = run_steps(spec.scheme, st, mesh, spec.gas, cfg, n_steps=steps, keep_states=False)
    return mesh.hs, tau, res.states[-1]


def _difference(coarse: FlowState, fine: FlowState) -> float:
    pair = lambda x: 0.5 * (x[0::2] + x[1::2])  # noqa: E731
    d = [
        np.max(np.abs(coarse.r - fine.r[0::2])),
        np.max(np.abs(coarse.u - fine.u[0::2])),
        np.max(np.abs(coarse.rho - pair(fine.rho))),
        np.max(np.abs(coarse.p - pair(fine.p))),
    ]
    return float(max(d))


def run_ladder(spec: LadderSpec) -> LadderResult:
    """Run all levels concurrently and tabulate the observed orders."""
    pre = make_preset(spec.preset, spec.gas, spec.s_range, **spec.params)
    if not pre.smooth:
        warnings.warn(f"preset {spec.preset} is not smooth; observed orders are not meaningful", stacklevel=2)
    with ThreadPoolExecutor(max_workers=spec.workers) as ex:
        levels = list(ex.map(lambda k: _level(spec, k), range(spec.levels)))
    errs = [_difference(levels[k][2], levels[k + 1][2]) for k in range(spec.levels - 1)]
    ratio = 2.0 if spec.tau_scaling == "linear" else 4.0
    orders = [None]
    for k in range(1, len(errs)):
        if errs[k] <= ZERO_ERROR or errs[k - 1] <= ZERO_ERROR:
            orders.append(float("nan"))  # flagged undefined: nothing left to converge
        else:
            orders.append(math.log(errs[k - 1] / errs[k]) / math.log(ratio))
    rows = [dict(level=k, N=spec.N0 * 2**k, h=levels[k][0], tau=levels[k][1], error=errs[k], order=orders[k])
            for k in range(len(errs))]
    return LadderResult(rows, orders[1:])
