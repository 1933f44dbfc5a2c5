"""Discrete conservation laws of the schemes and their drift diagnostics.

Every law is evaluated in divergence form on one step (old layer at t, new
layer at t + tau). Cell laws read

    (T_hat_c - T_c) / tau + (F_{c+1} - F_c) / h = 0

with node fluxes F, node laws read

    (T_hat_i - T_i) / tau + (F_right(i) - F_left(i)) / h = 0

with cell fluxes. Boundary flux is whatever the divergence leaves on the
domain ends, so that sum(residual) h tau equals the change of the total plus
tau times the boundary flux exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ApplicabilityError
from .gas import FlowState, GasModel, MassMesh
from .schemes import SchemeConfig, _topology, r_factor

MONITOR_LAWS = (
    "mass",
    "energy",
    "momentum-n0",
    "center-of-mass-n0",
    "additional-1",
    "additional-2",
    "entropy-pathline",
)

_CELL_LAWS = ("mass", "energy", "additional-1", "additional-2", "entropy-pathline")


def applicable_monitor_laws(scheme: str, gas: GasModel, bc: str = "rigid-walls") -> list[str]:
    if scheme == "explicit-invariant":
        return ["mass", "entropy-pathline"]
    out = ["mass", "energy"]
    if gas.n == 0:
        out += ["momentum-n0", "center-of-mass-n0"]
    if scheme == "sp-modified":
        out += ["additional-1", "additional-2"]
    return out


def check_law(law_id: str, scheme: str, gas: GasModel) -> None:
    if law_id not in MONITOR_LAWS:
        raise KeyError(f"unknown discrete law {law_id!r}; expected one of {MONITOR_LAWS}")
    if law_id not in applicable_monitor_laws(scheme, gas):
        raise ApplicabilityError(f"discrete law {law_id} does not hold for scheme {scheme} with n={gas.n}")


def _weights(scheme, cfg):
    return 0.5 if scheme == "sp-modified" else cfg.alpha


def weighted_pressure(old: FlowState, new: FlowState, scheme: str, cfg: SchemeConfig):
    a = _weights(scheme, cfg)
    return a * new.p + (1 - a) * old.p


def _node_pressure_star(P, topo):
    """(P_left + P_right)/2 at every node, ghosts mirrored, periodic wrapped."""
    N = topo.N
    Ps = np.empty(N + 1)
    Ps[1:N] = 0.5 * (P[:-1] + P[1:])
    if topo.bc == "periodic":
        Ps[0] = Ps[N] = 0.5 * (P[-1] + P[0])
    else:
        Ps[0], Ps[N] = P[0], P[-1]
    return Ps


def _avg(x):
    return 0.5 * (x[:-1] + x[1:])


def law_terms(law_id, old: FlowState, new: FlowState, mesh: MassMesh, gas: GasModel, cfg: SchemeConfig,
              scheme: str, t: float, tau: float):
    """Return (T_old, T_new, flux, kind); kind is 'cell' (flux at nodes) or 'node' (flux at cells)."""
    n, g = gas.n, gas.gamma
    topo = _topology(old.N, cfg.bc, n)
    th = t + tau
    P = weighted_pressure(old, new, scheme, cfg)
    R = r_factor(old.r, new.r, n) * np.ones_like(old.r)
    ubar = 0.5 * (old.u + new.u)
    if law_id == "mass":
        vel = old.u if scheme == "explicit-invariant" else ubar
        return 1.0 / old.rho, 1.0 / new.rho, -R * vel, "cell"
    if law_id == "entropy-pathline":
        return old.p / old.rho**g, new.p / new.rho**g, np.zeros_like(old.r), "cell"
    Ps = _node_pressure_star(P, topo)
    if law_id == "energy":
        T0 = old.eps + 0.5 * _avg(old.u**2)
        T1 = new.eps + 0.5 * _avg(new.u**2)
        return T0, T1, R * Ps * ubar, "cell"
    if law_id == "additional-1":
        def T(s, tt):
            return 2 * tt * (s.eps + 0.5 * _avg(s.u**2)) - _avg(s.r * s.u)

        rhalf = 0.5 * (old.r + new.r)
        return T(old, t), T(new, th), R * Ps * (2 * 0.5 * (t + th) * ubar - rhalf), "cell"
    if law_id == "additional-2":
        def T(s, tt):
            return (tt**2 * (s.eps + 0.5 * _avg(s.u**2)) - tt * _avg(s.r * s.u)
                    + 0.5 * _avg(s.r**2) + tau**2 / 8 * _avg(s.u**2))

        rhalf = 0.5 * (old.r + new.r)
        flux = R * Ps * (0.5 * (t**2 + th**2) * ubar - 0.5 * (t + th) * rhalf)
        return T(old, t), T(new, th), flux, "cell"
    if law_id == "momentum-n0":
        return old.u, new.u, P, "node"
    if law_id == "center-of-mass-n0":
        return old.r - t * old.u, new.r - th * new.u, -0.5 * (t + th) * P, "node"
    raise KeyError(law_id)


def _residual_and_boundary(T0, T1, flux, kind, h, tau, topo):
    if kind == "cell":
        res = (T1 - T0) / tau + (flux[1:] - flux[:-1]) / h
        boundary = flux[-1] - flux[0]
        return res, boundary, h * np.ones_like(T0)
    i = topo.free
    res = (T1[i] - T0[i]) / tau + (flux[topo.right] - flux[topo.left]) / h
    boundary = float(np.sum(flux[topo.right] - flux[topo.left]))
    return res, boundary, h * np.ones(i.size)


def discrete_cl_residual(law_id: str, old: FlowState, new: FlowState, mesh: MassMesh, cfg: SchemeConfig,
                         gas: GasModel, scheme: str = "sp", t: float | None = None, tau: float | None = None):
    """Pointwise residual of a discrete conservation law over one step."""
    check_law(law_id, scheme, gas)
    t = mesh.t if t is None else t
    tau = mesh.tau if tau is None else tau
    if tau is None:
        raise ValueError("step size unknown: pass tau or a mesh with tau")
    T0, T1, flux, kind = law_terms(law_id, old, new, mesh, gas, cfg, scheme, t, tau)
    topo = _topology(old.N, cfg.bc, gas.n)
    return _residual_and_boundary(T0, T1, flux, kind, mesh.hs, tau, topo)[0]


def entropy_work_relations(old: FlowState, new: FlowState, cfg: SchemeConfig, gas: GasModel,
                           scheme: str = "sp", tau: float = 1.0):
    """(entropy residual, work residual) per cell.

    Entropy: dp/p^(alpha) - gamma drho/rho^(alpha) for the implicit schemes,
    and S_hat/S - 1 for the explicit scheme. Work: (eps_t + p^(alpha) (1/rho)_t).
    """
    a = _weights(scheme, cfg)
    P = a * new.p + (1 - a) * old.p
    if scheme == "explicit-invariant":
        S0, S1 = old.p / old.rho**gas.gamma, new.p / new.rho**gas.gamma
        ent = S1 / S0 - 1.0
    else:
        rho_a = a * new.rho + (1 - a) * old.rho
        ent = (new.p - old.p) / P - gas.gamma * (new.rho - old.rho) / rho_a
    work = (new.eps - old.eps) / tau + P * (1.0 / new.rho - 1.0 / old.rho) / tau
    return ent, work


@dataclass
class MonitorReport:
    law_id: str
    residual: np.ndarray
    total: float
    drift: float
    boundary_flux: float
    max_abs_residual: float

    def row(self, t):
        return {"t": t, "law_id": self.law_id, "total": self.total, "drift": self.drift,
                "max_abs_residual": self.max_abs_residual}


@dataclass
class LawMonitor:
    """Accumulates the total, the boundary flux and the drift of one law along a run.

    drift = (change of total + accumulated boundary outflow) / max(|total(0)|, 1).
    """

    law_id: str
    scheme: str
    gas: GasModel
    cfg: SchemeConfig
    total0: float | None = None
    change: float = 0.0
    boundary: float = 0.0
    max_drift: float = 0.0
    max_residual: float = 0.0
    history: list = field(default_factory=list)

    def __post_init__(self):
        check_law(self.law_id, self.scheme, self.gas)

    def update(self, mesh, t, old, t_new, new) -> MonitorReport:
        tau = t_new - t
        T0, T1, flux, kind = law_terms(self.law_id, old, new, mesh, self.gas, self.cfg, self.scheme, t, tau)
        topo = _topology(old.N, self.cfg.bc, self.gas.n)
        res, bflux, w = _residual_and_boundary(T0, T1, flux, kind, mesh.hs, tau, topo)
        if kind == "node":
            T0, T1 = T0[topo.free], T1[topo.free]
        tot0, tot1 = float(np.sum(T0 * w)), float(np.sum(T1 * w))
        if self.total0 is None:
            self.total0 = tot0
        self.change += tot1 - tot0
        self.boundary += tau * bflux
        drift = (self.change + self.boundary) / max(abs(self.total0), 1.0)
        mar = float(np.max(np.abs(res), initial=0.0))
        self.max_drift = max(self.max_drift, abs(drift))
        self.max_residual = max(self.max_residual, mar)
        rep = MonitorReport(self.law_id, res, tot1, drift, self.boundary, mar)
        self.history.append(rep.row(t_new))
        return rep
