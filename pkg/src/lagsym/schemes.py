"""Time stepping on the staggered Lagrangian mesh.

Three engines:

* ``sp_step``: the implicit conservative scheme with weighted pressure
  P = alpha p_hat + (1 - alpha) p, the R factor for r^n, and the
  polytropic closure eps = p / ((gamma - 1) rho) on both layers;
* ``sp_step_modified``: the same four equations closed by the modified
  discrete equation of state that keeps the two extra gamma* laws;
* ``explicit_invariant_step``: the explicit invariant scheme for gamma*.

For the implicit schemes the layer reduces to the new node velocities:
given u_hat, the coordinates follow from r_hat = r + tau (u + u_hat)/2, the
specific volume from the mass equation, and the cell pressure from the
closure in closed form. Newton then runs on the node momentum equations,
whose Jacobian is tridiagonal (cyclic for periodic slabs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla

from .errors import ApplicabilityError, DomainError, StepFailure
from .gas import FlowState, GasModel, MassMesh, cell_volumes, specific_internal_energy

BCS = ("rigid-walls", "fixed-center", "periodic")
SCHEMES = ("sp", "sp-modified", "explicit-invariant")


@dataclass(frozen=True)
class SchemeConfig:
    alpha: float = 0.5
    newton_tol: float = 1e-12
    newton_max_iter: int = 50
    bc: str = "rigid-walls"
    cfl_safety: float = 0.5
    tau: Optional[float] = None  # fixed step; CFL step when None
    tau_max: Optional[float] = None
    max_retries: int = 8

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError("alpha must lie in [0, 1]")
        if not self.newton_tol > 0:
            raise DomainError("newton_tol must be positive")
        if self.newton_max_iter < 1:
            raise DomainError("newton_max_iter must be at least 1")
        if self.bc not in BCS:
            raise DomainError(f"bc must be one of {BCS}")
        if not 0.0 < self.cfl_safety <= 1.0:
            raise DomainError("cfl_safety must lie in (0, 1]")
        if self.tau is not None and not self.tau > 0:
            raise DomainError("tau must be positive")


@dataclass
class StepReport:
    iterations: int = 0
    residual: float = 0.0
    tau: float = 0.0
    converged: bool = True
    line_search_failures: int = 0
    fallback_used: bool = False
    retries: int = 0


# ---------------------------------------------------------------- geometry helpers


def r_factor(r, r_hat, n: int):
    """(r_hat^{n+1} - r^{n+1}) / ((n+1)(r_hat - r)), written without the division."""
    r = np.asarray(r, dtype=float)
    r_hat = np.asarray(r_hat, dtype=float)
    if n == 0:
        out = np.ones(np.broadcast(r, r_hat).shape)
    elif n == 1:
        out = 0.5 * (r_hat + r)
    elif n == 2:
        out = (r_hat * r_hat + r_hat * r + r * r) / 3.0
    else:
        raise DomainError("n must be 0, 1 or 2")
    return out if out.ndim else float(out)


def r_factor_dhat(r, r_hat, n: int):
    """Partial derivative of the R factor with respect to r_hat."""
    if n == 0:
        return np.zeros(np.broadcast(r, r_hat).shape)
    if n == 1:
        return 0.5 * np.ones(np.broadcast(r, r_hat).shape)
    return (2.0 * r_hat + r) / 3.0


def cfl_timestep(state: FlowState, mesh: MassMesh, gas: GasModel, cfg: SchemeConfig) -> float:
    """cfl_safety * min_cells h / (rbar^n rho c), capped by cfg.tau_max."""
    n = gas.n
    rbar = 0.5 * (state.r[1:] + state.r[:-1])
    c = np.sqrt(gas.gamma * np.maximum(state.p, 0.0) / state.rho)
    speed = rbar**n * state.rho * c
    with np.errstate(divide="ignore"):
        tau = cfg.cfl_safety * float(np.min(np.where(speed > 0, mesh.hs / speed, np.inf)))
    if cfg.tau_max is not None:
        tau = min(tau, cfg.tau_max)
    if not math.isfinite(tau):
        raise DomainError("CFL step unbounded (vacuum state); set tau_max")
    return tau


# ---------------------------------------------------------------- topology


@dataclass(frozen=True)
class _Topology:
    """Which node velocities are unknown and which cells border each node."""

    N: int
    bc: str
    free: np.ndarray  # node indices with a momentum equation
    left: np.ndarray  # cell on the left of each free node
    right: np.ndarray  # cell on the right of each free node (may mirror left)
    col: np.ndarray  # node index -> unknown index (-1 when fixed); length N+1

    def full(self, x, u_fixed):
        out = u_fixed.copy()
        out[self.free] = x
        if self.bc == "periodic":
            out[self.N] = out[0]
        return out


def _topology(N: int, bc: str, n: int) -> _Topology:
    col = -np.ones(N + 1, dtype=int)
    if bc == "rigid-walls":
        free = np.arange(1, N)
        left, right = free - 1, free.copy()
    elif bc == "fixed-center":
        if n == 0:
            raise ApplicabilityError("fixed-center needs n >= 1")
        free = np.arange(1, N + 1)
        left = free - 1
        right = np.minimum(free, N - 1)  # outer ghost cell mirrors the last cell
    elif bc == "periodic":
        if n != 0:
            raise ApplicabilityError("periodic slabs need n = 0")
        free = np.arange(0, N)
        left, right = (free - 1) % N, free.copy()
    else:
        raise DomainError(f"unknown bc {bc!r}")
    col[free] = np.arange(free.size)
    if bc == "periodic":
        col[N] = 0
    return _Topology(N, bc, free, left, right, col)


def _fixed_velocities(state: FlowState, topo: _Topology) -> np.ndarray:
    u = state.u.copy()
    if topo.bc == "rigid-walls":
        u[0] = u[-1] = 0.0
    elif topo.bc == "fixed-center":
        u[0] = 0.0
    return u


# ---------------------------------------------------------------- implicit layer


@dataclass
class _Layer:
    """Everything on the new layer that follows from the node velocities."""

    uh: np.ndarray
    rh: np.ndarray
    R: np.ndarray
    dR: np.ndarray
    flux: np.ndarray  # R * ubar at nodes
    dflux: np.ndarray  # d flux_i / d uh_i
    dv: np.ndarray  # change of specific volume per cell
    P: np.ndarray  # weighted cell pressure
    dP_left: np.ndarray  # dP_c / d uh at the cell's left node
    dP_right: np.ndarray  # dP_c / d uh at the cell's right node
    ph: np.ndarray
    ok: bool = True


class _Implicit:
    """Shared machinery of the two implicit schemes."""

    def __init__(self, state, mesh, gas, cfg, tau, modified):
        self.s0, self.mesh, self.gas, self.cfg, self.tau = state, mesh, gas, cfg, tau
        self.n, self.g, self.h = gas.n, gas.gamma, mesh.hs
        self.alpha = 0.5 if modified else cfg.alpha
        self.modified = modified
        self.topo = _topology(state.N, cfg.bc, gas.n)
        self.u_fixed = _fixed_velocities(state, self.topo)
        self.v = 1.0 / state.rho
        self.period = state.r[-1] - state.r[0] if cfg.bc == "periodic" else 0.0

    def layer(self, uh) -> _Layer:
        s, n, tau, h, g = self.s0, self.n, self.tau, self.h, self.g
        ubar = 0.5 * (s.u + uh)
        rh = s.r + tau * ubar
        R = r_factor(s.r, rh, n) * np.ones_like(rh)
        dR = r_factor_dhat(s.r, rh, n) * np.ones_like(rh)
        flux = R * ubar
        dflux = 0.5 * R + dR * 0.5 * tau * ubar
        dv = tau * (flux[1:] - flux[:-1]) / h
        d_dv_left, d_dv_right = -tau / h * dflux[:-1], tau / h * dflux[1:]
        vh = self.v + dv
        ok = bool(np.all(vh > 0) and np.all(np.diff(rh) > 0) and (n == 0 or rh[0] >= 0))
        if self.modified:
            P, dPl, dPr = self._modified_pressure(uh, rh, R, dR, dv, d_dv_left, d_dv_right)
            ph = 2.0 * P - s.p
        else:
            a = self.alpha
            num = s.eps - (1 - a) * s.p * dv
            den = self.v / (g - 1) + dv * (1.0 / (g - 1) + a)
            ph = num / den
            dph = (-(1 - a) * s.p * den - num * (1.0 / (g - 1) + a)) / den**2
            P = a * ph + (1 - a) * s.p
            dPl, dPr = a * dph * d_dv_left, a * dph * d_dv_right
            ok = ok and bool(np.all(den > 0))
        ok = ok and bool(np.all(np.isfinite(ph)) and np.all(ph > 0))
        return _Layer(uh, rh, R, dR, flux, dflux, dv, P, dPl, dPr, ph, ok)

    def _modified_pressure(self, uh, rh, R, dR, dv, d_dv_left, d_dv_right):
        s, n, tau, h, g = self.s0, self.n, self.tau, self.h, self.g
        ut = (uh - s.u) / tau
        W = 0.5 * (s.r + rh) * R - 0.5 * (s.r ** (n + 1) + rh ** (n + 1))
        dW = (0.5 * R + 0.5 * (s.r + rh) * dR - 0.5 * (n + 1) * rh**n) * 0.5 * tau
        num = s.eps + tau**2 / 16.0 * (ut[:-1] ** 2 + ut[1:] ** 2)
        den = 0.5 * dv + (2.0 * self.v + dv) / (2.0 * (g - 1)) + (W[1:] - W[:-1]) / (2.0 * h)
        P = num / den
        c_dv = 0.5 + 0.5 / (g - 1)
        dnum_l, dnum_r = tau / 8.0 * ut[:-1], tau / 8.0 * ut[1:]
        dden_l = c_dv * d_dv_left - dW[:-1] / (2.0 * h)
        dden_r = c_dv * d_dv_right + dW[1:] / (2.0 * h)
        dPl = (dnum_l * den - num * dden_l) / den**2
        dPr = (dnum_r * den - num * dden_r) / den**2
        if np.any(den <= 0):
            P = np.full_like(P, np.nan)
        return P, dPl, dPr

    def residual(self, L: _Layer) -> np.ndarray:
        t = self.topo
        i = t.free
        return (L.uh[i] - self.s0.u[i]) / self.tau + L.R[i] * (L.P[t.right] - L.P[t.left]) / self.h

    def jacobian(self, L: _Layer):
        t, h, tau = self.topo, self.h, self.tau
        N = t.N
        i = t.free
        rows, cols, vals = [], [], []
        diag = 1.0 / tau + L.dR[i] * 0.5 * tau * (L.P[t.right] - L.P[t.left]) / h
        rows.append(np.arange(i.size))
        cols.append(t.col[i])
        vals.append(diag)
        for cell, sign in ((t.right, 1.0), (t.left, -1.0)):
            for node, dP in ((cell, L.dP_left[cell]), (cell + 1, L.dP_right[cell])):
                c = t.col[node % (N + 1)]
                keep = c >= 0
                rows.append(np.arange(i.size)[keep])
                cols.append(c[keep])
                vals.append((sign * L.R[i] / h * dP)[keep])
        J = sps.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                           shape=(i.size, i.size))
        return J.tocsc()

    def floor(self, L: _Layer) -> float:
        """Roundoff level of the residual."""
        t = self.topo
        i = t.free
        scale = np.abs(L.uh[i]) + np.abs(self.s0.u[i])
        scale = scale / self.tau + L.R[i] * (np.abs(L.P[t.right]) + np.abs(L.P[t.left])) / self.h
        return 16.0 * np.finfo(float).eps * float(np.max(scale, initial=0.0))

    def solve(self):
        cfg, topo = self.cfg, self.topo
        rep = StepReport(tau=self.tau)
        x = self.s0.u[topo.free].copy()
        L = self.layer(topo.full(x, self.u_fixed))
        if not L.ok:
            raise StepFailure("initial guess not admissible", rep)
        G = self.residual(L)
        gnorm = float(np.max(np.abs(G), initial=0.0))
        stall = 0
        for it in range(1, cfg.newton_max_iter + 1):
            if gnorm <= max(cfg.newton_tol, self.floor(L)):
                break
            rep.iterations = it
            try:
                dx = spla.spsolve(self.jacobian(L), -G)
            except Exception as exc:  # singular Jacobian
                raise StepFailure(f"linear solve failed: {exc}", rep) from exc
            lam, accepted = 1.0, False
            for _ in range(30):
                Lt = self.layer(topo.full(x + lam * dx, self.u_fixed))
                if Lt.ok:
                    Gt = self.residual(Lt)
                    gt = float(np.max(np.abs(Gt), initial=0.0))
                    if gt < gnorm or gt <= cfg.newton_tol:
                        accepted = True
                        break
                lam *= 0.5
            if accepted:
                x, L, G = x + lam * dx, Lt, Gt
                stall = stall + 1 if gt > 0.5 * gnorm else 0
                gnorm = gt
                if stall >= 3 and gnorm <= 1e3 * self.floor(L):
                    break  # stagnated at roundoff
                continue
            rep.line_search_failures += 1
            if rep.line_search_failures < 3:
                continue
            # fixed-point fallback on the momentum equations
            rep.fallback_used = True
            i = topo.free
            for _ in range(cfg.newton_max_iter):
                xn = self.s0.u[i] - self.tau * L.R[i] * (L.P[topo.right] - L.P[topo.left]) / self.h
                Ln = self.layer(topo.full(xn, self.u_fixed))
                if not Ln.ok:
                    break
                x, L = xn, Ln
                G = self.residual(L)
                gnorm = float(np.max(np.abs(G), initial=0.0))
                if gnorm <= cfg.newton_tol:
                    break
            break
        rep.residual = gnorm
        if gnorm > max(cfg.newton_tol, 1e3 * self.floor(L)) or not L.ok:
            rep.converged = False
            raise StepFailure(f"nonlinear solve did not converge (residual {gnorm:.3e})", rep)
        return L, rep

    def new_state(self, L: _Layer) -> FlowState:
        s = self.s0
        rh = L.rh.copy()
        if self.topo.bc == "periodic":
            rh[-1] = rh[0] + self.period
        vh = self.v + L.dv
        eps = s.eps - L.P * L.dv
        return FlowState(r=rh, u=L.uh, rho=1.0 / vh, p=L.ph, eps=eps)


def _step_tau(state, mesh, gas, cfg) -> float:
    if mesh.tau is not None:
        return mesh.tau
    if cfg.tau is not None:
        return cfg.tau
    return cfl_timestep(state, mesh, gas, cfg)


def sp_step(state: FlowState, mesh: MassMesh, gas: GasModel, cfg: SchemeConfig):
    """One step of the implicit conservative scheme; returns (new state, report)."""
    state.check(gas.n)
    tau = _step_tau(state, mesh, gas, cfg)
    eng = _Implicit(state, mesh, gas, cfg, tau, modified=False)
    L, rep = eng.solve()
    return eng.new_state(L), rep


def sp_step_modified(state: FlowState, mesh: MassMesh, gas: GasModel, cfg: SchemeConfig):
    """One step with the modified discrete equation of state (gamma* only, alpha = 0.5).

    The returned ``p`` is the new-layer value with (p + p_hat)/2 equal to the
    midpoint pressure of the step; ``eps`` is the scheme's internal energy.
    """
    if not gas.is_special:
        raise ApplicabilityError("the modified scheme needs gamma = (n+3)/(n+1)")
    state.check(gas.n)
    tau = _step_tau(state, mesh, gas, cfg)
    eng = _Implicit(state, mesh, gas, cfg, tau, modified=True)
    L, rep = eng.solve()
    return eng.new_state(L), rep


# ---------------------------------------------------------------- explicit scheme


def explicit_invariant_step(state: FlowState, mesh: MassMesh, gas: GasModel, cfg: SchemeConfig,
                            report: Optional[StepReport] = None) -> FlowState:
    """One step of the explicit invariant scheme for gamma*."""
    if not gas.is_special:
        raise ApplicabilityError("the explicit invariant scheme needs gamma = (n+3)/(n+1)")
    n, h = gas.n, mesh.hs
    gs = (n + 3) / (n + 1)
    tau = _step_tau(state, mesh, gas, cfg)
    topo = _topology(state.N, cfg.bc, n)
    u = _fixed_velocities(state, topo)
    r = state.r
    rh = r + tau * u
    if cfg.bc == "periodic":
        rh[-1] = rh[0] + (r[-1] - r[0])
    if np.any(np.diff(rh) <= 0) or (n >= 1 and rh[0] < 0):
        raise StepFailure("mesh tangling: new node positions not increasing", report)
    rhoh = state.rho * cell_volumes(r, n) / cell_volumes(rh, n)
    # p_hat / rho_hat^g* = p / rho^g*, solved for p_hat
    ph = (state.p / state.rho**gs) * rhoh**gs
    i = topo.free
    c, cl = topo.right, topo.left
    uh = u.copy()
    uh[i] = u[i] - tau * (rhoh[c] / state.rho[c]) ** (2.0 / (n + 1)) * r[i] ** n * (state.p[c] - state.p[cl]) / h
    if cfg.bc == "periodic":
        uh[-1] = uh[0]
    if report is not None:
        report.tau = tau
    return FlowState(r=rh, u=uh, rho=rhoh, p=ph, eps=specific_internal_energy(rhoh, ph, gas))


def step(scheme: str, state, mesh, gas, cfg):
    """Dispatch one step; returns (new state, report)."""
    if scheme == "sp":
        return sp_step(state, mesh, gas, cfg)
    if scheme == "sp-modified":
        return sp_step_modified(state, mesh, gas, cfg)
    if scheme == "explicit-invariant":
        rep = StepReport()
        new = explicit_invariant_step(state, mesh, gas, cfg, rep)
        return new, rep
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def check_scheme_applicable(scheme: str, gas: GasModel, bc: str) -> None:
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if scheme in ("sp-modified", "explicit-invariant") and not gas.is_special:
        raise ApplicabilityError(f"{scheme} needs gamma = (n+3)/(n+1) = {gas.gamma_star():.6g}")
    _topology(2, bc, gas.n)


# ---------------------------------------------------------------- driver


@dataclass
class RunResult:
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)  # states[k] lives at times[k]
    reports: list = field(default_factory=list)
    mesh: Optional[MassMesh] = None


def run_steps(scheme: str, state: FlowState, mesh: MassMesh, gas: GasModel, cfg: SchemeConfig,
              n_steps: Optional[int] = None, t_end: Optional[float] = None,
              callback: Optional[Callable] = None, keep_states: bool = True) -> RunResult:
    """Advance with accept/retry step control.

    A failed step is retried with tau halved (up to ``cfg.max_retries``).
    Steps never exceed 10 times the first step, nor land beyond ``t_end``.
    ``callback(k, t_old, old, t_new, new, report)`` is called after every
    accepted step.
    """
    if n_steps is None and t_end is None:
        raise ValueError("give n_steps or t_end")
    check_scheme_applicable(scheme, gas, cfg.bc)
    t = mesh.t
    tau0 = _step_tau(state, replace(mesh, tau=None), gas, cfg)
    tau_cap = 10.0 * tau0 if cfg.tau_max is None else min(cfg.tau_max, 10.0 * tau0)
    out = RunResult(times=[t], states=[state], mesh=mesh)
    k = 0
    while True:
        if n_steps is not None and k >= n_steps:
            break
        if t_end is not None and t >= t_end * (1 - 1e-14):
            break
        if cfg.tau is not None:
            tau = cfg.tau
        else:
            tau = min(cfl_timestep(state, mesh, gas, cfg), tau_cap)
        if t_end is not None:
            tau = min(tau, t_end - t)
        last_exc = None
        for attempt in range(cfg.max_retries + 1):
            try:
                new, rep = step(scheme, state, replace(mesh, t=t, tau=tau), gas, cfg)
                new.check(gas.n)
                rep.retries = attempt
                break
            except (StepFailure, DomainError) as exc:
                last_exc = exc
                tau *= 0.5
        else:
            raise StepFailure(f"step {k + 1} failed after {cfg.max_retries} retries: {last_exc}",
                              getattr(last_exc, "report", None))
        t_new = t + tau
        if callback is not None:
            callback(k, t, state, t_new, new, rep)
        state, t = new, t_new
        k += 1
        out.reports.append(rep)
        if keep_states:
            out.times.append(t)
            out.states.append(state)
        else:
            out.times[-1:] = [t]
            out.states[-1:] = [state]
    out.mesh = replace(mesh, t=t)
    return out
