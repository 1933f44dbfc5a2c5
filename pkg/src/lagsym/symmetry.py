"""Lie point symmetries of the gas dynamics equations and their difference invariants.

Generators act on (t, s, r, u, rho, p) in the Lagrangian frame and on
(t, r, u, rho, p) in the Eulerian frame. Each carries its infinitesimal
coefficients and the closed-form one-parameter flow obtained by integrating
them; the test suite checks every flow against numerical ODE integration.

The stencil is centred at node i of the staggered grid: nodes i and i+1
carry (r, u), the two cells next to node i carry (rho, p). The cell on the
right of node i is the unsubscripted one, the cell on its left has the
``m`` suffix. With index convention k -> cell k+1/2 this means
``rho = rho[i]`` and ``rhom = rho[i-1]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from typing import Callable

import numpy as np

from .errors import ApplicabilityError, DomainError
from .gas import FlowState, GasModel, MassMesh

# ---------------------------------------------------------------- generators


@dataclass(frozen=True)
class Generator:
    """A symmetry generator with its finite flow.

    ``coeffs(t, s, r, u, rho, p, n)`` returns the coefficient dict with keys
    t, s, r, u, rho, p (in the Eulerian frame ``s`` is zero and r is the
    space coordinate). ``flow(a, t, s, r, u, rho, p, n)`` returns the image.
    """

    id: str
    frame: str
    coeffs: Callable
    flow: Callable
    needs_n0: bool = False
    needs_gstar: bool = False
    description: str = ""

    @property
    def space_key(self) -> str:
        return "s" if self.frame == "lagrangian" else "r"

    def admitted(self, gas: GasModel) -> bool:
        if self.needs_n0 and gas.n != 0:
            return False
        if self.needs_gstar and not gas.is_special:
            return False
        return True


def _c(**kw):
    keys = ("t", "s", "r", "u", "rho", "p")

    def coeffs(t, s, r, u, rho, p, n):
        env = dict(t=t, s=s, r=r, u=u, rho=rho, p=p, n=n)
        shape = np.broadcast(t, s, r, u, rho, p).shape
        return {k: np.broadcast_to(kw[k](env), shape).astype(float) if k in kw else np.zeros(shape) for k in keys}

    return coeffs


def _proj_flow(a, t, s, r, u, rho, p, n):
    c = 1.0 - a * np.asarray(t, dtype=float)
    if np.any(c <= 0):
        raise DomainError("projective flow singular: 1 - a t must stay positive")
    return t / c, s, r / c, u * c + a * r, rho * c ** (n + 1), p * c ** (n + 3)


_proj_coeffs = _c(
    t=lambda e: e["t"] ** 2,
    r=lambda e: e["t"] * e["r"],
    u=lambda e: e["r"] - e["t"] * e["u"],
    rho=lambda e: -(e["n"] + 1) * e["t"] * e["rho"],
    p=lambda e: -(e["n"] + 3) * e["t"] * e["p"],
)


def _lagrangian_generators():
    E = np.exp
    return [
        Generator("X1", "lagrangian", _c(t=lambda e: 1.0),
                  lambda a, t, s, r, u, rho, p, n: (t + a, s, r, u, rho, p), description="time translation"),
        Generator(
            "X2", "lagrangian",
            _c(t=lambda e: e["t"], s=lambda e: (e["n"] + 1) * e["s"], r=lambda e: e["r"]),
            lambda a, t, s, r, u, rho, p, n: (t * E(a), s * E((n + 1) * a), r * E(a), u, rho, p),
            description="dilation",
        ),
        Generator(
            "X3", "lagrangian",
            _c(t=lambda e: 2 * e["t"], s=lambda e: (e["n"] + 3) * e["s"], r=lambda e: e["r"],
               u=lambda e: -e["u"], rho=lambda e: 2 * e["rho"]),
            lambda a, t, s, r, u, rho, p, n: (t * E(2 * a), s * E((n + 3) * a), r * E(a), u * E(-a),
                                              rho * E(2 * a), p),
            description="dilation",
        ),
        Generator(
            "X4", "lagrangian",
            _c(s=lambda e: e["s"], rho=lambda e: e["rho"], p=lambda e: e["p"]),
            lambda a, t, s, r, u, rho, p, n: (t, s * E(a), r, u, rho * E(a), p * E(a)),
            description="density-pressure dilation",
        ),
        Generator("X0", "lagrangian", _c(s=lambda e: 1.0),
                  lambda a, t, s, r, u, rho, p, n: (t, s + a, r, u, rho, p), description="mass translation"),
        Generator("Xn*", "lagrangian", _c(r=lambda e: 1.0),
                  lambda a, t, s, r, u, rho, p, n: (t, s, r + a, u, rho, p), needs_n0=True,
                  description="space translation"),
        Generator("Xn**", "lagrangian", _c(r=lambda e: e["t"], u=lambda e: 1.0),
                  lambda a, t, s, r, u, rho, p, n: (t, s, r + a * t, u + a, rho, p), needs_n0=True,
                  description="Galilean boost"),
        Generator("Xg*", "lagrangian", _proj_coeffs, _proj_flow, needs_gstar=True, description="projective"),
    ]


def _eulerian_generators():
    E = np.exp
    return [
        Generator("E1", "eulerian", _c(t=lambda e: 1.0),
                  lambda a, t, s, r, u, rho, p, n: (t + a, s, r, u, rho, p)),
        Generator("E2", "eulerian", _c(t=lambda e: e["t"], r=lambda e: e["r"]),
                  lambda a, t, s, r, u, rho, p, n: (t * E(a), s, r * E(a), u, rho, p)),
        Generator(
            "E3", "eulerian",
            _c(t=lambda e: 2 * e["t"], r=lambda e: e["r"], u=lambda e: -e["u"], rho=lambda e: 2 * e["rho"]),
            lambda a, t, s, r, u, rho, p, n: (t * E(2 * a), s, r * E(a), u * E(-a), rho * E(2 * a), p),
        ),
        Generator("E4", "eulerian", _c(rho=lambda e: e["rho"], p=lambda e: e["p"]),
                  lambda a, t, s, r, u, rho, p, n: (t, s, r, u, rho * E(a), p * E(a))),
        Generator("E5", "eulerian", _c(r=lambda e: 1.0),
                  lambda a, t, s, r, u, rho, p, n: (t, s, r + a, u, rho, p), needs_n0=True),
        Generator("E6", "eulerian", _c(r=lambda e: e["t"], u=lambda e: 1.0),
                  lambda a, t, s, r, u, rho, p, n: (t, s, r + a * t, u + a, rho, p), needs_n0=True),
        Generator("E7", "eulerian", _proj_coeffs, _proj_flow, needs_gstar=True),
    ]


GENERATORS = {g.id: g for g in _lagrangian_generators() + _eulerian_generators()}

_ALIASES = {
    "X*,n": "Xn*", "X**,n": "Xn**", "X*,γ": "Xg*", "X*,gamma": "Xg*",
    "galilean": "Xn**", "projective": "Xg*", "time": "X1",
}


def get_generator(gen_id: str) -> Generator:
    key = _ALIASES.get(gen_id, gen_id)
    if key not in GENERATORS:
        raise KeyError(f"unknown generator {gen_id!r}")
    return GENERATORS[key]


def admitted_generators(gas: GasModel, frame: str = "lagrangian") -> list[Generator]:
    return [g for g in GENERATORS.values() if g.frame == frame and g.admitted(gas)]


# ---------------------------------------------------------------- stencil


@dataclass(frozen=True)
class Stencil:
    """The 21 stencil values around a node; fields may be arrays (one entry per node)."""

    t: object
    th: object
    s: object
    sp: object
    sm: object
    u: object
    up: object
    uh: object
    uhp: object
    r: object
    rp: object
    rh: object
    rhp: object
    rho: object
    rhom: object
    rhoh: object
    rhohm: object
    p: object
    pm: object
    ph: object
    phm: object

    @property
    def tau(self):
        return self.th - self.t

    @property
    def hs(self):
        return self.sp - self.s

    @property
    def hsm(self):
        return self.s - self.sm

    def validate(self) -> None:
        if np.any(np.asarray(self.tau) <= 0) or np.any(np.asarray(self.hs) <= 0) or np.any(np.asarray(self.hsm) <= 0):
            raise DomainError("stencil needs tau > 0 and positive mass steps")
        for name in ("rho", "rhom", "rhoh", "rhohm", "p", "pm", "ph", "phm"):
            if np.any(np.asarray(getattr(self, name)) <= 0):
                raise DomainError(f"stencil {name} must be positive")

    def as_array(self) -> np.ndarray:
        return np.array([np.asarray(getattr(self, f.name), dtype=float) for f in fields(self)])

    @classmethod
    def from_array(cls, a) -> "Stencil":
        return cls(*list(a))


STENCIL_SIZE = 21


def stencils_from_layers(mesh: MassMesh, t: float, old: FlowState, th: float, new: FlowState) -> Stencil:
    """Stencils centred at every interior node i = 1..N-1."""
    s = mesh.s_nodes
    i = np.arange(1, old.N)
    return Stencil(
        t=np.full(i.shape, float(t)), th=np.full(i.shape, float(th)),
        s=s[i], sp=s[i + 1], sm=s[i - 1],
        u=old.u[i], up=old.u[i + 1], uh=new.u[i], uhp=new.u[i + 1],
        r=old.r[i], rp=old.r[i + 1], rh=new.r[i], rhp=new.r[i + 1],
        rho=old.rho[i], rhom=old.rho[i - 1], rhoh=new.rho[i], rhohm=new.rho[i - 1],
        p=old.p[i], pm=old.p[i - 1], ph=new.p[i], phm=new.p[i - 1],
    )


def random_stencil(rng: np.random.Generator, size: int = 1, n: int = 0) -> Stencil:
    """Generic positive stencils with nonzero velocities and increasing radii."""
    U = lambda lo, hi: rng.uniform(lo, hi, size)  # noqa: E731
    t = U(0.1, 0.5)
    s = U(0.5, 1.0)
    r = U(0.5, 1.0)
    sign = rng.choice([-1.0, 1.0], size)
    return Stencil(
        t=t, th=t + U(0.01, 0.1), s=s, sp=s + U(0.05, 0.2), sm=s - U(0.05, 0.2),
        u=sign * U(0.2, 1.0), up=sign * U(0.2, 1.0), uh=sign * U(0.2, 1.0), uhp=sign * U(0.2, 1.0),
        r=r, rp=r + U(0.05, 0.2), rh=r + U(0.01, 0.05), rhp=r + U(0.1, 0.3),
        rho=U(0.5, 2.0), rhom=U(0.5, 2.0), rhoh=U(0.5, 2.0), rhohm=U(0.5, 2.0),
        p=U(0.5, 2.0), pm=U(0.5, 2.0), ph=U(0.5, 2.0), phm=U(0.5, 2.0),
    )


# ---------------------------------------------------------------- finite transforms


def transform_stencil(gen: Generator, a: float, st: Stencil, n: int) -> Stencil:
    """Apply the flow to every point of the stencil (nodes carry r, u; cells carry rho, p)."""
    z = 0.0 * np.asarray(st.t, dtype=float)
    f = gen.flow
    # nodes: (time, s, r, u)
    t0, s0, r0, u0, _, _ = f(a, st.t, st.s, st.r, st.u, 1.0 + z, 1.0 + z, n)
    _, sp_, rp, up, _, _ = f(a, st.t, st.sp, st.rp, st.up, 1.0 + z, 1.0 + z, n)
    th, _, rh, uh, _, _ = f(a, st.th, st.s, st.rh, st.uh, 1.0 + z, 1.0 + z, n)
    _, _, rhp, uhp, _, _ = f(a, st.th, st.sp, st.rhp, st.uhp, 1.0 + z, 1.0 + z, n)
    _, sm_, _, _, _, _ = f(a, st.t, st.sm, z, z, 1.0 + z, 1.0 + z, n)
    # cells: only t matters for the density and pressure images
    _, _, _, _, rho, p = f(a, st.t, st.s, z, z, st.rho, st.p, n)
    _, _, _, _, rhom, pm = f(a, st.t, st.s, z, z, st.rhom, st.pm, n)
    _, _, _, _, rhoh, ph = f(a, st.th, st.s, z, z, st.rhoh, st.ph, n)
    _, _, _, _, rhohm, phm = f(a, st.th, st.s, z, z, st.rhohm, st.phm, n)
    return Stencil(t0, th, s0, sp_, sm_, u0, up, uh, uhp, r0, rp, rh, rhp,
                   rho, rhom, rhoh, rhohm, p, pm, ph, phm)


def transform_layer(gen: Generator, a: float, t: float, mesh: MassMesh, state: FlowState, n: int):
    """Image of one Lagrangian time layer: returns (t', mesh', state')."""
    if gen.frame != "lagrangian":
        raise ValueError("flow states live in the Lagrangian frame")
    tn, sn, rn, un, _, _ = gen.flow(a, np.full_like(state.r, t), mesh.s_nodes, state.r, state.u,
                                    np.ones_like(state.r), np.ones_like(state.r), n)
    tc = np.full_like(state.rho, t)
    _, _, _, _, rho, p = gen.flow(a, tc, mesh.s_cells, np.zeros_like(tc), np.zeros_like(tc), state.rho, state.p, n)
    # the flows never mix time with the mass coordinate, so one layer stays one layer
    t_new = float(np.asarray(tn)[0])
    new_mesh = MassMesh(np.asarray(sn, dtype=float) * np.ones_like(mesh.s_nodes), t=t_new, tau=mesh.tau)
    eps = state.eps * (p / state.p) * (state.rho / rho)
    return t_new, new_mesh, FlowState(r=rn, u=un, rho=rho, p=p, eps=eps)


def finite_transform(gen: Generator, a: float, obj, n: int = 0, t: float | None = None, mesh: MassMesh | None = None):
    """Apply the one-parameter flow to a Stencil, or to a FlowState with its mesh.

    For a FlowState pass ``mesh`` (its ``t`` is used unless ``t`` is given);
    the result is then ``(t', mesh', state')``.
    """
    if isinstance(obj, Stencil):
        return transform_stencil(gen, a, obj, n)
    if isinstance(obj, FlowState):
        if mesh is None:
            raise ValueError("transforming a FlowState needs its mesh")
        return transform_layer(gen, a, mesh.t if t is None else t, mesh, obj, n)
    raise TypeError(f"cannot transform {type(obj).__name__}")


# ---------------------------------------------------------------- invariants

SET_SIZES = {
    "Euler-12": 12,
    "Lagr-general-16": 16,
    "Lagr-n0-14": 14,
    "Lagr-gstar-15": 15,
    "Lagr-n0-g3-13": 13,
}

# generators each set is built to be invariant under
SET_GENERATORS = {
    "Euler-12": ("E1", "E2", "E3", "E4", "E5", "E6"),
    "Lagr-general-16": ("X1", "X2", "X3", "X4", "X0"),
    "Lagr-n0-14": ("X1", "X2", "X3", "X4", "X0", "Xn*", "Xn**"),
    "Lagr-gstar-15": ("X1", "X2", "X3", "X4", "X0", "Xg*"),
    "Lagr-n0-g3-13": ("X1", "X2", "X3", "X4", "X0", "Xn*", "Xn**", "Xg*"),
}

EULER_STENCIL_SIZE = 18  # no mass coordinate


def normalize_set_id(set_id: str) -> str:
    return set_id.replace("γ*", "gstar").replace("γ3", "g3")


def set_applicable(set_id: str, gas: GasModel) -> bool:
    set_id = normalize_set_id(set_id)
    if set_id in ("Euler-12", "Lagr-n0-14"):
        return gas.n == 0
    if set_id == "Lagr-general-16":
        return True
    if set_id == "Lagr-gstar-15":
        return gas.is_special
    if set_id == "Lagr-n0-g3-13":
        return gas.n == 0 and gas.is_special
    raise KeyError(f"unknown invariant set {set_id!r}")


@dataclass(frozen=True)
class InvariantVector:
    set_id: str
    values: np.ndarray

    def __len__(self):
        return len(self.values)


RATIO_ZERO = 1e-300


def guarded_ratio(num, den):
    """num/den, with the limit 1 when both vanish (see the u -> 0 convention)."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    both = (np.abs(num) < RATIO_ZERO) & (np.abs(den) < RATIO_ZERO)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / np.where(both, 1.0, den)
    return np.where(both, 1.0, out)


def compute_invariants(st: Stencil, gas: GasModel, set_id: str) -> InvariantVector:
    set_id = normalize_set_id(set_id)
    if not set_applicable(set_id, gas):
        raise ApplicabilityError(f"invariant set {set_id} does not apply to n={gas.n}, gamma={gas.gamma}")
    n = gas.n
    tau, h, hm = st.tau, st.hs, st.hsm
    R = guarded_ratio
    if set_id == "Euler-12":
        # the second cell of the stencil plays the role of rho_+, p_+
        hp, hhp = st.rp - st.r, st.rhp - st.rh
        k = np.sqrt(st.rho / st.p)
        vals = [
            hhp / hp, tau / hp * np.sqrt(st.p / st.rho), k * ((st.rh - st.r) / tau - st.u),
            k * (st.up - st.u), k * (st.uh - st.u), k * (st.uhp - st.uh),
            st.pm / st.p, st.ph / st.p, st.phm / st.ph,
            st.rhoh / st.rho, st.rhohm / st.rhoh, st.rhom / st.rhoh,
        ]
    elif set_id == "Lagr-general-16":
        vals = [
            hm / h, st.rho * st.r ** (n + 1) / h, tau / h * st.r**n * np.sqrt(st.rho * st.p), tau * st.u / st.r,
            R(st.up, st.u), R(st.uh, st.u), R(st.uhp, st.uh),
            st.rp / st.r, st.rh / st.r, st.rhp / st.rh,
            st.rhom / st.rho, st.rhoh / st.rho, st.rhohm / st.rhoh,
            st.pm / st.p, st.ph / st.p, st.phm / st.ph,
        ]
    elif set_id == "Lagr-n0-14":
        k = np.sqrt(st.rho / st.p)
        vals = [
            hm / h, tau / h * np.sqrt(st.rho * st.p),
            k * ((st.rh - st.r) / tau - st.u), k * ((st.rh - st.r) / tau - st.uh),
            k * (st.up - st.u), k * (st.uhp - st.uh),
            st.rho * (st.rp - st.r) / h, st.rhoh * (st.rhp - st.rh) / h,
            st.rhom / st.rho, st.rhoh / st.rho, st.rhohm / st.rhoh,
            st.pm / st.p, st.ph / st.p, st.phm / st.ph,
        ]
    elif set_id == "Lagr-gstar-15":
        gs = (n + 3) / (n + 1)
        vals = [
            hm / h, st.rho * st.r ** (n + 1) / h, st.rhoh * st.rh ** (n + 1) / h,
            tau * st.r**n / h * st.rho ** (0.5 - 1.0 / (n + 1)) * st.rhoh ** (1.0 / (n + 1)) * np.sqrt(st.p),
            st.ph / st.p * (st.rho / st.rhoh) ** gs,
            (st.r + tau * st.u) / st.rh, (st.rp + tau * st.up) / st.rhp,
            (st.rh - tau * st.uh) / st.r, (st.rhp - tau * st.uhp) / st.rp,
            st.rp / st.r, st.rhp / st.rh,
            st.rhom / st.rho, st.rhohm / st.rhoh, st.pm / st.p, st.phm / st.ph,
        ]
    else:  # Lagr-n0-g3-13
        k, kh = np.sqrt(st.rho / st.p), np.sqrt(st.rhoh / st.ph)
        hp, hhp = st.rp - st.r, st.rhp - st.rh
        vals = [
            hm / h, tau / h * (st.rho * st.p * st.rhoh * st.ph) ** 0.25,
            k * ((st.rh - st.r) / tau - st.u), kh * ((st.rh - st.r) / tau - st.uh),
            k * (hp / tau + st.up - st.u), kh * (-hhp / tau + st.uhp - st.uh),
            st.rho * hp / h, st.rhoh * hhp / h,
            st.ph / st.p * (st.rho / st.rhoh) ** 3,
            st.rhom / st.rho, st.rhohm / st.rhoh, st.pm / st.p, st.phm / st.ph,
        ]
    out = np.array([np.asarray(v, dtype=float) for v in vals])
    assert len(out) == SET_SIZES[set_id]
    return InvariantVector(set_id, out)


def _rr(a, b, n):
    """(b^{n+1} - a^{n+1}) / ((n+1)(b - a)) with the limit a^n at b = a."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if n == 0:
        return np.ones(np.broadcast(a, b).shape)
    if n == 1:
        return 0.5 * (a + b)
    return (a * a + a * b + b * b) / 3.0


def _one_based(vals):
    """Prepend a NaN row so that I[k] is the k-th invariant."""
    return np.concatenate([np.full((1,) + vals.shape[1:], np.nan), vals])


def invariant_form_residuals(scheme: str, st: Stencil, gas: GasModel, alpha: float = 0.5) -> np.ndarray:
    """The scheme equations written through the invariants; rows are
    (mass, momentum, energy or entropy, coordinate).

    ``sp`` uses the general 16-set (or the 14-set for n = 0), ``explicit``
    the gamma* 15-set (or the 13-set for n = 0, gamma = 3).
    """
    n, g = gas.n, gas.gamma
    if scheme == "sp" and n == 0:
        I = _one_based(compute_invariants(st, gas, "Lagr-n0-14").values)  # noqa: E741
        a = alpha
        return np.array([
            1 / I[10] - 1 - I[2] * (I[5] + I[6]) / 2,
            I[3] - I[4] + I[2] * (a * (I[13] - I[13] * I[14]) + (1 - a) * (1 - I[12])),
            (I[13] / I[10] - 1) / (g - 1) + I[2] * (a * I[13] + 1 - a) * (I[5] + I[6]) / 2,
            I[3] + I[4],
        ])
    if scheme == "sp":
        I = _one_based(compute_invariants(st, gas, "Lagr-general-16").values)  # noqa: E741
        a = alpha
        Rr = _rr(1.0, I[9], n)
        Rp = _rr(I[8], I[9] * I[10], n)
        D = Rp * (I[6] * I[7] + I[5]) / 2 - Rr * (I[6] + 1) / 2
        return np.array([
            1 / I[12] - 1 - I[2] * I[4] * D,
            I[6] - 1 + I[3] ** 2 / (I[2] * I[4]) * Rr * (a * I[15] * (1 - I[16]) + (1 - a) * (1 - I[14])),
            (I[15] / I[12] - 1) / (g - 1) + I[2] * I[4] * (a * I[15] + 1 - a) * D,
            I[9] - 1 - 0.5 * I[4] * (1 + I[6]),
        ])
    if scheme == "explicit" and n == 0 and gas.is_special:
        J = _one_based(compute_invariants(st, gas, "Lagr-n0-g3-13").values)
        return np.array([J[7] - J[8], J[4] - J[2] * J[9] ** -0.75 * (1 - J[12]), J[9] - 1, J[3]])
    if scheme == "explicit":
        J = _one_based(compute_invariants(st, gas, "Lagr-gstar-15").values)
        return np.array([
            J[3] * (J[11] ** (n + 1) - 1) - J[2] * (J[10] ** (n + 1) - 1),
            J[8] - 1 - J[4] ** 2 / J[2] * (1 - J[14]),
            J[5] - 1,
            J[6] - 1,
        ])
    raise ValueError(f"unknown scheme {scheme!r}")


# ---------------------------------------------------------------- orthogonality


def mesh_orthogonality_criterion(gen: Generator, samples: int = 200, seed: int = 0, tol: float = 1e-12) -> bool:
    """True iff D_{+h}(xi^t) + D_{+tau}(xi^x) vanishes on random lattice samples.

    x is s for Lagrangian generators and r for Eulerian ones.
    """
    rng = np.random.default_rng(seed)
    t, x = rng.uniform(0.1, 2.0, samples), rng.uniform(0.1, 2.0, samples)
    h, tau = rng.uniform(0.01, 0.5, samples), rng.uniform(0.01, 0.5, samples)
    u, rho, p = rng.uniform(-1, 1, samples), rng.uniform(0.5, 2, samples), rng.uniform(0.5, 2, samples)
    key = gen.space_key

    def coeff(tt, xx, which):
        if key == "s":
            c = gen.coeffs(tt, xx, 1.0, u, rho, p, 0)
        else:
            c = gen.coeffs(tt, 0.0, xx, u, rho, p, 0)
        return c[which]

    lhs = (coeff(t, x + h, "t") - coeff(t, x, "t")) / h + (coeff(t + tau, x, key) - coeff(t, x, key)) / tau
    return bool(np.max(np.abs(lhs)) <= tol)


# ---------------------------------------------------------------- reports


def invariance_report(set_id, generator, a, max_residual, tolerance):
    return {
        "set": set_id, "generator": generator, "a": float(a),
        "max_residual": float(max_residual), "tolerance": float(tolerance),
        "pass": bool(max_residual <= tolerance),
    }


def to_json(records) -> str:
    return json.dumps(records, sort_keys=True, indent=2)


def invariant_max_change(gen: Generator, a: float, st: Stencil, gas: GasModel, set_id: str) -> float:
    """max_k |I_k(g_a st) - I_k(st)| / (1 + |I_k(st)|)."""
    I0 = compute_invariants(st, gas, set_id).values
    I1 = compute_invariants(transform_stencil(gen, a, st, gas.n), gas, set_id).values
    return float(np.max(np.abs(I1 - I0) / (1 + np.abs(I0))))


__all__ = [
    "Generator", "GENERATORS", "get_generator", "admitted_generators", "Stencil", "stencils_from_layers",
    "random_stencil", "finite_transform", "transform_stencil", "transform_layer", "compute_invariants",
    "InvariantVector", "SET_SIZES", "SET_GENERATORS", "invariant_form_residuals",
    "mesh_orthogonality_criterion", "invariant_max_change",
]
