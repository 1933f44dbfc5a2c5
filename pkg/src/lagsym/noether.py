"""Numerical checks of the Noether identity, the Eulerian conversion and the
inhomogeneous conservation laws.

All total derivatives are taken with the 6th-order central stencil of
:mod:`lagsym.fd` applied to the composite functions t -> T(t, s, phi(t, s), ...)
and s -> T(...). The potential phi itself is differentiated analytically
(sympy), so the gas dynamics operator E(phi) is evaluated exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import sympy as sp

from . import fd
from .catalog import (  # noqa: F401  re-exported for convenience
    ConservationLaw,
    EulerSample,
    eulerian_closed_form,
    eulerian_density_convert,
)
from .errors import DomainError
from .gas import EntropyProfile, GasModel

_t, _s = sp.symbols("t s", real=True)

# relative FD step; 1e-2 leaves ~1e-6 truncation on the steep s^-4 entropy case
FD_STEP_FACTOR = 2.5e-3


@dataclass(frozen=True)
class SmoothField:
    """A test potential phi(t, s) with exact derivatives up to second order.

    Build with :meth:`from_sympy`; the expression must use the symbols
    ``t`` and ``s`` (``lagsym.noether.T`` / ``lagsym.noether.S_SYM``).
    """

    expr: object
    domain: tuple  # ((t0, t1), (s0, s1))
    _fns: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_sympy(cls, expr, domain=((0.0, 1.0), (0.5, 1.5))) -> "SmoothField":
        expr = sp.sympify(expr)
        derivs = {
            "phi": expr,
            "phi_t": sp.diff(expr, _t),
            "phi_s": sp.diff(expr, _s),
            "phi_tt": sp.diff(expr, _t, 2),
            "phi_ts": sp.diff(expr, _t, _s),
            "phi_ss": sp.diff(expr, _s, 2),
        }
        fns = {k: sp.lambdify((_t, _s), v, "numpy") for k, v in derivs.items()}
        return cls(expr, (tuple(domain[0]), tuple(domain[1])), fns)

    def __call__(self, name, t, s):
        out = self._fns[name](t, s)
        return np.asarray(out, dtype=float) * np.ones(np.broadcast(t, s).shape)

    @property
    def scale(self) -> float:
        (t0, t1), (s0, s1) = self.domain
        return min(t1 - t0, s1 - s0)

    def grid(self, m: int = 5, margin: Optional[float] = None):
        """m x m interior grid, kept clear of the boundary by ``margin``."""
        (t0, t1), (s0, s1) = self.domain
        if margin is None:
            margin = 0.1 * self.scale
        tt = np.linspace(t0 + margin, t1 - margin, m)
        ss = np.linspace(s0 + margin, s1 - margin, m)
        T, S = np.meshgrid(tt, ss, indexing="ij")
        return T.ravel(), S.ravel()


T = _t
S_SYM = _s


def random_field(rng: np.random.Generator, n: int, domain=((0.0, 1.0), (0.5, 1.5))) -> SmoothField:
    """A random smooth potential with phi > 0 and phi_s > 0 on the domain.

    The base is a static state of density rho0; a few trigonometric modes
    of small amplitude are added, so the field is generically not a solution.
    """
    for _ in range(100):
        rho0 = rng.uniform(0.7, 1.5)
        c0 = rng.uniform(0.2, 1.0)
        base = (c0 + (n + 1) * _s / rho0) ** sp.Rational(1, n + 1)
        e1, e2, e3 = rng.uniform(-0.08, 0.08, 3)
        w1, w2, k1, k2 = rng.uniform(0.5, 2.0, 4)
        th1, th2 = rng.uniform(0, 2 * np.pi, 2)
        expr = base * (1 + e1 * sp.sin(w1 * _t + k1 * _s + th1)) + e2 * _t**2 * sp.cos(k2 * _s + th2) + e3 * _t
        f = SmoothField.from_sympy(expr, domain)
        T, Sg = f.grid(9, margin=0.0)
        if np.all(f("phi_s", T, Sg) > 0.05) and (n == 0 or np.all(f("phi", T, Sg) > 0.05)):
            return f
    raise RuntimeError("could not draw an admissible random field")  # pragma: no cover


def euler_lagrange_residual(field: SmoothField, gas: GasModel, profile: EntropyProfile, t, s):
    """E(phi) = phi_tt + phi^{n(1-g)} phi_s^{-g} (S' - n g S phi_s/phi - g S phi_ss/phi_s)."""
    n, g = gas.n, gas.gamma
    phi = field("phi", t, s)
    phi_s = field("phi_s", t, s)
    if np.any(phi_s <= 0):
        raise DomainError("phi_s must be positive (density would be non-positive)")
    if n >= 1 and np.any(phi <= 0):
        raise DomainError("phi must be positive for n >= 1")
    S, dS = profile.evaluate(s)
    geo = n * g * S * phi_s / phi if n else 0.0
    out = field("phi_tt", t, s) + phi ** (n * (1 - g)) * phi_s ** (-g) * (
        dS - geo - g * S * field("phi_ss", t, s) / phi_s
    )
    return out if np.ndim(out) else float(out)


def _density_fn(law: ConservationLaw, which: str, field: SmoothField, profile: EntropyProfile):
    f = law.Tt_phi if which == "t" else law.Ts_phi

    def T(t, s):
        S, dS = profile.evaluate(s)
        return f(t, s, field("phi", t, s), field("phi_t", t, s), field("phi_s", t, s), S, dS)

    return T


def _check_grid(field: SmoothField, t, s, h):
    (t0, t1), (s0, s1) = field.domain
    w = fd.STENCIL_HALF_WIDTH * h
    if np.any(t - w < t0) or np.any(t + w > t1) or np.any(s - w < s0) or np.any(s + w > s1):
        raise ValueError("grid point too close to the domain boundary for the FD stencil")


def noether_sides(law: ConservationLaw, field: SmoothField, gas: GasModel, profile: EntropyProfile, t, s,
                  h: Optional[float] = None):
    """Return (A, QE): the divergence of the densities and Q * E(phi) at each point."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if h is None:
        h = FD_STEP_FACTOR * field.scale
    _check_grid(field, t, s, h)
    A = fd.partial_t(_density_fn(law, "t", field, profile), t, s, h) + fd.partial_s(
        _density_fn(law, "s", field, profile), t, s, h
    )
    if law.symmetry is None:
        return A, np.zeros_like(A)
    Q = law.symmetry.characteristic(t, s, field("phi", t, s), field("phi_t", t, s), field("phi_s", t, s))
    return A, Q * euler_lagrange_residual(field, gas, profile, t, s)


def noether_identity_residual(law, field, gas, profile, t, s, h=None) -> float:
    """max |D_t T^t + D_s T^s - sigma Q E| over the points."""
    A, QE = noether_sides(law, field, gas, profile, t, s, h)
    return float(np.max(np.abs(A - law.sigma * QE)))


def calibrate_sigma(law, field, gas, profile, t, s) -> int:
    """The orientation sign that makes the identity hold on a given field."""
    A, QE = noether_sides(law, field, gas, profile, t, s)
    return 1 if np.max(np.abs(A - QE)) <= np.max(np.abs(A + QE)) else -1


# ---------------------------------------------------------------- inhomogeneous laws

INHOMOGENEOUS_KINDS = ("mass-F", "momentum-h", "energy-h")


@dataclass(frozen=True)
class EulerFields:
    """Smooth Eulerian profiles rho(r), u(r), p(r) at one instant t."""

    rho: Callable
    u: Callable
    p: Callable
    t: float = 0.0


def _eulerian_rates(fields: EulerFields, r, n, g, h):
    """rho_t, u_t, p_t from the Eulerian equations of motion."""
    rho, u, p = fields.rho(r), fields.u(r), fields.p(r)
    rho_r = fd.derivative(fields.rho, r, h)
    u_r = fd.derivative(fields.u, r, h)
    p_r = fd.derivative(fields.p, r, h)
    div = u_r + (n * u / r if n else 0.0)  # (r^n u)_r / r^n
    rho_t = -u * rho_r - rho * div
    u_t = -u * u_r - p_r / rho
    p_t = -u * p_r - g * p * div
    return rho_t, u_t, p_t


def _parts(kind, func, n, g):
    """(density, flux, source) as functions of (t, r, rho, u, p) and of partials of func."""

    def z(rho, p):
        return p / rho**g

    if kind == "mass-F":
        dens = lambda t, r, rho, u, p: rho * func(t, r, z(rho, p))  # noqa: E731
        flux = lambda t, r, rho, u, p: rho * u * func(t, r, z(rho, p))  # noqa: E731

        def source(t, r, rho, u, p, h):
            zz = z(rho, p)
            Ft = fd.derivative(lambda tt: func(tt, r, zz), t, h)
            Fr = fd.derivative(lambda rr: func(t, rr, zz), r, h)
            geo = n * func(t, r, zz) / r if n else 0.0
            return rho * (Ft + u * (Fr - geo))

    elif kind == "momentum-h":
        dens = lambda t, r, rho, u, p: func(t, r) * rho * u  # noqa: E731
        flux = lambda t, r, rho, u, p: func(t, r) * (rho * u**2 + p)  # noqa: E731

        def source(t, r, rho, u, p, h):
            ht = fd.derivative(lambda tt: func(tt, r), t, h)
            hr = fd.derivative(lambda rr: func(t, rr), r, h)
            geo = n / r * func(t, r) * rho * u**2 if n else 0.0
            return ht * rho * u + hr * (rho * u**2 + p) - geo

    elif kind == "energy-h":
        def E(rho, u, p):
            return 0.5 * rho * u**2 + p / (g - 1)

        def H(rho, u, p):
            return 0.5 * rho * u**2 + g * p / (g - 1)

        dens = lambda t, r, rho, u, p: func(t, r) * E(rho, u, p)  # noqa: E731
        flux = lambda t, r, rho, u, p: func(t, r) * H(rho, u, p) * u  # noqa: E731

        def source(t, r, rho, u, p, h):
            ht = fd.derivative(lambda tt: func(tt, r), t, h)
            hr = fd.derivative(lambda rr: func(t, rr), r, h)
            geo = n * func(t, r) / r if n else 0.0
            return ht * E(rho, u, p) + (hr - geo) * H(rho, u, p) * u

    else:
        raise ValueError(f"unknown inhomogeneous law {kind!r}; expected one of {INHOMOGENEOUS_KINDS}")
    return dens, flux, source


def inhomogeneous_terms(kind: str, func: Callable, fields: EulerFields, r, gas: GasModel,
                        h: Optional[float] = None):
    """Return (lhs, source) arrays on the grid ``r``.

    ``func`` is F(t, r, z) for ``mass-F`` (z = p / rho^gamma) and h(t, r)
    otherwise. lhs is the divergence with the time derivatives replaced from
    the equations of motion.
    """
    n, g = gas.n, gas.gamma
    r = np.asarray(r, dtype=float)
    if h is None:
        h = 1e-2 * max(1.0, float(np.ptp(r))) * 0.1
    if n >= 1 and np.any(r - fd.STENCIL_HALF_WIDTH * h <= 0):
        raise DomainError("r must be bounded away from 0 for n >= 1")
    rho = fields.rho(r) * np.ones_like(r)
    if np.any(rho <= 0):
        raise DomainError("density must be positive")
    u = fields.u(r) * np.ones_like(r)
    p = fields.p(r) * np.ones_like(r)
    t = fields.t
    dens, flux, source = _parts(kind, func, n, g)
    rho_t, u_t, p_t = _eulerian_rates(fields, r, n, g, h)
    # total time derivative as a directional derivative along (1, rho_t, u_t, p_t)
    Dt = fd.derivative(lambda e: dens(t + e, r, rho + e * rho_t, u + e * u_t, p + e * p_t), 0.0 * r, h)
    Dr = fd.derivative(lambda rr: flux(t, rr, fields.rho(rr), fields.u(rr), fields.p(rr)), r, h)
    return Dt + Dr, source(t, r, rho, u, p, h)


def inhomogeneous_cl_residual(kind, func, fields, r, gas, h=None) -> float:
    lhs, src = inhomogeneous_terms(kind, func, fields, r, gas, h)
    return float(np.max(np.abs(lhs - src)))


def inhomogeneous_source_max(kind, func, fields, r, gas, h=None) -> float:
    """max |source|; vanishes for the homogeneous choices of F or h."""
    _, src = inhomogeneous_terms(kind, func, fields, r, gas, h)
    return float(np.max(np.abs(src)))
