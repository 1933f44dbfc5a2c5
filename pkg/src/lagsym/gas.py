"""Gas model, entropy profiles, the staggered mass mesh and flow states.

Index convention used throughout the package: node arrays (``r``, ``u``)
have length N+1 and entry ``i`` is node i; cell arrays (``rho``, ``p``,
``eps``) have length N and entry ``i`` is the cell between nodes i and i+1,
i.e. the half-integer label i+1/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, RangeError

SPECIAL_GAMMA_TOL = 1e-12


@dataclass(frozen=True)
class GasModel:
    """Dimension index ``n`` (0 plane, 1 cylindrical, 2 spherical) and adiabatic exponent."""

    n: int
    gamma: float

    def __post_init__(self):
        if self.n not in (0, 1, 2):
            raise DomainError(f"n must be 0, 1 or 2, got {self.n!r}")
        if not self.gamma > 1.0:
            raise DomainError(f"gamma must exceed 1, got {self.gamma!r}")

    def gamma_star(self) -> float:
        return (self.n + 3) / (self.n + 1)

    @property
    def is_special(self) -> bool:
        """True when gamma equals (n+3)/(n+1)."""
        return abs(self.gamma - self.gamma_star()) <= SPECIAL_GAMMA_TOL

    @classmethod
    def special(cls, n: int) -> "GasModel":
        return cls(n, (n + 3) / (n + 1))


@dataclass(frozen=True)
class EntropyProfile:
    """The entropy function S(s) along the mass coordinate.

    Build with the classmethods. ``kind`` is one of ``constant``, ``power``,
    ``exponential`` (the three special cases of the group classification),
    ``tabulated`` (monotone cubic through samples) or ``analytic`` (user
    callables, treated as an arbitrary S).
    """

    kind: str
    A0: float = 1.0
    q: float = 0.0
    s_table: Optional[np.ndarray] = field(default=None, repr=False)
    S_table: Optional[np.ndarray] = field(default=None, repr=False)
    _func: Optional[Callable] = field(default=None, repr=False, compare=False)
    _dfunc: Optional[Callable] = field(default=None, repr=False, compare=False)
    _interp: Optional[PchipInterpolator] = field(default=None, repr=False, compare=False)

    @classmethod
    def constant(cls, A0: float = 1.0) -> "EntropyProfile":
        if A0 <= 0:
            raise DomainError("A0 must be positive")
        return cls("constant", A0=float(A0))

    @classmethod
    def power(cls, A0: float, q: float) -> "EntropyProfile":
        if A0 <= 0:
            raise DomainError("A0 must be positive")
        if q == 0:
            raise DomainError("power profile needs q != 0")
        return cls("power", A0=float(A0), q=float(q))

    @classmethod
    def exponential(cls, A0: float, q: float) -> "EntropyProfile":
        if A0 <= 0:
            raise DomainError("A0 must be positive")
        if q == 0:
            raise DomainError("exponential profile needs q != 0")
        return cls("exponential", A0=float(A0), q=float(q))

    @classmethod
    def tabulated(cls, s, S) -> "EntropyProfile":
        s = np.asarray(s, dtype=float)
        S = np.asarray(S, dtype=float)
        if s.ndim != 1 or s.shape != S.shape or s.size < 2:
            raise DomainError("tabulated profile needs matching 1-D arrays with >= 2 points")
        if np.any(np.diff(s) <= 0):
            raise DomainError("tabulated s must be strictly increasing")
        if np.any(S <= 0):
            raise DomainError("tabulated S must be strictly positive")
        return cls("tabulated", s_table=s, S_table=S, _interp=PchipInterpolator(s, S))

    @classmethod
    def analytic(cls, func: Callable, dfunc: Callable) -> "EntropyProfile":
        return cls("analytic", _func=func, _dfunc=dfunc)

    @property
    def is_arbitrary(self) -> bool:
        return self.kind in ("tabulated", "analytic")

    def evaluate(self, s):
        """Return ``(S(s), S'(s))``; arrays in, arrays out."""
        s = np.asarray(s, dtype=float)
        if self.kind == "constant":
            return np.full_like(s, self.A0), np.zeros_like(s)
        if self.kind == "power":
            if np.any(s <= 0):
                raise DomainError("power profile is defined for s > 0")
            S = self.A0 * s ** self.q
            return S, self.q * S / s
        if self.kind == "exponential":
            S = self.A0 * np.exp(self.q * s)
            return S, self.q * S
        if self.kind == "tabulated":
            lo, hi = self.s_table[0], self.s_table[-1]
            if np.any(s < lo) or np.any(s > hi):
                raise RangeError(f"s outside tabulated range [{lo}, {hi}]")
            return self._interp(s), self._interp(s, 1)
        S = np.asarray(self._func(s), dtype=float)
        dS = np.asarray(self._dfunc(s), dtype=float)
        if np.any(S <= 0):
            raise DomainError("entropy function must be positive")
        return S, dS


def eval_entropy(profile: EntropyProfile, s):
    return profile.evaluate(s)


def check_classifying_equation(profile, alpha, beta, q, samples) -> float:
    """Max over samples of |(alpha s + beta) S' - q S| / max(1, |S|)."""
    samples = np.atleast_1d(np.asarray(samples, dtype=float))
    if samples.size == 0:
        raise ValueError("need at least one sample point")
    S, dS = profile.evaluate(samples)
    res = np.abs((alpha * samples + beta) * dS - q * S) / np.maximum(1.0, np.abs(S))
    return float(np.max(res))


@dataclass(frozen=True)
class MassMesh:
    """Uniform mesh in the mass coordinate plus the current time and step."""

    s_nodes: np.ndarray
    t: float = 0.0
    tau: Optional[float] = None

    def __post_init__(self):
        s = np.asarray(self.s_nodes, dtype=float)
        object.__setattr__(self, "s_nodes", s)
        if s.ndim != 1 or s.size < 2:
            raise DomainError("mesh needs at least two nodes")
        d = np.diff(s)
        if np.any(d <= 0):
            raise DomainError("mass nodes must be strictly increasing")
        if np.max(np.abs(d - d.mean())) > 1e-12 * abs(d.mean()):
            raise DomainError("mass mesh must be uniform")
        if self.tau is not None and not self.tau > 0:
            raise DomainError("tau must be positive")

    @classmethod
    def uniform(cls, N: int, s_min: float = 0.0, s_max: float = 1.0, **kw) -> "MassMesh":
        return cls(np.linspace(s_min, s_max, N + 1), **kw)

    @property
    def N(self) -> int:
        return self.s_nodes.size - 1

    @property
    def hs(self) -> float:
        return float((self.s_nodes[-1] - self.s_nodes[0]) / self.N)

    @property
    def s_cells(self) -> np.ndarray:
        return 0.5 * (self.s_nodes[1:] + self.s_nodes[:-1])

    def with_tau(self, tau: float) -> "MassMesh":
        return replace(self, tau=float(tau))

    def advanced(self) -> "MassMesh":
        """Mesh at the next time level (t + tau)."""
        return replace(self, t=self.t + self.tau)


@dataclass(frozen=True)
class FlowState:
    """Node kinematics (r, u) and cell thermodynamics (rho, p, eps) at one time level."""

    r: np.ndarray
    u: np.ndarray
    rho: np.ndarray
    p: np.ndarray
    eps: np.ndarray

    def __post_init__(self):
        for name in ("r", "u", "rho", "p", "eps"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if self.u.shape != self.r.shape:
            raise DomainError("r and u must have the same length")
        for name in ("rho", "p", "eps"):
            if getattr(self, name).shape != (self.r.size - 1,):
                raise DomainError(f"{name} must have one entry per cell")

    @property
    def N(self) -> int:
        return self.rho.size

    def check(self, n: int) -> None:
        """Raise DomainError unless the positivity and ordering invariants hold."""
        if np.any(~np.isfinite(self.rho)) or np.any(self.rho <= 0):
            raise DomainError("density must be positive")
        if np.any(~np.isfinite(self.p)) or np.any(self.p <= 0):
            raise DomainError("pressure must be positive")
        if np.any(np.diff(self.r) <= 0):
            raise DomainError("node positions must be strictly increasing")
        if n >= 1 and np.any(self.r < 0):
            raise DomainError("radial positions must be non-negative")

    def entropy(self, gas: GasModel) -> np.ndarray:
        return entropy_variable(self.rho, self.p, gas)


def specific_internal_energy(rho, p, gas: GasModel):
    """Polytropic equation of state p / ((gamma - 1) rho)."""
    rho = np.asarray(rho, dtype=float)
    p = np.asarray(p, dtype=float)
    if np.any(rho <= 0):
        raise DomainError("density must be positive")
    if np.any(p < 0):
        raise DomainError("pressure must be non-negative")
    out = p / ((gas.gamma - 1.0) * rho)
    return out if out.ndim else float(out)


def entropy_variable(rho, p, gas: GasModel):
    """S = p / rho**gamma."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise DomainError("density must be positive")
    out = np.asarray(p, dtype=float) / rho ** gas.gamma
    return out if out.ndim else float(out)


def cell_volumes(r, n: int):
    """(r_{i+1}^{n+1} - r_i^{n+1}) / (n+1) for every cell.

    Evaluated as (r_{i+1} - r_i) times the mean-value polynomial, so no
    cancellation between the two powers occurs.
    """
    r = np.asarray(r, dtype=float)
    a, b = r[:-1], r[1:]
    if n == 0:
        return b - a
    if n == 1:
        return (b - a) * 0.5 * (a + b)
    return (b - a) * (a * a + a * b + b * b) / 3.0


def mass_consistency_error(state: FlowState, mesh: MassMesh, n: int) -> float:
    """max_i |rho_i * dV_i - h^s| / h^s."""
    return float(np.max(np.abs(state.rho * cell_volumes(state.r, n) - mesh.hs)) / mesh.hs)


def init_state(preset, mesh: MassMesh, gas: GasModel, r_origin: float = 0.0) -> FlowState:
    """Build node positions by exact cell-volume recursion from a preset's rho, u, p.

    ``preset`` is anything with vectorised ``rho(s)``, ``u(s)`` and ``p(s)``.
    After the recursion the cell densities are recomputed from the rounded
    node positions so that rho * dV equals h^s to the last bit.
    """
    n = gas.n
    if r_origin < 0:
        raise DomainError("r_origin must be non-negative")
    sc = mesh.s_cells
    rho = np.asarray(preset.rho(sc), dtype=float) * np.ones_like(sc)
    p = np.asarray(preset.p(sc), dtype=float) * np.ones_like(sc)
    u = np.asarray(preset.u(mesh.s_nodes), dtype=float) * np.ones_like(mesh.s_nodes)
    if np.any(rho <= 0) or np.any(p <= 0):
        raise DomainError("preset produced non-positive density or pressure")
    h = mesh.hs
    Vn = r_origin ** (n + 1) + (n + 1) * np.concatenate(([0.0], np.cumsum(h / rho)))
    r = Vn ** (1.0 / (n + 1))
    r[0] = r_origin
    if n == 0:
        r = r_origin + np.concatenate(([0.0], np.cumsum(h / rho)))
    rho = h / cell_volumes(r, n)
    eps = specific_internal_energy(rho, p, gas)
    state = FlowState(r=r, u=u, rho=rho, p=p, eps=eps)
    state.check(n)
    return state
