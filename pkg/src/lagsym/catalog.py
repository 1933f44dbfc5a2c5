"""Catalog of the local conservation laws of the Lagrangian gas dynamics equation.

Every law is stored three ways: as densities of the potential phi(t, s)
(with u = phi_t, rho = 1/(phi^n phi_s), r = phi), in gas variables on the
Lagrangian side, and in Eulerian variables. The Noether generator that
produces each law is stored alongside, together with the orientation sign
``sigma`` such that D_t T^t + D_s T^s = sigma * Q * E(phi) identically,
where E is the gas dynamics equation and Q the characteristic.

Most laws share one shape, generated by Z = a t d/dt + B d/ds + c phi d/dphi
with B = b s + b0:

    T^t = -a t En - B M + c phi phi_t,     T^s = -a t F + B K + c W,

with En the energy density, F the energy flux, M = phi_s phi_t,
K = phi_t^2/2 - gamma S P/(gamma-1) and W = S phi^(n+1-n gamma) phi_s^-gamma.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import ApplicabilityError, SingularConstraintError
from .gas import EntropyProfile, GasModel

LAW_IDS = (
    "mass",
    "entropy-pathline",
    "energy-general",
    "momentum-n0",
    "center-of-mass-n0",
    "projective-1-gstar",
    "projective-2-gstar",
    "isentropic-Z2",
    "isentropic-Z3",
    "power-Z2",
    "power-Zq",
    "exponential-Z2",
)

# Orientation of the stored densities relative to the Noether formula.
# Fixed by noether.calibrate_sigma and asserted in the test suite.
SIGMA = {
    "mass": 1,
    "entropy-pathline": 1,
    "energy-general": -1,
    "momentum-n0": 1,
    "center-of-mass-n0": -1,
    "projective-1-gstar": 1,
    "projective-2-gstar": 1,
    "isentropic-Z2": 1,
    "isentropic-Z3": 1,
    "power-Z2": 1,
    "power-Zq": 1,
    "exponential-Z2": 1,
}


def _zero(t, s, phi):
    return np.zeros(np.broadcast(t, s, phi).shape)


@dataclass(frozen=True)
class SymmetryData:
    """Generator xi_t d/dt + xi_s d/ds + eta d/dphi and divergence terms (B1, B2)."""

    xi_t: Callable = _zero
    xi_s: Callable = _zero
    eta: Callable = _zero
    B1: Callable = _zero
    B2: Callable = _zero
    variational: bool = True

    def characteristic(self, t, s, phi, phi_t, phi_s):
        return self.eta(t, s, phi) - self.xi_t(t, s, phi) * phi_t - self.xi_s(t, s, phi) * phi_s


@dataclass(frozen=True)
class ConservationLaw:
    case_id: str
    description: str
    Tt_phi: Callable  # (t, s, phi, phi_t, phi_s, S, dS)
    Ts_phi: Callable
    Tt_gas: Callable  # (t, s, r, u, rho, p, S)
    Ts_gas: Callable
    eTt: Callable  # (t, r, u, rho, p, S, S_r, s)
    eTr: Callable
    symmetry: Optional[SymmetryData]
    sigma: int
    # how the Eulerian form obtains the Lagrangian coordinate: none / sample / power
    s_source: str = "none"
    q: float = 0.0

    def lagrangian_s(self, sample) -> Optional[np.ndarray]:
        """Mass coordinate needed by the Eulerian form, or None if unused."""
        if self.s_source == "none":
            return None
        if self.s_source == "power":
            return power_case_s(self.q, sample.r, sample.rho, sample.S, sample.S_r, self._n)
        if sample.s is None:
            raise ValueError(f"{self.case_id}: Eulerian form needs the mass coordinate s")
        return np.asarray(sample.s, dtype=float)

    _n: int = 0


def power_case_s(q, r, rho, S, S_r, n):
    """Recover s = q r^n rho S / S_r in the power entropy case."""
    S_r = np.asarray(S_r, dtype=float)
    if np.any(S_r == 0):
        raise SingularConstraintError("S_r = 0: s cannot be recovered in the power case")
    return q * np.asarray(r, dtype=float) ** n * rho * S / S_r


def applicable_ids(gas: GasModel, profile: EntropyProfile) -> list[str]:
    """Law ids that hold for this (n, gamma, S) case."""
    n, special = gas.n, gas.is_special
    ids = ["mass", "entropy-pathline", "energy-general"]
    if n == 0:
        ids += ["momentum-n0", "center-of-mass-n0"]
    if special:
        ids += ["projective-1-gstar", "projective-2-gstar"]
    kind = profile.kind
    if kind == "constant":
        ids.append("isentropic-Z2")
        if not special:
            # at gamma* Z3 is a multiple of the projective dilation
            ids.append("isentropic-Z3")
    elif kind == "power":
        if not special:
            ids.append("power-Z2")
        elif abs(profile.q - q_star(n)) <= 1e-12:
            ids.append("power-Zq")
    elif kind == "exponential":
        if not special:
            ids.append("exponential-Z2")
    return ids


def q_star(n: int) -> float:
    return -2.0 * (n + 2) / (n + 1)


def normalize_id(case_id: str) -> str:
    """Accept the gamma* glyph spelling, e.g. ``projective-1-γ*``."""
    return case_id.replace("γ*", "gstar").replace("gamma*", "gstar")


def get_law(case_id: str, gas: GasModel, profile: EntropyProfile) -> ConservationLaw:
    case_id = normalize_id(case_id)
    if case_id not in LAW_IDS:
        raise KeyError(f"unknown conservation law {case_id!r}")
    if case_id not in applicable_ids(gas, profile):
        raise ApplicabilityError(
            f"{case_id} does not hold for n={gas.n}, gamma={gas.gamma}, S kind={profile.kind}"
        )
    return _build(case_id, gas, profile)


def catalog(gas: GasModel, profile: EntropyProfile) -> list[ConservationLaw]:
    return [_build(cid, gas, profile) for cid in applicable_ids(gas, profile)]


def _build(case_id: str, gas: GasModel, profile: EntropyProfile) -> ConservationLaw:
    return replace(_build_raw(case_id, gas, profile), _n=gas.n)


def _build_raw(case_id: str, gas: GasModel, profile: EntropyProfile) -> ConservationLaw:
    n, g = gas.n, gas.gamma
    q = profile.q

    # potential-form building blocks
    def P(phi, phi_s):
        return phi ** (n * (1 - g)) * phi_s ** (1 - g)

    def En(phi, phi_t, phi_s, S):
        return 0.5 * phi_t**2 + S / (g - 1) * P(phi, phi_s)

    def F(phi, phi_t, phi_s, S):
        return S * phi ** (n * (1 - g)) * phi_t * phi_s ** (-g)

    def W(phi, phi_s, S):
        return S * phi ** (n + 1 - n * g) * phi_s ** (-g)

    def K(phi, phi_t, phi_s, S):
        return 0.5 * phi_t**2 - g * S / (g - 1) * P(phi, phi_s)

    # gas-variable building blocks
    def En_g(u, rho, S):
        return 0.5 * u**2 + S / (g - 1) * rho ** (g - 1)

    def F_g(r, u, rho, S):
        return S * r**n * rho**g * u

    def W_g(r, rho, S):
        return S * r ** (n + 1) * rho**g

    def M_g(r, u, rho):
        return u / (r**n * rho)

    def K_g(u, rho, S):
        return 0.5 * u**2 - g * S / (g - 1) * rho ** (g - 1)

    # Eulerian building blocks
    def eE(r, u, rho, S):
        return r**n * (0.5 * rho * u**2 + S / (g - 1) * rho**g)

    def eEr(r, u, rho, S):
        return r**n * (0.5 * rho * u**2 + g * S / (g - 1) * rho**g) * u

    def eKp(u, rho, S):
        return 0.5 * u**2 + g * S / (g - 1) * rho ** (g - 1)

    def shaped(cid, desc, a, b, b0, c, sym_extra=None, s_source="none"):
        """Law generated by a t d/dt + (b s + b0) d/ds + c phi d/dphi."""

        def B(s):
            return b * s + b0

        def Tt_phi(t, s, phi, phi_t, phi_s, S, dS):
            return -a * t * En(phi, phi_t, phi_s, S) - B(s) * phi_s * phi_t + c * phi * phi_t

        def Ts_phi(t, s, phi, phi_t, phi_s, S, dS):
            return -a * t * F(phi, phi_t, phi_s, S) + B(s) * K(phi, phi_t, phi_s, S) + c * W(phi, phi_s, S)

        def Tt_gas(t, s, r, u, rho, p, S):
            return -a * t * En_g(u, rho, S) - B(s) * M_g(r, u, rho) + c * r * u

        def Ts_gas(t, s, r, u, rho, p, S):
            return -a * t * F_g(r, u, rho, S) + B(s) * K_g(u, rho, S) + c * W_g(r, rho, S)

        def eTt(t, r, u, rho, p, S, S_r, s):
            Bs = B(s) if b != 0 else b0
            return -a * t * eE(r, u, rho, S) - Bs * u + c * r ** (n + 1) * rho * u

        def eTr(t, r, u, rho, p, S, S_r, s):
            Bs = B(s) if b != 0 else b0
            return (
                -a * t * eEr(r, u, rho, S)
                - Bs * eKp(u, rho, S)
                + c * r ** (n + 1) * (rho * u**2 + S * rho**g)
            )

        sym = SymmetryData(
            xi_t=lambda t, s, phi: a * t + 0 * phi,
            xi_s=lambda t, s, phi: b * s + b0 + 0 * phi,
            eta=lambda t, s, phi: c * phi,
        )
        return ConservationLaw(
            cid, desc, Tt_phi, Ts_phi, Tt_gas, Ts_gas, eTt, eTr, sym, SIGMA[cid],
            s_source=s_source, q=q,
        )

    if case_id == "mass":
        one = lambda *args: np.ones(np.broadcast(*args).shape)  # noqa: E731
        zero = lambda *args: np.zeros(np.broadcast(*args).shape)  # noqa: E731
        return ConservationLaw(
            "mass", "conservation of mass",
            Tt_phi=one, Ts_phi=zero, Tt_gas=one, Ts_gas=zero,
            eTt=lambda t, r, u, rho, p, S, S_r, s: r**n * rho,
            eTr=lambda t, r, u, rho, p, S, S_r, s: r**n * rho * u,
            symmetry=None, sigma=SIGMA["mass"],
        )
    if case_id == "entropy-pathline":
        return ConservationLaw(
            "entropy-pathline", "entropy is constant along pathlines",
            Tt_phi=lambda t, s, phi, phi_t, phi_s, S, dS: S * np.ones(np.shape(phi)),
            Ts_phi=lambda t, s, phi, phi_t, phi_s, S, dS: np.zeros(np.shape(phi)),
            Tt_gas=lambda t, s, r, u, rho, p, S: S * np.ones(np.shape(r)),
            Ts_gas=lambda t, s, r, u, rho, p, S: np.zeros(np.shape(r)),
            eTt=lambda t, r, u, rho, p, S, S_r, s: r**n * rho * S,
            eTr=lambda t, r, u, rho, p, S, S_r, s: r**n * rho * u * S,
            symmetry=None, sigma=SIGMA["entropy-pathline"],
        )
    if case_id == "energy-general":
        return ConservationLaw(
            "energy-general", "conservation of energy (time translation)",
            Tt_phi=lambda t, s, phi, phi_t, phi_s, S, dS: En(phi, phi_t, phi_s, S),
            Ts_phi=lambda t, s, phi, phi_t, phi_s, S, dS: F(phi, phi_t, phi_s, S),
            Tt_gas=lambda t, s, r, u, rho, p, S: En_g(u, rho, S),
            Ts_gas=lambda t, s, r, u, rho, p, S: F_g(r, u, rho, S),
            eTt=lambda t, r, u, rho, p, S, S_r, s: eE(r, u, rho, S),
            eTr=lambda t, r, u, rho, p, S, S_r, s: eEr(r, u, rho, S),
            symmetry=SymmetryData(xi_t=lambda t, s, phi: np.ones(np.broadcast(t, s, phi).shape)),
            sigma=SIGMA["energy-general"],
        )
    if case_id == "momentum-n0":
        return ConservationLaw(
            "momentum-n0", "conservation of momentum (plane flows)",
            Tt_phi=lambda t, s, phi, phi_t, phi_s, S, dS: phi_t + 0 * phi,
            Ts_phi=lambda t, s, phi, phi_t, phi_s, S, dS: S * phi_s ** (-g),
            Tt_gas=lambda t, s, r, u, rho, p, S: u + 0 * r,
            Ts_gas=lambda t, s, r, u, rho, p, S: S * rho**g,
            eTt=lambda t, r, u, rho, p, S, S_r, s: rho * u,
            eTr=lambda t, r, u, rho, p, S, S_r, s: rho * u**2 + S * rho**g,
            symmetry=SymmetryData(eta=lambda t, s, phi: np.ones(np.broadcast(t, s, phi).shape)),
            sigma=SIGMA["momentum-n0"],
        )
    if case_id == "center-of-mass-n0":
        return ConservationLaw(
            "center-of-mass-n0", "motion of the center of mass (plane flows)",
            Tt_phi=lambda t, s, phi, phi_t, phi_s, S, dS: phi - t * phi_t,
            Ts_phi=lambda t, s, phi, phi_t, phi_s, S, dS: -t * S * phi_s ** (-g),
            Tt_gas=lambda t, s, r, u, rho, p, S: r - t * u,
            Ts_gas=lambda t, s, r, u, rho, p, S: -t * S * rho**g,
            eTt=lambda t, r, u, rho, p, S, S_r, s: rho * (r - t * u),
            eTr=lambda t, r, u, rho, p, S, S_r, s: rho * u * (r - t * u) - t * S * rho**g,
            symmetry=SymmetryData(
                eta=lambda t, s, phi: t + 0 * phi, B1=lambda t, s, phi: phi + 0 * t, variational=False
            ),
            sigma=SIGMA["center-of-mass-n0"],
        )
    if case_id == "projective-1-gstar":
        return shaped(case_id, "dilation 2t d/dt + phi d/dphi at gamma*", a=2.0, b=0.0, b0=0.0, c=1.0)
    if case_id == "projective-2-gstar":
        return ConservationLaw(
            "projective-2-gstar", "projective symmetry t^2 d/dt + t phi d/dphi at gamma*",
            Tt_phi=lambda t, s, phi, phi_t, phi_s, S, dS: (
                -(t**2) * En(phi, phi_t, phi_s, S) + t * phi * phi_t - 0.5 * phi**2
            ),
            Ts_phi=lambda t, s, phi, phi_t, phi_s, S, dS: (
                -(t**2) * F(phi, phi_t, phi_s, S) + t * W(phi, phi_s, S)
            ),
            Tt_gas=lambda t, s, r, u, rho, p, S: -(t**2) * En_g(u, rho, S) + t * r * u - 0.5 * r**2,
            Ts_gas=lambda t, s, r, u, rho, p, S: -(t**2) * F_g(r, u, rho, S) + t * W_g(r, rho, S),
            eTt=lambda t, r, u, rho, p, S, S_r, s: (
                -(t**2) * eE(r, u, rho, S) + t * r ** (n + 1) * rho * u - 0.5 * r ** (n + 2) * rho
            ),
            eTr=lambda t, r, u, rho, p, S, S_r, s: (
                -(t**2) * eEr(r, u, rho, S)
                + t * r ** (n + 1) * (rho * u**2 + S * rho**g)
                - 0.5 * r ** (n + 2) * rho * u
            ),
            symmetry=SymmetryData(
                xi_t=lambda t, s, phi: t**2 + 0 * phi,
                eta=lambda t, s, phi: t * phi,
                B1=lambda t, s, phi: 0.5 * phi**2 + 0 * t,
                variational=False,
            ),
            sigma=SIGMA["projective-2-gstar"],
        )
    if case_id == "isentropic-Z2":
        return ConservationLaw(
            "isentropic-Z2", "mass translation d/ds, constant entropy",
            Tt_phi=lambda t, s, phi, phi_t, phi_s, S, dS: -phi_s * phi_t,
            Ts_phi=lambda t, s, phi, phi_t, phi_s, S, dS: K(phi, phi_t, phi_s, S),
            Tt_gas=lambda t, s, r, u, rho, p, S: -M_g(r, u, rho),
            Ts_gas=lambda t, s, r, u, rho, p, S: K_g(u, rho, S),
            eTt=lambda t, r, u, rho, p, S, S_r, s: -u + 0 * r,
            eTr=lambda t, r, u, rho, p, S, S_r, s: -eKp(u, rho, S),
            symmetry=SymmetryData(xi_s=lambda t, s, phi: np.ones(np.broadcast(t, s, phi).shape)),
            sigma=SIGMA["isentropic-Z2"],
        )
    if case_id == "isentropic-Z3":
        return shaped(
            case_id, "isentropic dilation",
            a=(n + 3) * g - n - 1, b=(n + 1) * g - n - 3, b0=0.0, c=g + 1, s_source="sample",
        )
    if case_id == "power-Z2":
        return shaped(
            case_id, "power entropy dilation",
            a=(n + 3) * g + 2 * q - n - 1, b=(n + 1) * g - n - 3, b0=0.0, c=g + q + 1, s_source="power",
        )
    if case_id == "power-Zq":
        return shaped(case_id, "power entropy with q*, t d/dt + s d/ds", a=1.0, b=1.0, b0=0.0, c=0.0,
                      s_source="power")
    if case_id == "exponential-Z2":
        return shaped(case_id, "exponential entropy", a=2 * q, b=0.0, b0=(n + 1) * g - n - 3, c=q)
    raise KeyError(case_id)  # pragma: no cover


@dataclass(frozen=True)
class EulerSample:
    """Eulerian state sample; ``s`` is only read by laws whose Eulerian form contains s."""

    t: np.ndarray
    r: np.ndarray
    u: np.ndarray
    rho: np.ndarray
    p: np.ndarray
    S: np.ndarray
    S_r: np.ndarray
    s: Optional[np.ndarray] = None


def eulerian_density_convert(law: ConservationLaw, sample: EulerSample):
    """(r^n rho T^t, r^n rho u T^t + T^s) from the Lagrangian gas-variable densities."""
    n = law._n
    s = law.lagrangian_s(sample)
    s_arg = s if s is not None else np.zeros(np.shape(sample.r))
    Tt = law.Tt_gas(sample.t, s_arg, sample.r, sample.u, sample.rho, sample.p, sample.S)
    Ts = law.Ts_gas(sample.t, s_arg, sample.r, sample.u, sample.rho, sample.p, sample.S)
    w = sample.r**n * sample.rho
    return w * Tt, w * sample.u * Tt + Ts


def eulerian_closed_form(law: ConservationLaw, sample: EulerSample):
    """The catalog's stored Eulerian densities evaluated at a sample."""
    s = law.lagrangian_s(sample)
    args = (sample.t, sample.r, sample.u, sample.rho, sample.p, sample.S, sample.S_r, s)
    return law.eTt(*args), law.eTr(*args)
