"""Closed-form initial data on the mass coordinate."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ApplicabilityError, ConfigError
from .gas import EntropyProfile, GasModel

PRESET_IDS = (
    "uniform-static",
    "galilean-slab",
    "isentropic-smooth",
    "power-entropy-smooth",
    "exponential-entropy-smooth",
    "sod-like-two-state",
)

# parameter defaults per preset; unknown parameters are rejected
DEFAULTS = {
    "uniform-static": dict(rho0=1.0, p0=1.0),
    "galilean-slab": dict(rho0=1.0, p0=1.0, U=1.0),
    "isentropic-smooth": dict(rho0=1.0, A=0.2, U=0.1, S0=1.0, shape="cosine", width=0.1),
    "power-entropy-smooth": dict(rho0=1.0, A=0.2, U=0.1, A0=1.0, q=0.5, shape="cosine", width=0.1),
    "exponential-entropy-smooth": dict(rho0=1.0, A=0.2, U=0.1, A0=1.0, q=0.5, shape="cosine", width=0.1),
    "sod-like-two-state": dict(rho_left=1.0, p_left=1.0, rho_right=0.125, p_right=0.1, s_split=0.5),
}

SMOOTH = {"uniform-static", "galilean-slab", "isentropic-smooth", "power-entropy-smooth", "exponential-entropy-smooth"}


@dataclass(frozen=True)
class Preset:
    id: str
    rho: Callable
    u: Callable
    p: Callable
    profile: EntropyProfile
    params: dict = field(default_factory=dict)

    @property
    def smooth(self) -> bool:
        return self.id in SMOOTH


def make_preset(preset_id: str, gas: GasModel, s_range=(0.0, 1.0), **params) -> Preset:
    if preset_id not in PRESET_IDS:
        raise ConfigError(f"unknown preset {preset_id!r}; expected one of {PRESET_IDS}")
    unknown = set(params) - set(DEFAULTS[preset_id])
    if unknown:
        raise ConfigError(f"unknown parameter(s) for preset {preset_id}: {sorted(unknown)}")
    P = {**DEFAULTS[preset_id], **params}
    g = gas.gamma
    s0, s1 = s_range
    L = s1 - s0

    def wave(s):
        return np.cos(np.pi * (np.asarray(s, dtype=float) - s0) / L)

    def sine(s):
        return np.sin(np.pi * (np.asarray(s, dtype=float) - s0) / L)

    if preset_id == "uniform-static":
        prof = EntropyProfile.constant(P["p0"] / P["rho0"] ** g)
        return Preset(preset_id, lambda s: P["rho0"] + 0 * np.asarray(s, float), lambda s: 0 * np.asarray(s, float),
                      lambda s: P["p0"] + 0 * np.asarray(s, float), prof, P)
    if preset_id == "galilean-slab":
        if gas.n != 0:
            raise ApplicabilityError("galilean-slab is a plane (n = 0) preset")
        prof = EntropyProfile.constant(P["p0"] / P["rho0"] ** g)
        return Preset(preset_id, lambda s: P["rho0"] + 0 * np.asarray(s, float),
                      lambda s: P["U"] + 0 * np.asarray(s, float),
                      lambda s: P["p0"] + 0 * np.asarray(s, float), prof, P)
    if preset_id == "sod-like-two-state":
        left = lambda s: np.asarray(s, float) < P["s_split"]  # noqa: E731
        prof = EntropyProfile.constant(1.0)  # entropy is piecewise; the profile is unused
        return Preset(preset_id, lambda s: np.where(left(s), P["rho_left"], P["rho_right"]),
                      lambda s: 0 * np.asarray(s, float),
                      lambda s: np.where(left(s), P["p_left"], P["p_right"]), prof, P)
    if abs(P["A"]) >= 1:
        raise ConfigError("density amplitude A must satisfy |A| < 1")
    if P["shape"] not in ("cosine", "bump"):
        raise ConfigError(f"shape must be 'cosine' or 'bump', got {P['shape']!r}")
    if P["shape"] == "bump":
        # Gaussian pulse in the middle of the slab; flat to roundoff at the walls,
        # so the data stay compatible with rigid walls to every order
        mid, w = s0 + 0.5 * L, P["width"] * L

        def wave(s):  # noqa: F811
            return np.exp(-(((np.asarray(s, dtype=float) - mid) / w) ** 2))

        sine = wave  # noqa: F811

    def rho(s):
        return P["rho0"] * (1 + P["A"] * wave(s))

    def u(s):
        return P["U"] * sine(s)

    if preset_id == "isentropic-smooth":
        prof = EntropyProfile.constant(P["S0"])
    elif preset_id == "power-entropy-smooth":
        if s0 <= 0:
            raise ConfigError("power-entropy-smooth needs s > 0 (set the mesh s_min > 0)")
        prof = EntropyProfile.power(P["A0"], P["q"])
    else:
        prof = EntropyProfile.exponential(P["A0"], P["q"])

    def p(s):
        return prof.evaluate(s)[0] * rho(s) ** g

    return Preset(preset_id, rho, u, p, prof, P)
