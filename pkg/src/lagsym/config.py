"""Run configuration files (TOML).

Example::

    [gas]
    n = 0
    gamma = 3.0

    [scheme]
    id = "sp"            # sp | sp-modified | explicit-invariant
    alpha = 0.5
    bc = "rigid-walls"

    [mesh]
    N = 200
    s_min = 0.0
    s_max = 1.0

    [time]
    steps = 200          # or t_end
    cfl = 0.5            # or tau

    [preset]
    id = "isentropic-smooth"
    [preset.params]
    A = 0.2

    [output]
    dir = "out"
    snapshot_every = 50
    monitors = ["mass", "energy"]

Unknown keys are errors; messages carry the line of the offending key.
"""

from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass, field
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ApplicabilityError, ConfigError, DomainError
from .gas import GasModel
from .monitors import MONITOR_LAWS, applicable_monitor_laws
from .presets import DEFAULTS, PRESET_IDS
from .schemes import BCS, SCHEMES, SchemeConfig, check_scheme_applicable

ENTROPY_CASES = {
    "isentropic-smooth": "constant",
    "power-entropy-smooth": "power",
    "exponential-entropy-smooth": "exponential",
}

_SCHEMA = {
    "gas": {"n", "gamma"},
    "entropy": {"case", "A0", "q", "S0"},
    "scheme": {"id", "alpha", "bc", "newton_tol", "newton_max_iter", "max_retries"},
    "mesh": {"N", "s_min", "s_max", "r_origin"},
    "time": {"t_end", "steps", "tau", "cfl", "tau_max"},
    "preset": {"id", "params"},
    "output": {"dir", "snapshot_every", "monitors"},
}


@dataclass
class RunConfig:
    gas: GasModel
    scheme: str = "sp"
    alpha: float = 0.5
    bc: str = "rigid-walls"
    newton_tol: float = 1e-12
    newton_max_iter: int = 50
    max_retries: int = 8
    N: int = 100
    s_min: float = 0.0
    s_max: float = 1.0
    r_origin: float = 0.0
    t_end: Optional[float] = None
    steps: Optional[int] = None
    tau: Optional[float] = None
    cfl: float = 0.5
    tau_max: Optional[float] = None
    preset: str = "uniform-static"
    preset_params: dict = field(default_factory=dict)
    output_dir: str = "out"
    snapshot_every: int = 0  # 0: first and last layer only
    monitors: Optional[list] = None  # None: every law that applies

    def scheme_config(self) -> SchemeConfig:
        return SchemeConfig(alpha=self.alpha, newton_tol=self.newton_tol, newton_max_iter=self.newton_max_iter,
                            bc=self.bc, cfl_safety=self.cfl, tau=self.tau, tau_max=self.tau_max,
                            max_retries=self.max_retries)

    def monitor_laws(self) -> list:
        ok = applicable_monitor_laws(self.scheme, self.gas, self.bc)
        return list(ok) if self.monitors is None else list(self.monitors)


def _key_line(text: str, table: str, key: str) -> Optional[int]:
    """Line number (1-based) of ``key`` inside ``[table]``, or of the table header when key is None."""
    current = ""
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        m = re.match(r"^\[\s*([^\]]+?)\s*\]$", line)
        if m:
            current = m.group(1)
            if key is None and current == table:
                return no
            continue
        if key is not None and current == table and re.match(rf"^\"?{re.escape(key)}\"?\s*=", line):
            return no
    return None


def load_config(path) -> RunConfig:
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_config(data.decode("utf-8"))


def parse_config(text: str) -> RunConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"malformed config: {exc}", int(m.group(1)) if m else None) from None

    def err(msg, table, key=None):
        return ConfigError(msg, _key_line(text, table, key))

    for table, body in raw.items():
        if table not in _SCHEMA:
            raise err(f"unknown section [{table}]", table)
        if not isinstance(body, dict):
            raise err(f"[{table}] must be a table", "", table)
        for key in body:
            if key not in _SCHEMA[table]:
                raise err(f"unknown key '{key}' in [{table}]", table, key)

    def get(table, key, default=None, kind=None):
        val = raw.get(table, {}).get(key, default)
        if val is not None and kind is not None:
            ok = isinstance(val, kind) and not (kind is not bool and isinstance(val, bool))
            if not ok:
                raise err(f"[{table}] {key} has the wrong type ({type(val).__name__})", table, key)
        return val

    num = (int, float)
    if "gas" not in raw or "n" not in raw["gas"]:
        raise ConfigError("missing [gas] n", _key_line(text, "gas", None))
    n = get("gas", "n", kind=int)
    gamma = get("gas", "gamma", None, num)
    try:
        gas = GasModel.special(n) if gamma is None else GasModel(n, float(gamma))
    except (DomainError, ValueError) as exc:
        raise err(str(exc), "gas", "gamma" if gamma is not None else "n") from None

    cfg = RunConfig(gas=gas)
    cfg.scheme = get("scheme", "id", "sp", str)
    if cfg.scheme not in SCHEMES:
        raise err(f"unknown scheme '{cfg.scheme}'; expected one of {SCHEMES}", "scheme", "id")
    cfg.alpha = float(get("scheme", "alpha", 0.5, num))
    cfg.bc = get("scheme", "bc", "rigid-walls", str)
    if cfg.bc not in BCS:
        raise err(f"unknown bc '{cfg.bc}'; expected one of {BCS}", "scheme", "bc")
    cfg.newton_tol = float(get("scheme", "newton_tol", 1e-12, num))
    cfg.newton_max_iter = get("scheme", "newton_max_iter", 50, int)
    cfg.max_retries = get("scheme", "max_retries", 8, int)
    try:
        check_scheme_applicable(cfg.scheme, gas, cfg.bc)
    except ApplicabilityError as exc:
        where = ("scheme", "id") if cfg.scheme != "sp" else ("scheme", "bc")
        raise err(str(exc), *where) from None

    cfg.N = get("mesh", "N", 100, int)
    cfg.s_min = float(get("mesh", "s_min", 0.0, num))
    cfg.s_max = float(get("mesh", "s_max", 1.0, num))
    cfg.r_origin = float(get("mesh", "r_origin", 0.0, num))
    if cfg.N < 2:
        raise err("mesh N must be at least 2", "mesh", "N")
    if not cfg.s_max > cfg.s_min:
        raise err("mesh needs s_max > s_min", "mesh", "s_max")

    cfg.t_end = get("time", "t_end", None, num)
    cfg.steps = get("time", "steps", None, int)
    cfg.tau = get("time", "tau", None, num)
    cfg.cfl = float(get("time", "cfl", 0.5, num))
    cfg.tau_max = get("time", "tau_max", None, num)
    if cfg.t_end is None and cfg.steps is None:
        raise err("[time] needs t_end or steps", "time")
    if cfg.t_end is not None and not (cfg.t_end > 0 and math.isfinite(cfg.t_end)):
        raise err("t_end must be positive", "time", "t_end")
    if cfg.steps is not None and cfg.steps < 0:
        raise err("steps must be non-negative", "time", "steps")

    cfg.preset = get("preset", "id", "uniform-static", str)
    if cfg.preset not in PRESET_IDS:
        raise err(f"unknown preset '{cfg.preset}'; expected one of {PRESET_IDS}", "preset", "id")
    params = dict(get("preset", "params", {}, dict))
    for key in params:
        if key not in DEFAULTS[cfg.preset]:
            raise err(f"unknown parameter '{key}' for preset {cfg.preset}", "preset.params", key)
    ent = raw.get("entropy", {})
    if ent:
        case = ent.get("case")
        want = ENTROPY_CASES.get(cfg.preset)
        if case is not None and case != want:
            raise err(f"entropy case '{case}' does not match preset {cfg.preset} ({want})", "entropy", "case")
        for key in ("A0", "q", "S0"):
            if key in ent:
                if key not in DEFAULTS[cfg.preset]:
                    raise err(f"entropy key '{key}' is not used by preset {cfg.preset}", "entropy", key)
                params[key] = ent[key]
    cfg.preset_params = params

    cfg.output_dir = get("output", "dir", "out", str)
    cfg.snapshot_every = get("output", "snapshot_every", 0, int)
    mons = get("output", "monitors", None, list)
    if mons is not None:
        ok = applicable_monitor_laws(cfg.scheme, gas, cfg.bc)
        for m in mons:
            if m not in MONITOR_LAWS:
                raise err(f"unknown monitor law '{m}'", "output", "monitors")
            if m not in ok:
                raise err(f"monitor law '{m}' does not hold for {cfg.scheme} with n={n}", "output", "monitors")
    cfg.monitors = mons
    try:
        cfg.scheme_config()
    except (ValueError, DomainError) as exc:
        raise err(str(exc), "scheme") from None
    return cfg
