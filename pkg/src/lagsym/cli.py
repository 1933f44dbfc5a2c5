"""Command line: ``lagsym run|verify|convergence|invariance``.

Exit codes: 0 success, 1 invalid input, 2 numerical failure (a step that
could not be completed, or a verification check that failed).
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
import warnings

from .config import load_config
from .convergence import LadderSpec, run_ladder
from .errors import ApplicabilityError, ConfigError, DomainError, StepFailure
from .invariance import scheme_invariance_check, segment_stencils
from .io import dumps_json, fmt, output_dir, write_json
from .runner import build_initial, run_config
from .schemes import cfl_timestep, run_steps
from .symmetry import get_generator
from .verify import SUITES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2

log = logging.getLogger("lagsym")


def _cmd_run(args):
    cfg = load_config(args.config)
    out = output_dir(cfg.output_dir)
    summary = run_config(cfg, out)
    print(dumps_json({k: summary[k] for k in ("status", "steps", "final_t", "max_drift")}), end="")
    return EXIT_OK


def _cmd_verify(args):
    report = run_suite(args.suite)
    text = dumps_json(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    bad = [c["check"] for c in report["checks"] if not c["pass"]]
    for name in bad:
        log.error("failed: %s", name)
    return EXIT_OK if report["pass"] else EXIT_NUMERIC


def ladder_from_config(cfg, levels: int) -> LadderSpec:
    if cfg.t_end is None:
        raise ConfigError("convergence needs [time] t_end")
    mesh, state = build_initial(cfg)
    tau = cfg.tau if cfg.tau is not None else cfl_timestep(state, mesh, cfg.gas, cfg.scheme_config())
    steps = max(1, math.ceil(cfg.t_end / tau - 1e-9))
    # the explicit scheme is only stable on refinement with tau ~ h^2
    scaling = "parabolic" if cfg.scheme == "explicit-invariant" else "linear"
    return LadderSpec(cfg.scheme, cfg.gas, cfg.preset, dict(cfg.preset_params), N0=cfg.N,
                      s_range=(cfg.s_min, cfg.s_max), r_origin=cfg.r_origin, t_end=cfg.t_end,
                      tau0=cfg.t_end / steps, levels=levels, alpha=cfg.alpha, bc=cfg.bc, tau_scaling=scaling)


def _cmd_convergence(args):
    cfg = load_config(args.config)
    if args.levels < 3:
        raise ConfigError("--levels must be at least 3 to observe an order")
    spec = ladder_from_config(cfg, args.levels)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = run_ladder(spec)
    for w in caught:
        log.warning("%s", w.message)
    out = output_dir(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "convergence.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["level", "N", "h", "tau", "error", "order"])
        for r in res.rows:
            w.writerow([r["level"], r["N"], fmt(r["h"]), fmt(r["tau"]), fmt(r["error"]),
                        "" if r["order"] is None else fmt(r["order"])])
    write_json(out / "convergence.json", {"rows": res.rows, "orders": res.orders, "tau_scaling": spec.tau_scaling})
    sys.stdout.write(dumps_json({"orders": res.orders, "min_order": res.min_order}))
    return EXIT_OK


def _cmd_invariance(args):
    cfg = load_config(args.config)
    try:
        gen = get_generator(args.generator)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    if cfg.scheme not in ("sp", "explicit-invariant"):
        raise ConfigError("invariance checks cover the sp and explicit-invariant schemes")
    a_list = [float(x) for x in args.a.split(",") if x.strip()]
    mesh, state = build_initial(cfg)
    res = run_steps(cfg.scheme, state, mesh, cfg.gas, cfg.scheme_config(), n_steps=cfg.steps, t_end=cfg.t_end)
    stencils = segment_stencils(mesh, res.times, res.states)
    check = scheme_invariance_check(cfg.scheme, gen, stencils, cfg.gas, a_list, alpha=cfg.alpha)
    records = check.records()
    out = output_dir(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / f"invariance_{gen.id}.json", records)
    sys.stdout.write(dumps_json(records))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lagsym", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a configured simulation")
    r.add_argument("config")
    r.set_defaults(func=_cmd_run)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
    v.set_defaults(func=_cmd_verify)
    c = sub.add_parser("convergence", help="Richardson self-convergence ladder")
    c.add_argument("config")
    c.add_argument("--levels", type=int, default=4)
    c.set_defaults(func=_cmd_convergence)
    i = sub.add_parser("invariance", help="scheme invariance under one generator")
    i.add_argument("config")
    i.add_argument("--generator", required=True)
    i.add_argument("--a", required=True, help="comma separated group parameters")
    i.set_defaults(func=_cmd_invariance)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, ApplicabilityError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (StepFailure, DomainError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
