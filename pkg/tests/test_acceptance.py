"""Acceptance suite: one test per criterion, each printing a single pass/fail line.

Tolerances are pinned here and never loosened to make a run pass.
"""

import time

import numpy as np
import pytest

from lagsym.convergence import LadderSpec, run_ladder
from lagsym.gas import GasModel, MassMesh, init_state, mass_consistency_error
from lagsym.monitors import LawMonitor, applicable_monitor_laws, discrete_cl_residual
from lagsym.presets import make_preset
from lagsym.schemes import SchemeConfig, cfl_timestep, run_steps
from lagsym.symmetry import GENERATORS, mesh_orthogonality_criterion
from lagsym.verify import (conversion_suite, inhomogeneous_suite, invariants_suite, noether_suite,
                           scheme_invariance_suite)

CONSERVATION_TOL = 1e-11
CONSERVATION_SECONDS = 10.0
ADDITIONAL_DRIFT_TOL = 1e-10
ENTROPY_TOL = 1e-14
CELL_MASS_TOL = 1e-13
NOETHER_TOL = 1e-7
NOETHER_OFFSHELL_MIN = 1e-2
CONVERSION_TOL = 1e-11
INVARIANT_TOL = 1e-11
SP_ORDER_MIN = 1.8
EXPLICIT_ORDER_MIN = 0.9
LADDER_SECONDS = 120.0
INHOM_TOL = 1e-8
HOMOGENEOUS_TOL = 1e-10

S_RANGE = (0.1, 1.1)


def _smooth(gas, N, U=0.2):
    mesh = MassMesh.uniform(N, *S_RANGE)
    st = init_state(make_preset("isentropic-smooth", gas, S_RANGE, U=U), mesh, gas, r_origin=0.5 if gas.n else 0.0)
    return mesh, st


def _worst(recs):
    return max(recs, key=lambda r: r["value"] / r["tolerance"] if r["tolerance"] else 0.0)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_criterion_01_conservation(n, acceptance_line):
    gas = GasModel(n, 1.4)
    mesh, st = _smooth(gas, 200)
    cfg = SchemeConfig(alpha=0.5)
    t0 = time.perf_counter()
    res = run_steps("sp", st, mesh, gas, cfg, n_steps=200)
    laws = applicable_monitor_laws("sp", gas)
    worst = {law: 0.0 for law in laws}
    for k in range(200):
        old, new = res.states[k], res.states[k + 1]
        for law in laws:
            r = discrete_cl_residual(law, old, new, mesh, cfg, gas, "sp", t=res.times[k],
                                     tau=res.times[k + 1] - res.times[k])
            worst[law] = max(worst[law], float(np.max(np.abs(r))))
    dt = time.perf_counter() - t0
    ok = max(worst.values()) <= CONSERVATION_TOL and dt < CONSERVATION_SECONDS
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    acceptance_line(1, f"SP conservation n={n}",
                    ok, f"{detail} (tol {CONSERVATION_TOL:g}); {dt:.1f} s (limit {CONSERVATION_SECONDS:g} s)")
    assert ok


@pytest.mark.parametrize("n", [0, 1, 2])
def test_criterion_02_modified_scheme(n, acceptance_line):
    gas = GasModel.special(n)
    mesh, st = _smooth(gas, 100)
    cfg = SchemeConfig()
    mons = [LawMonitor(law, "sp-modified", gas, cfg) for law in ("additional-1", "additional-2")]

    def cb(k, t, old, tn, new, rep):
        for m in mons:
            m.update(mesh, t, old, tn, new)

    run_steps("sp-modified", st, mesh, gas, cfg, n_steps=100, callback=cb, keep_states=False)
    worst = max(m.max_drift for m in mons)
    ok = worst <= ADDITIONAL_DRIFT_TOL
    acceptance_line(2, f"modified scheme additional laws n={n}", ok,
                    f"max relative drift {worst:.2e} over 100 steps (tol {ADDITIONAL_DRIFT_TOL:g})")
    assert ok


@pytest.mark.parametrize("n", [0, 1, 2])
def test_criterion_03_explicit_entropy(n, acceptance_line):
    gas = GasModel.special(n)
    mesh, st = _smooth(gas, 100)
    cfg = SchemeConfig(cfl_safety=0.2)
    S0 = st.p / st.rho**gas.gamma
    worst = {"S": 0.0, "mass": mass_consistency_error(st, mesh, n)}

    def cb(k, t, old, tn, new, rep):
        worst["S"] = max(worst["S"], float(np.max(np.abs(new.p / new.rho**gas.gamma - S0) / S0)))
        worst["mass"] = max(worst["mass"], mass_consistency_error(new, mesh, n))

    run_steps("explicit-invariant", st, mesh, gas, cfg, n_steps=500, callback=cb, keep_states=False)
    ok = worst["S"] <= ENTROPY_TOL and worst["mass"] <= CELL_MASS_TOL
    acceptance_line(3, f"explicit scheme entropy n={n}", ok,
                    f"S drift {worst['S']:.2e} (tol {ENTROPY_TOL:g}), cell mass {worst['mass']:.2e} "
                    f"(tol {CELL_MASS_TOL:g}) over 500 steps")
    assert ok


def test_criterion_04_noether(acceptance_line):
    recs = noether_suite(fields_per_case=20)
    ident = [r for r in recs if r["check"].startswith("noether-identity")]
    off = [r for r in recs if r["check"].startswith("noether-offshell")]
    worst = max(r["value"] for r in ident)
    least = min(r["value"] for r in off)
    ok = worst <= NOETHER_TOL and least >= NOETHER_OFFSHELL_MIN and all(r["pass"] for r in recs)
    acceptance_line(4, "Noether identity off shell", ok,
                    f"{len(ident)} law/case pairs x 20 fields, max |A - sigma QE| {worst:.2e} (tol {NOETHER_TOL:g}), "
                    f"min max|A| {least:.2e} (>= {NOETHER_OFFSHELL_MIN:g})")
    assert ok


def test_criterion_05_eulerian_conversion(acceptance_line):
    recs = conversion_suite(samples=1000)
    w = _worst(recs)
    ok = all(r["pass"] for r in recs) and w["value"] <= CONVERSION_TOL
    acceptance_line(5, "Eulerian conversion", ok,
                    f"{len(recs)} law/case pairs x 1000 samples, max rel err {w['value']:.2e} (tol {CONVERSION_TOL:g})")
    assert ok


def test_criterion_06_invariant_sets(acceptance_line):
    recs = [r for r in invariants_suite(stencils=100) if not r["check"].startswith("orthogonality")]
    card = [r for r in recs if r["check"].startswith("cardinality")]
    inv = [r for r in recs if r["check"].startswith("invariance")]
    worst = max(r["value"] for r in inv)
    ok = all(r["pass"] for r in recs) and worst <= INVARIANT_TOL
    sizes = "/".join(str(r["size"]) for r in card)
    acceptance_line(6, "difference invariants", ok,
                    f"sizes {sizes} match; {len(inv)} set/gas/generator checks, max change {worst:.2e} "
                    f"(tol {INVARIANT_TOL:g})")
    assert ok


def test_criterion_07_invariance_verdicts(acceptance_line):
    recs = scheme_invariance_suite()
    bad = [r["check"] for r in recs if not r["pass"]]
    proj = [r for r in recs if "[sp]" in r["check"] and r["check"].endswith("[Xg*]")]
    growth = min(r["value"] / r["tolerance"] for r in proj)
    ok = not bad
    acceptance_line(7, "scheme invariance verdicts", ok,
                    f"{len(recs) - len(bad)}/{len(recs)} verdicts as expected; SP under projective grows "
                    f">= {growth:.1e} x tolerance")
    assert ok, bad


def test_criterion_08_orthogonality(acceptance_line):
    verdict = {g.id: mesh_orthogonality_criterion(g) for g in GENERATORS.values()}
    lag = [g.id for g in GENERATORS.values() if g.frame == "lagrangian"]
    ok = not verdict["E6"] and all(verdict[k] for k in lag)
    failing = sorted(k for k, v in verdict.items() if not v)
    acceptance_line(8, "mesh orthogonality", ok,
                    f"Eulerian Galilean fails: {not verdict['E6']}; Lagrangian pass: {all(verdict[k] for k in lag)}; "
                    f"failing generators {failing}")
    assert ok


def test_criterion_09_convergence(acceptance_line):
    bump = dict(U=0.1, shape="bump", width=0.15)
    specs = []
    for n in (0, 1, 2):
        specs.append(("sp", SP_ORDER_MIN, LadderSpec("sp", GasModel(n, 1.4), "isentropic-smooth", bump, N0=32,
                                                      r_origin=0.5 * n, t_end=0.1, tau0=0.005, levels=4)))
        specs.append(("explicit", EXPLICIT_ORDER_MIN,
                      LadderSpec("explicit-invariant", GasModel.special(n), "isentropic-smooth", bump, N0=32,
                                 r_origin=0.5 * n, t_end=0.1, tau0=0.005, levels=4, tau_scaling="parabolic")))
    t0 = time.perf_counter()
    parts, ok = [], True
    for label, lim, spec in specs:
        order = run_ladder(spec).min_order
        ok = ok and order >= lim
        parts.append(f"{label} n={spec.gas.n} {order:.2f}")
    dt = time.perf_counter() - t0
    ok = ok and dt < LADDER_SECONDS
    acceptance_line(9, "Richardson orders", ok,
                    f"{', '.join(parts)} (min SP {SP_ORDER_MIN}, explicit {EXPLICIT_ORDER_MIN}); "
                    f"{dt:.1f} s (limit {LADDER_SECONDS:g} s)")
    assert ok


def test_criterion_10_inhomogeneous(acceptance_line):
    recs = inhomogeneous_suite(choices=10)
    ident = [r for r in recs if r["check"].startswith("inhomogeneous-identity")]
    homog = [r for r in recs if r["check"].startswith("homogeneous")]
    ok = all(r["pass"] for r in recs)
    acceptance_line(10, "inhomogeneous laws", ok,
                    f"identity max {max(r['value'] for r in ident):.2e} (tol {INHOM_TOL:g}); homogeneous sources "
                    f"max {max(r['value'] for r in homog):.2e} (tol {HOMOGENEOUS_TOL:g}); "
                    f"n>=1 momentum sources nonzero: {all(r['pass'] for r in recs if r['check'].startswith('inhomogeneous[n='))}")
    assert ok
