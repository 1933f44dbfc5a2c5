import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from lagsym.errors import ApplicabilityError, DomainError
from lagsym.gas import FlowState, GasModel, MassMesh
from lagsym.symmetry import (EULER_STENCIL_SIZE, GENERATORS, SET_GENERATORS, SET_SIZES, STENCIL_SIZE, Stencil,
                             admitted_generators, compute_invariants, finite_transform, get_generator,
                             guarded_ratio, invariant_form_residuals, invariant_max_change,
                             mesh_orthogonality_criterion, random_stencil, set_applicable)
from lagsym.invariance import stencil_residuals
from lagsym.verify import solution_segment

KEYS = ("t", "s", "r", "u", "rho", "p")


@pytest.mark.parametrize("gid", sorted(GENERATORS))
@pytest.mark.parametrize("n", [0, 1, 2])
def test_flow_matches_ode_integration(gid, n):
    g = GENERATORS[gid]
    x0 = np.array([0.3, 0.7, 1.2, -0.4, 1.1, 0.9])
    if g.frame == "eulerian":
        x0[1] = 0.0

    def rhs(_, x):
        c = g.coeffs(*x, n)
        return [float(c[k]) for k in KEYS]

    for a in (-0.6, 0.4, 1.0):
        sol = solve_ivp(rhs, (0.0, a), x0, rtol=1e-12, atol=1e-13)
        assert np.allclose(sol.y[:, -1], g.flow(a, *x0, n), rtol=1e-9, atol=1e-10), (gid, a)


def test_aliases_and_admission():
    assert get_generator("X*,γ") is get_generator("projective")
    with pytest.raises(KeyError):
        get_generator("X99")
    ids = {g.id for g in admitted_generators(GasModel(1, 1.4))}
    assert ids == {"X1", "X2", "X3", "X4", "X0"}
    ids = {g.id for g in admitted_generators(GasModel.special(0))}
    assert ids == {"X1", "X2", "X3", "X4", "X0", "Xn*", "Xn**", "Xg*"}


def _layer():
    mesh = MassMesh.uniform(4, 0.0, 1.0)
    r = np.linspace(0.0, 1.0, 5)
    state = FlowState(r=r, u=0.1 * r, rho=np.ones(4), p=np.ones(4), eps=2.5 * np.ones(4))
    return mesh, state


def test_finite_transform_examples():
    mesh, state = _layer()
    t, m2, s2 = finite_transform(get_generator("X1"), 5.0, state, mesh=mesh)
    assert t == 5.0 and np.array_equal(s2.r, state.r) and np.array_equal(m2.s_nodes, mesh.s_nodes)
    t, _, s2 = finite_transform(get_generator("galilean"), 2.0, state, mesh=mesh, t=0.5)
    assert np.allclose(s2.r, state.r + 1.0) and np.allclose(s2.u, state.u + 2.0)
    # projective image at t = 0 only shifts the velocity
    t, _, s2 = finite_transform(get_generator("projective"), 0.7, state, mesh=mesh)
    assert t == 0.0 and np.allclose(s2.u, state.u + 0.7 * state.r) and np.allclose(s2.rho, state.rho)
    with pytest.raises(DomainError):
        finite_transform(get_generator("projective"), 2.0, state, mesh=mesh, t=0.5)
    with pytest.raises(ValueError):
        finite_transform(get_generator("X1"), 1.0, state)
    with pytest.raises(TypeError):
        finite_transform(get_generator("X1"), 1.0, [1, 2])


def test_finite_transform_keeps_energy_consistent():
    mesh, state = _layer()
    _, _, s2 = finite_transform(get_generator("X4"), 0.3, state, mesh=mesh)
    assert np.allclose(s2.eps, s2.p / (0.4 * s2.rho))


def _static_stencil(tau=0.1):
    return Stencil(t=0.2, th=0.2 + tau, s=0.5, sp=0.6, sm=0.4, u=0.0, up=0.0, uh=0.0, uhp=0.0,
                   r=1.0, rp=1.1, rh=1.0, rhp=1.1, rho=1.0, rhom=1.0, rhoh=1.0, rhohm=1.0,
                   p=2.0, pm=2.0, ph=2.0, phm=2.0)


def test_invariants_on_static_state():
    I = np.concatenate([[np.nan], compute_invariants(_static_stencil(), GasModel(1, 1.4), "Lagr-general-16").values])  # noqa: E741
    assert I[4] == 0.0
    assert np.all(I[5:8] == 1.0)
    assert np.all(I[11:17] == 1.0)


def test_gstar_pressure_invariant_on_isentropic_state():
    gas = GasModel.special(1)
    st_ = _static_stencil()
    rhoh = 1.3
    st_ = Stencil(**{**st_.__dict__, "rhoh": rhoh, "ph": 2.0 * rhoh**gas.gamma})
    J = compute_invariants(st_, gas, "Lagr-γ*-15").values
    assert J[4] == pytest.approx(1.0, rel=1e-14)


def test_invariant_set_applicability():
    with pytest.raises(ApplicabilityError):
        compute_invariants(_static_stencil(), GasModel(1, 1.4), "Lagr-n0-14")
    with pytest.raises(KeyError):
        set_applicable("bogus", GasModel(0, 1.4))
    assert set_applicable("Lagr-n0-γ3-13", GasModel.special(0))


def test_guarded_ratio():
    assert guarded_ratio(0.0, 0.0) == 1.0
    assert guarded_ratio(1.0, 2.0) == 0.5


def test_cardinalities():
    for sid, gens in SET_GENERATORS.items():
        dim = EULER_STENCIL_SIZE if sid == "Euler-12" else STENCIL_SIZE
        assert SET_SIZES[sid] == dim - len(gens)


def _gas_for(sid):
    return {"Euler-12": GasModel(0, 1.4), "Lagr-general-16": GasModel(2, 1.4), "Lagr-n0-14": GasModel(0, 1.4),
            "Lagr-gstar-15": GasModel.special(1), "Lagr-n0-g3-13": GasModel.special(0)}[sid]


@pytest.mark.parametrize("sid", sorted(SET_SIZES))
def test_invariant_jacobian_has_full_rank(sid):
    # the invariants are functionally independent
    gas = _gas_for(sid)
    base = random_stencil(np.random.default_rng(2), 1, gas.n).as_array()[:, 0]
    free = [k for k in range(STENCIL_SIZE) if not (sid == "Euler-12" and k in (2, 3, 4))]
    f = lambda x: compute_invariants(Stencil.from_array(x), gas, sid).values  # noqa: E731
    cols = []
    for k in free:
        d = np.zeros_like(base)
        d[k] = 1e-6 * max(1.0, abs(base[k]))
        cols.append((f(base + d) - f(base - d)) / (2 * d[k]))
    J = np.array(cols).T
    assert np.linalg.matrix_rank(J, tol=1e-6 * np.max(np.abs(J))) == SET_SIZES[sid]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31), st.floats(-1.0, 1.0))
def test_invariants_are_invariant(seed, a):
    rng = np.random.default_rng(seed)
    for sid, gens in SET_GENERATORS.items():
        gas = _gas_for(sid)
        sten = random_stencil(rng, 8, gas.n)
        for gid in gens:
            if sid != "Euler-12" and not get_generator(gid).admitted(gas):
                continue
            assert invariant_max_change(get_generator(gid), a, sten, gas, sid) <= 1e-11, (sid, gid)


def test_non_admitted_generator_changes_invariants():
    gas = GasModel(0, 1.4)
    sten = random_stencil(np.random.default_rng(4), 20, 0)
    assert invariant_max_change(get_generator("Xg*"), 0.5, sten, gas, "Lagr-n0-14") > 1e-3


def test_mesh_orthogonality():
    failing = {g.id for g in GENERATORS.values() if not mesh_orthogonality_criterion(g)}
    assert failing == {"E6", "E7"}


@pytest.mark.parametrize("n", [0, 1, 2])
def test_invariant_form_equivalent_to_direct_form(n):
    for scheme, gas, key in (("sp", GasModel(n, 1.4), "sp"),
                             ("explicit-invariant", GasModel.special(n), "explicit")):
        _, sts = solution_segment(scheme, gas)
        for sten in sts:
            # solutions satisfy both forms
            assert np.max(np.abs(invariant_form_residuals(key, sten, gas))) <= 1e-9
            assert np.max(stencil_residuals(scheme, sten, gas)) <= 1e-9
        # a perturbed layer violates both
        bad = Stencil(**{**sts[0].__dict__, "uh": sts[0].uh + 1e-3})
        assert np.max(np.abs(invariant_form_residuals(key, bad, gas))) > 1e-7
        assert np.max(stencil_residuals(scheme, bad, gas)) > 1e-7


def test_invariant_form_unknown_scheme():
    with pytest.raises(ValueError):
        invariant_form_residuals("bogus", _static_stencil(), GasModel(0, 1.4))
