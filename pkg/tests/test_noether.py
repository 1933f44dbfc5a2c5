import numpy as np
import pytest
import sympy as sp

from lagsym.catalog import catalog, get_law
from lagsym.errors import ApplicabilityError, DomainError
from lagsym.gas import EntropyProfile, GasModel
from lagsym.noether import (S_SYM, T, EulerFields, SmoothField, euler_lagrange_residual, inhomogeneous_cl_residual,
                            inhomogeneous_source_max, inhomogeneous_terms, noether_identity_residual,
                            noether_sides, random_field)
from lagsym.verify import TRIVIAL_LAWS, gas_cases


def test_el_residual_static_and_translation():
    gas, prof = GasModel(0, 1.4), EntropyProfile.constant(1.0)
    for expr in (S_SYM, S_SYM + 0.7 * T):
        f = SmoothField.from_sympy(expr)
        t, s = f.grid(4)
        assert np.max(np.abs(euler_lagrange_residual(f, gas, prof, t, s))) == 0.0


def test_el_residual_entropy_gradient():
    f = SmoothField.from_sympy(S_SYM)
    prof = EntropyProfile.analytic(lambda s: s, lambda s: np.ones_like(s))
    assert euler_lagrange_residual(f, GasModel(0, 2.0), prof, 0.5, 1.0) == pytest.approx(1.0)


def test_el_residual_rejects_folded_field():
    f = SmoothField.from_sympy(-S_SYM)
    with pytest.raises(DomainError):
        euler_lagrange_residual(f, GasModel(0, 1.4), EntropyProfile.constant(1.0), 0.5, 1.0)


def test_energy_law_on_static_solution():
    # r^3 = 3 s is a spherical gas at rest with unit density and uniform pressure
    gas = GasModel(2, 1.4)
    f = SmoothField.from_sympy((3 * S_SYM) ** sp.Rational(1, 3))
    prof = EntropyProfile.constant(1.0)
    t, s = f.grid(4)
    law = get_law("energy-general", gas, prof)
    A, QE = noether_sides(law, f, gas, prof, t, s)
    assert np.max(np.abs(A - law.sigma * QE)) <= 1e-8
    assert np.max(np.abs(euler_lagrange_residual(f, gas, prof, t, s))) <= 1e-12


def test_energy_identity_off_shell_cylindrical():
    gas, prof = GasModel(1, 1.4), EntropyProfile.constant(1.0)
    f = SmoothField.from_sympy(sp.sqrt(2 * S_SYM) * (1 + sp.Rational(1, 10) * sp.sin(T)))
    t, s = f.grid(5)
    law = get_law("energy-general", gas, prof)
    A, QE = noether_sides(law, f, gas, prof, t, s)
    assert np.max(np.abs(A - law.sigma * QE)) <= 1e-7
    assert np.max(np.abs(A)) > 1e-2


def test_momentum_law_needs_plane_geometry():
    with pytest.raises(ApplicabilityError):
        get_law("momentum-n0", GasModel(1, 1.4), EntropyProfile.constant(1.0))


def test_grid_too_close_to_boundary():
    gas, prof = GasModel(0, 1.4), EntropyProfile.constant(1.0)
    f = SmoothField.from_sympy(S_SYM + T**2)
    law = get_law("energy-general", gas, prof)
    with pytest.raises(ValueError):
        noether_identity_residual(law, f, gas, prof, np.array([0.0]), np.array([1.0]))


@pytest.mark.parametrize("case", range(0, 18, 2))
def test_identity_holds_off_shell(case):
    gas, prof = gas_cases()[case]
    rng = np.random.default_rng(100 + case)
    f = random_field(rng, gas.n)
    t, s = f.grid(4)
    assert np.max(np.abs(euler_lagrange_residual(f, gas, prof, t, s))) > 1e-3  # really off shell
    for law in catalog(gas, prof):
        A, QE = noether_sides(law, f, gas, prof, t, s)
        assert np.max(np.abs(A - law.sigma * QE)) <= 1e-7, law.case_id
        if law.case_id not in TRIVIAL_LAWS:
            assert np.max(np.abs(A)) > 1e-2, law.case_id


def _fields(a=0.1, b=0.2, c=-0.1, t=0.3):
    return EulerFields(lambda r: 1 + a * np.sin(2 * r), lambda r: b * np.cos(r) + 0.1,
                       lambda r: 1 + c * np.cos(3 * r), t=t)


R = np.linspace(0.6, 1.4, 21)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_inhomogeneous_mass_with_r_power_is_homogeneous(n):
    gas = GasModel(n, 1.4)
    F = lambda t, r, z: r**n + 0 * z  # noqa: E731
    assert inhomogeneous_cl_residual("mass-F", F, _fields(), R, gas) <= 1e-8
    assert inhomogeneous_source_max("mass-F", F, _fields(), R, gas) <= 1e-10


def test_inhomogeneous_momentum_plane_homogeneous():
    gas = GasModel(0, 1.4)
    h = lambda t, r: 1.0 + 0 * r  # noqa: E731
    assert inhomogeneous_cl_residual("momentum-h", h, _fields(), R, gas) <= 1e-8
    assert inhomogeneous_source_max("momentum-h", h, _fields(), R, gas) <= 1e-10


def test_inhomogeneous_energy_spherical_with_unit_weight():
    gas = GasModel(2, 1.4)
    h = lambda t, r: 1.0 + 0 * r  # noqa: E731
    assert inhomogeneous_cl_residual("energy-h", h, _fields(), R, gas) <= 1e-8
    assert inhomogeneous_source_max("energy-h", h, _fields(), R, gas) > 1e-3


def test_inhomogeneous_errors():
    gas = GasModel(1, 1.4)
    h = lambda t, r: 1.0 + 0 * r  # noqa: E731
    with pytest.raises(DomainError):
        inhomogeneous_terms("energy-h", h, _fields(), np.linspace(0.0, 1.0, 5), gas)
    neg = EulerFields(lambda r: -1 + 0 * r, lambda r: 0 * r, lambda r: 1 + 0 * r)
    with pytest.raises(DomainError):
        inhomogeneous_terms("energy-h", h, neg, R, GasModel(0, 1.4))
    with pytest.raises(ValueError):
        inhomogeneous_terms("bogus", h, _fields(), R, gas)
