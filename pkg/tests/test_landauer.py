import math

import numpy as np
import pytest

from sqlandauer.core import (
    DensityMatrix,
    FockCutoff,
    haar_unitary,
    number_operator,
    random_density_matrix,
    squeeze_operator,
)
from sqlandauer.landauer import (
    ReservoirSpec,
    effective_hamiltonian,
    gibbs_conjugation_check,
    gibbs_state,
    landauer_budget,
    reservoir_state,
)

RNG = np.random.default_rng(2024)


def _random_spec(dim, rng, beta=None):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = 0.5 * (g + g.conj().T)
    return ReservoirSpec(h, beta or rng.uniform(0.3, 1.2), haar_unitary(dim, rng))


def test_effective_hamiltonian_identity_preparation():
    h = np.diag([0.0, 1.0, 2.0]).astype(complex)
    spec = ReservoirSpec(h, 1.0, np.eye(3, dtype=complex))
    assert np.max(np.abs(effective_hamiltonian(spec) - h)) == 0.0


def test_effective_hamiltonian_squeeze_matches_hyperbolic_expansion():
    # truncation contaminates the levels near the boundary, so the
    # hyperbolic expansion is reproduced on a low block of about n_max/8
    cut = FockCutoff(40)
    r, theta, omega = 0.4, 0.9, 1.3
    s = squeeze_operator(cut, r, theta)
    spec = ReservoirSpec(omega * number_operator(cut), 1.0, s)
    h_eff = effective_hamiltonian(spec)
    a = np.zeros((cut.dim, cut.dim), dtype=complex)
    idx = np.arange(1, cut.dim)
    a[idx - 1, idx] = np.sqrt(idx)
    ad = a.conj().T
    expansion = omega * (
        math.cosh(2 * r) * (ad @ a)
        + 0.5 * math.sinh(2 * r) * (np.exp(1j * theta) * (ad @ ad) + np.exp(-1j * theta) * (a @ a))
        + math.sinh(r) ** 2 * np.eye(cut.dim)
    )
    assert np.max(np.abs((h_eff - expansion)[:5, :5])) < 1e-8


def test_effective_hamiltonian_preserves_spectrum():
    spec = _random_spec(6, RNG)
    before = np.linalg.eigvalsh(spec.hamiltonian)
    after = np.linalg.eigvalsh(effective_hamiltonian(spec))
    assert np.max(np.abs(before - after)) < 1e-9


def test_gibbs_conjugation_identity_preparation():
    h = np.diag([0.0, 0.7, 1.9]).astype(complex)
    spec = ReservoirSpec(h, 0.8, np.eye(3, dtype=complex))
    assert gibbs_conjugation_check(spec) < 1e-13


def test_gibbs_conjugation_random_unitary():
    rng = np.random.default_rng(5)
    for _ in range(10):
        spec = _random_spec(4, rng, beta=0.7)
        assert gibbs_conjugation_check(spec) <= 1e-10


def test_gibbs_conjugation_squeeze_at_cutoff():
    cut = FockCutoff(40)
    spec = ReservoirSpec(
        number_operator(cut), 1.0, squeeze_operator(cut, 0.6, 0.3)
    )
    assert gibbs_conjugation_check(spec) <= 1e-8


def test_budget_trivial_evolution():
    cut = FockCutoff(6)
    spec = ReservoirSpec(number_operator(cut), 1.0, np.eye(6, dtype=complex))
    rho_s = DensityMatrix(np.diag([0.3, 0.7]).astype(complex), (2,))
    budget = landauer_budget(rho_s, spec, np.eye(12, dtype=complex))
    for value in (budget.heat, budget.entropy_change, budget.mutual_info, budget.rel_entropy):
        assert abs(value) < 1e-10


def test_budget_swap_with_thermal_qubit():
    # swapping system and reservoir qubits makes sigma exactly the relative
    # entropy between the system state and the thermal state
    beta, omega = 1.0, 1.0
    h = np.diag([0.0, omega]).astype(complex)
    spec = ReservoirSpec(h, beta, np.eye(2, dtype=complex))
    p_s = 0.7  # ground population of the system qubit state diag(0.3, 0.7)
    rho_s = DensityMatrix(np.diag([0.3, 0.7]).astype(complex), (2,))
    swap = np.eye(4)[[0, 2, 1, 3]].astype(complex)
    budget = landauer_budget(rho_s, spec, swap)
    z = 1.0 + math.exp(-beta * omega)
    g = [1.0 / z, math.exp(-beta * omega) / z]
    relent = 0.3 * math.log(0.3 / g[0]) + p_s * math.log(p_s / g[1])
    assert abs(budget.equality_residual) <= 1e-11
    assert abs(budget.mutual_info) < 1e-11
    assert abs(budget.sigma - relent) < 1e-11
    heat = beta * (omega * 0.7 - omega * g[1])
    assert abs(budget.heat - heat) < 1e-12


def test_budget_random_qubit_mode_instances():
    rng = np.random.default_rng(17)
    cut = FockCutoff(12)
    num = number_operator(cut)
    for _ in range(10):
        spec = ReservoirSpec(
            rng.uniform(0.5, 1.5) * num,
            rng.uniform(0.3, 1.2),
            squeeze_operator(cut, 0.4, 1.0),
        )
        rho_s = random_density_matrix(2, rng)
        u = haar_unitary(2 * cut.dim, rng)
        budget = landauer_budget(rho_s, spec, u)
        assert abs(budget.equality_residual) <= 1e-9
        assert budget.sigma >= -1e-10
        assert budget.heat - budget.entropy_change >= -1e-10
        assert abs(budget.sigma - (budget.mutual_info + budget.rel_entropy)) <= 1e-9


def test_budget_rejects_nonunitary():
    cut = FockCutoff(4)
    spec = ReservoirSpec(number_operator(cut), 1.0, np.eye(4, dtype=complex))
    rho_s = DensityMatrix(np.diag([0.5, 0.5]).astype(complex), (2,))
    with pytest.raises(ValueError):
        landauer_budget(rho_s, spec, 0.5 * np.eye(8, dtype=complex))
    with pytest.raises(ValueError):
        landauer_budget(rho_s, spec, np.eye(10, dtype=complex))


def test_reservoir_spec_validation():
    with pytest.raises(ValueError):
        ReservoirSpec(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0, np.eye(2))
    with pytest.raises(ValueError):
        ReservoirSpec(np.eye(2), 1.0, 2.0 * np.eye(2))
    with pytest.raises(ValueError):
        ReservoirSpec(np.eye(2), -1.0, np.eye(2))


def test_gibbs_state_matches_explicit_weights():
    h = np.diag([0.0, 1.0, 3.0]).astype(complex)
    rho = gibbs_state(h, 2.0)
    w = np.exp(-2.0 * np.array([0.0, 1.0, 3.0]))
    w /= w.sum()
    assert np.max(np.abs(rho.matrix - np.diag(w))) < 1e-14


def test_reservoir_state_is_conjugated_gibbs():
    cut = FockCutoff(15)
    s = squeeze_operator(cut, 0.3, 0.2)
    spec = ReservoirSpec(number_operator(cut), 1.0, s)
    rho_r = reservoir_state(spec)
    direct = s @ gibbs_state(spec.hamiltonian, 1.0).matrix @ s.conj().T
    assert np.max(np.abs(rho_r.matrix - direct)) < 1e-13
