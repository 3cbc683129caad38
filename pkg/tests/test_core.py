import math

import numpy as np
import pytest

from sqlandauer.core import (
    CutoffError,
    DensityMatrix,
    FockCutoff,
    SupportError,
    auto_cutoff,
    haar_unitary,
    ladder_operators,
    mutual_information,
    number_operator,
    partial_trace,
    random_density_matrix,
    relative_entropy,
    squeeze_operator,
    squeezed_thermal_state,
    tensor,
    thermal_state,
    von_neumann_entropy,
)

RNG = np.random.default_rng(1234)


def test_ladder_smallest_cutoff():
    a, ad = ladder_operators(FockCutoff(2))
    assert np.array_equal(a, np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert np.array_equal(ad, a.conj().T)


def test_vacuum_annihilated():
    for n_max in (2, 5, 17):
        a, ad = ladder_operators(FockCutoff(n_max))
        vac = np.zeros(n_max)
        vac[0] = 1.0
        assert vac @ (ad @ a) @ vac == 0.0


def test_commutator_corner():
    n_max = 16
    a, ad = ladder_operators(FockCutoff(n_max))
    comm = a @ ad - ad @ a
    expected = np.eye(n_max)
    expected[-1, -1] = 1.0 - n_max
    assert np.max(np.abs(comm - expected)) < 1e-12


def test_squeeze_zero_strength_is_identity():
    s = squeeze_operator(FockCutoff(12), 0.0, 0.3)
    assert np.max(np.abs(s - np.eye(12))) < 1e-14


def test_squeeze_phase_periodicity():
    cut = FockCutoff(25)
    s1 = squeeze_operator(cut, 0.5, math.pi / 3)
    s2 = squeeze_operator(cut, 0.5, math.pi / 3 + 2.0 * math.pi)
    assert np.max(np.abs(s1 - s2)) < 1e-12


def test_squeeze_unitarity_at_auto_cutoffs():
    for n_bar, r in ((0.0, 1.0), (1.0, 0.5), (2.0, 1.2)):
        cut = auto_cutoff(n_bar, r)
        s = squeeze_operator(cut, r, 0.7)
        assert np.max(np.abs(s.conj().T @ s - np.eye(cut.dim))) <= 1e-10


def test_squeeze_bogoliubov_low_block():
    # boundary contamination creeps down from the truncation edge, so at
    # cutoff 40 only the lowest few levels reproduce the mixing relation
    cut = FockCutoff(40)
    r = 0.5
    s = squeeze_operator(cut, r, 0.0)
    a, ad = ladder_operators(cut)
    mixed = s.conj().T @ a @ s
    ideal = a * math.cosh(r) - ad * math.sinh(r)
    assert np.max(np.abs((mixed - ideal)[:5, :5])) < 1e-8


def test_squeeze_rejects_negative_strength():
    with pytest.raises(ValueError):
        squeeze_operator(FockCutoff(10), -0.1, 0.0)


def test_thermal_frozen_limit_is_ground_projector():
    rho = thermal_state(FockCutoff(8), 50.0, 1.0)
    proj = np.zeros((8, 8))
    proj[0, 0] = 1.0
    assert np.max(np.abs(rho.matrix - proj)) < 1e-20


def test_thermal_occupation_matches_bose_einstein():
    cut = FockCutoff(40)
    rho = thermal_state(cut, 1.0, 1.0)
    a, ad = ladder_operators(cut)
    occ = float(np.trace(ad @ a @ rho.matrix).real)
    assert abs(occ - 1.0 / (math.e - 1.0)) < 1e-9


def test_thermal_entropy_closed_form():
    cut = FockCutoff(40)
    rho = thermal_state(cut, 1.0, 1.0)
    nb = 1.0 / (math.e - 1.0)
    closed = (nb + 1.0) * math.log(nb + 1.0) - nb * math.log(nb)
    assert abs(von_neumann_entropy(rho) - closed) < 1e-8


def test_thermal_cutoff_too_small():
    with pytest.raises(CutoffError):
        thermal_state(FockCutoff(4), 0.1, 1.0)


def test_sts_reduces_to_thermal_at_zero_squeezing():
    cut = FockCutoff(30)
    sts = squeezed_thermal_state(cut, 1.0, 1.0, 0.0, 0.0)
    th = thermal_state(cut, 1.0, 1.0)
    assert np.max(np.abs(sts.matrix - th.matrix)) < 1e-13


def test_sts_moments_against_closed_forms():
    # n_bar = 1 corresponds to beta*omega = ln 2
    beta, omega, r, theta = math.log(2.0), 1.0, 0.5, math.pi / 3
    cut = auto_cutoff(1.0, r)
    rho = squeezed_thermal_state(cut, beta, omega, r, theta)
    a, ad = ladder_operators(cut)
    occ = complex(np.trace(ad @ a @ rho.matrix))
    aa = complex(np.trace(a @ a @ rho.matrix))
    assert abs(occ - (math.cosh(1.0) + math.sinh(0.5) ** 2)) < 1e-7
    expected_aa = -0.5 * 3.0 * math.sinh(1.0) * np.exp(1j * theta)
    assert abs(aa - expected_aa) < 1e-7


def test_sts_explicit_small_cutoff_needs_loose_tolerance():
    # at n_max = 60 the genuine tail is a few 1e-8, so the default deficit
    # tolerance refuses it and a looser one yields ~1e-6 accurate moments
    beta = math.log(2.0)
    with pytest.raises(CutoffError):
        squeezed_thermal_state(FockCutoff(60), beta, 1.0, 0.5, math.pi / 3)
    cut = FockCutoff(60, trace_deficit_tol=1e-6)
    rho = squeezed_thermal_state(cut, beta, 1.0, 0.5, math.pi / 3)
    a, ad = ladder_operators(cut)
    occ = float(np.trace(ad @ a @ rho.matrix).real)
    assert abs(occ - (math.cosh(1.0) + math.sinh(0.5) ** 2)) < 1e-6


@pytest.mark.parametrize(
    "n_bar,r",
    [(0.0, 1.5), (0.5, 0.75), (1.0, 1.0), (2.0, 0.8), (3.0, 0.3)],
)
def test_sts_moments_match_truncated_oracle_at_auto_cutoff(n_bar, r):
    from sqlandauer.sts import ModeSpec, sts_moments

    beta = math.log((n_bar + 1.0) / n_bar) if n_bar > 0 else 50.0
    theta = 1.1
    mode = ModeSpec(omega=1.0, k=1.0, r=r, theta=theta, beta=beta)
    mom = sts_moments(mode)
    cut = auto_cutoff(n_bar, r)
    rho = squeezed_thermal_state(cut, beta, 1.0, r, theta)
    a, ad = ladder_operators(cut)
    occ = complex(np.trace(ad @ a @ rho.matrix))
    aa = complex(np.trace(a @ a @ rho.matrix))
    assert abs(occ - mom.ada) < 1e-7
    assert abs(aa - mom.aa) < 1e-7


def test_truncated_moments_converge_between_auto_and_double():
    cut = auto_cutoff(1.0, 0.5)
    double = FockCutoff(2 * cut.n_max)
    vals = []
    for c in (cut, double):
        rho = squeezed_thermal_state(c, math.log(2.0), 1.0, 0.5, 0.9)
        a, ad = ladder_operators(c)
        vals.append(float(np.trace(ad @ a @ rho.matrix).real))
    assert abs(vals[0] - vals[1]) < cut.trace_deficit_tol * 10


def test_partial_trace_product_round_trip():
    rho_a = random_density_matrix(3, RNG)
    rho_b = random_density_matrix(4, RNG)
    joint = tensor(rho_a, rho_b)
    back_a = partial_trace(joint, [0])
    back_b = partial_trace(joint, [1])
    assert np.max(np.abs(back_a.matrix - rho_a.matrix)) < 1e-12
    assert np.max(np.abs(back_b.matrix - rho_b.matrix)) < 1e-12


def test_partial_trace_maximally_entangled():
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1.0 / math.sqrt(2.0)
    rho = DensityMatrix(np.outer(psi, psi.conj()), (2, 2))
    for keep in ([0], [1]):
        reduced = partial_trace(rho, keep)
        assert np.max(np.abs(reduced.matrix - 0.5 * np.eye(2))) < 1e-12


def test_partial_trace_preserves_trace():
    rho = random_density_matrix(6, RNG)
    rho = DensityMatrix(rho.matrix, (2, 3))
    reduced = partial_trace(rho, [0])
    assert abs(reduced.matrix.trace().real - 1.0) < 1e-12


def test_partial_trace_rejects_bad_keep():
    rho = DensityMatrix(np.eye(4) / 4.0, (2, 2))
    with pytest.raises(IndexError):
        partial_trace(rho, [2])
    with pytest.raises(ValueError):
        partial_trace(rho, [0, 1])


def test_entropy_pure_state():
    psi = RNG.normal(size=5) + 1j * RNG.normal(size=5)
    psi /= np.linalg.norm(psi)
    rho = DensityMatrix(np.outer(psi, psi.conj()), (5,))
    assert abs(von_neumann_entropy(rho)) < 1e-12


def test_entropy_known_values():
    assert abs(von_neumann_entropy(np.eye(2) / 2.0) - math.log(2.0)) < 1e-14
    expected = -0.3 * math.log(0.3) - 0.7 * math.log(0.7)
    assert abs(von_neumann_entropy(np.diag([0.3, 0.7])) - expected) < 1e-14


def test_entropy_unitary_invariance():
    rho = random_density_matrix(7, RNG)
    u = haar_unitary(7, RNG)
    rotated = u @ rho.matrix @ u.conj().T
    assert abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) < 1e-10


def test_relative_entropy_identical_states():
    rho = random_density_matrix(5, RNG)
    assert abs(relative_entropy(rho, rho)) < 1e-11


def test_relative_entropy_scalar_case():
    val = relative_entropy(np.diag([0.3, 0.7]), np.diag([0.5, 0.5]))
    expected = 0.3 * math.log(0.6) + 0.7 * math.log(1.4)
    assert abs(val - expected) < 1e-12


def test_relative_entropy_nonnegative_random():
    for _ in range(20):
        rho = random_density_matrix(4, RNG)
        sigma = random_density_matrix(4, RNG)
        assert relative_entropy(rho, sigma) >= -1e-10


def test_relative_entropy_support_violation():
    sigma = np.diag([1.0, 0.0, 0.0])
    rho = np.eye(3) / 3.0
    with pytest.raises(SupportError):
        relative_entropy(rho, sigma)


def test_mutual_information_product_state():
    joint = tensor(random_density_matrix(2, RNG), random_density_matrix(3, RNG))
    assert abs(mutual_information(joint)) < 1e-10


def test_mutual_information_bell_pair():
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1.0 / math.sqrt(2.0)
    rho = DensityMatrix(np.outer(psi, psi.conj()), (2, 2))
    assert abs(mutual_information(rho) - 2.0 * math.log(2.0)) < 1e-12


def test_mutual_information_nonnegative_after_entangling():
    joint = tensor(random_density_matrix(2, RNG), random_density_matrix(2, RNG))
    u = haar_unitary(4, RNG)
    evolved = DensityMatrix(u @ joint.matrix @ u.conj().T, (2, 2))
    assert mutual_information(evolved) >= -1e-10


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix(np.array([[0.5, 0.1], [0.3, 0.5]]), (2,))  # not Hermitian
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([0.8, 0.8]), (2,))  # trace 1.6
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]), (2,))  # negative eigenvalue
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(4) / 4.0, (2,))  # space mismatch


def test_number_operator():
    num = number_operator(FockCutoff(5))
    assert np.array_equal(np.diag(num).real, np.arange(5.0))
