import math

import numpy as np
import pytest

from sqlandauer.sts import (
    Coefficients,
    ModeSpec,
    Moments,
    bose_einstein,
    min_coefficients,
    positivity_certificate,
    sts_coefficients,
    sts_moments,
)


def test_bose_einstein_frozen_limit():
    assert bose_einstein(50.0, 1.0) < 1e-21


def test_bose_einstein_unit_temperature():
    assert abs(bose_einstein(1.0, 1.0) - 1.0 / (math.e - 1.0)) < 1e-15


def test_bose_einstein_ln2_gives_one():
    assert abs(bose_einstein(math.log(2.0), 1.0) - 1.0) < 1e-14


def test_bose_einstein_rejects_nonpositive():
    with pytest.raises(ValueError):
        bose_einstein(-1.0, 1.0)


def test_moments_no_squeezing():
    mode = ModeSpec(omega=1.0, k=1.0, r=0.0, theta=0.0, beta=1.0)
    mom = sts_moments(mode)
    assert mom.aa == 0.0
    assert abs(mom.ada - mode.n_bar) < 1e-15
    assert abs(mom.aad - mom.ada - 1.0) < 1e-15


def test_moments_vacuum_squeezing():
    mode = ModeSpec(omega=1.0, k=1.0, r=1.0, theta=0.0, beta=50.0)
    mom = sts_moments(mode)
    assert abs(mom.ada - math.sinh(1.0) ** 2) < 1e-12


def test_moments_squeezed_thermal_values():
    mode = ModeSpec(omega=1.0, k=1.0, r=0.5, theta=math.pi / 3, beta=math.log(2.0))
    mom = sts_moments(mode)
    assert abs(mom.ada - (math.cosh(1.0) + math.sinh(0.5) ** 2)) < 1e-12
    expected = -0.5 * 3.0 * math.sinh(1.0) * np.exp(1j * math.pi / 3)
    assert abs(mom.aa - expected) < 1e-12


def test_moments_physicality_over_grid():
    for n_bar in (0.0, 0.5, 1.5, 3.0):
        beta = math.log((n_bar + 1.0) / n_bar) if n_bar > 0 else 50.0
        for r in (0.0, 0.4, 1.0, 1.5):
            mom = sts_moments(ModeSpec(omega=1.0, k=1.0, r=r, theta=1.1, beta=beta))
            assert abs(mom.aa) <= mom.ada + 0.5 + 1e-9


def test_moments_reject_unphysical():
    with pytest.raises(ValueError):
        Moments(aa=2.0 + 0.0j, ada=1.0)


def test_min_coefficients_symmetric_population():
    a_min, b_min = min_coefficients(0.7, 0.5, 1.3, 1.1)
    assert abs(a_min - 1.3 * 1.1 / 2.0) < 1e-13
    assert abs(b_min - 1.3 * 1.1 / 2.0) < 1e-13


def test_min_coefficients_gibbs_matched_root():
    n_bar = 0.9
    p = n_bar / (2.0 * n_bar + 1.0)
    a_min, _ = min_coefficients(n_bar, p, math.log((n_bar + 1.0) / n_bar), 1.0)
    assert abs(a_min) < 1e-14


def test_min_coefficients_strictly_positive_generic():
    a_min, b_min = min_coefficients(0.581977, 0.3, 1.0, 1.0)
    assert a_min > 0.0 and b_min > 0.0


def test_min_coefficients_nonnegative_on_consistent_grid():
    for n_bar in np.linspace(0.01, 3.0, 15):
        beta_omega = math.log((n_bar + 1.0) / n_bar)
        for p in np.linspace(0.05, 0.95, 15):
            a_min, b_min = min_coefficients(n_bar, float(p), beta_omega, 1.0)
            assert a_min >= -1e-12
            assert b_min >= -1e-12


def test_min_coefficients_rejects_bad_population():
    with pytest.raises(ValueError):
        min_coefficients(1.0, 0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        min_coefficients(1.0, 1.0, 1.0, 1.0)


def test_coefficients_collapse_at_zero_squeezing():
    co = sts_coefficients(0.4, 0.9, 0.0)
    assert (co.A, co.B, co.C) == (0.4, 0.9, 0.0)


def test_coefficients_scalar_case():
    co = sts_coefficients(0.5, 0.5, 1.0)
    assert abs(co.A - (math.sinh(1.0) ** 2 + 0.5)) < 1e-14
    assert abs(co.B - co.A) < 1e-14
    assert abs(co.C - math.sinh(2.0)) < 1e-14


def test_coefficients_never_below_minima():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a_min, b_min = rng.uniform(0.0, 2.0, size=2)
        co = sts_coefficients(a_min, b_min, rng.uniform(0.0, 1.5))
        assert co.A >= co.A_min - 1e-14
        assert co.B >= co.B_min - 1e-14


def test_positivity_certificate_zero_squeezing():
    assert positivity_certificate(sts_coefficients(0.3, 0.8, 0.0)) == 0.0


def test_positivity_certificate_degenerate_a():
    co = sts_coefficients(0.0, 0.7, 0.9)
    assert abs(4.0 * co.A * co.B - co.C**2) < 1e-14 * (1.0 + 4.0 * co.A * co.B)


def test_positivity_certificate_random_sweep():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        a_min, b_min = rng.uniform(0.0, 3.0, size=2)
        co = sts_coefficients(a_min, b_min, rng.uniform(0.0, 1.5))
        res = abs(positivity_certificate(co))
        assert res <= 1e-12 * (1.0 + 4.0 * co.A * co.B)


def test_mode_spec_box_mode():
    mode = ModeSpec.box_mode(2, 10.0, beta=1.0)
    assert abs(mode.k - 4.0 * math.pi / 10.0) < 1e-15
    assert mode.omega == abs(mode.k)
    with pytest.raises(ValueError):
        ModeSpec.box_mode(0, 10.0)


def test_mode_spec_validation():
    with pytest.raises(ValueError):
        ModeSpec(omega=-1.0, k=1.0)
    with pytest.raises(ValueError):
        ModeSpec(omega=1.0, k=1.0, r=-0.2)
    with pytest.raises(ValueError):
        ModeSpec(omega=1.0, k=1.0, normalization="continuum")
