"""Verification suite: every release-gating check as a callable criterion.

Each criterion returns a CriterionResult with a one-line detail string; the
CLI ``verify`` subcommand prints one PASS/FAIL line per criterion and the
test suite asserts them individually. All randomness is seeded, so the
suite is reproducible.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .core import (
    DensityMatrix,
    FockCutoff,
    auto_cutoff,
    haar_unitary,
    number_operator,
    partial_trace,
    random_density_matrix,
    squeeze_operator,
    tensor,
)
from .detector import (
    DetectorSpec,
    InteractionWindow,
    delta_p_bruteforce,
    delta_p_contributions,
    perturbative_report,
    respond,
    static_response_closed_form,
)
from .landauer import ReservoirSpec, gibbs_conjugation_check, landauer_budget, reservoir_state
from .oracle import PropagationConfig, exact_population_shift, exact_vs_perturbative, oracle_cutoff
from .sts import ModeSpec, min_coefficients, positivity_certificate, sts_coefficients
from .trajectories import (
    InertialTrajectory,
    StaticTrajectory,
    UniformAccelerationTrajectory,
)

DEFAULT_SEED = 20260808


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float


def _rng(seed: int, salt: int) -> np.random.Generator:
    return np.random.default_rng([seed, salt])


@lru_cache(maxsize=4)
def _squeezed_instances(seed: int):
    """Shared instance batch for the budget equality and inequality checks."""
    rng = _rng(seed, 1)
    cut = FockCutoff(12)
    num = number_operator(cut)
    budgets = []
    for _ in range(100):
        beta = rng.uniform(0.2, 1.2)
        omega = rng.uniform(0.5, 1.5)
        r = rng.uniform(0.0, 1.0)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        spec = ReservoirSpec(omega * num, beta, squeeze_operator(cut, r, theta))
        rho_s = random_density_matrix(2, rng)
        u = haar_unitary(2 * cut.dim, rng)
        budgets.append(landauer_budget(rho_s, spec, u))
    return budgets


def criterion_01(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    budgets = _squeezed_instances(seed)
    worst = max(abs(b.equality_residual) for b in budgets)
    dt = time.perf_counter() - start
    passed = worst <= 1e-9 and dt < 30.0
    return CriterionResult(
        1,
        "budget equality on randomized squeezed reservoirs",
        passed,
        f"max |residual| {worst:.2e} over 100 instances (limit 1e-9), {dt:.1f}s",
        dt,
    )


def criterion_02(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    budgets = _squeezed_instances(seed)
    low = min(b.sigma for b in budgets)
    dt = time.perf_counter() - start
    return CriterionResult(
        2,
        "generalized inequality: entropy production non-negative",
        low >= -1e-10,
        f"min sigma {low:.2e} over 100 instances (limit -1e-10)",
        dt,
    )


def criterion_03(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    rng = _rng(seed, 3)
    cut = FockCutoff(10)
    num = number_operator(cut)
    worst = 0.0
    for _ in range(50):
        beta = rng.uniform(0.2, 1.2)
        omega = rng.uniform(0.5, 1.5)
        spec = ReservoirSpec(omega * num, beta, np.eye(cut.dim, dtype=complex))
        rho_s = random_density_matrix(2, rng)
        u = haar_unitary(2 * cut.dim, rng)
        budget = landauer_budget(rho_s, spec, u)
        # standard heat recomputed directly with the bare reservoir Hamiltonian
        rho_r = reservoir_state(spec)
        rho = tensor(rho_s, rho_r)
        evolved = u @ rho.matrix @ u.conj().T
        rho_out = DensityMatrix(0.5 * (evolved + evolved.conj().T), (2, cut.dim))
        rho_r_out = partial_trace(rho_out, [1])
        standard = beta * float(
            np.trace(spec.hamiltonian @ (rho_r_out.matrix - rho_r.matrix)).real
        )
        worst = max(worst, abs(budget.heat - standard))
    dt = time.perf_counter() - start
    return CriterionResult(
        3,
        "identity preparation reduces to the standard heat term",
        worst <= 1e-11,
        f"max |generalized - standard| {worst:.2e} over 50 instances (limit 1e-11)",
        dt,
    )


def criterion_04(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    rng = _rng(seed, 4)
    worst_small = 0.0
    for _ in range(50):
        dim = int(rng.integers(3, 9))
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        h = 0.5 * (g + g.conj().T)
        spec = ReservoirSpec(h, rng.uniform(0.2, 1.5), haar_unitary(dim, rng))
        worst_small = max(worst_small, gibbs_conjugation_check(spec))
    # squeeze preparation at the automatically selected cutoff
    worst_squeeze = 0.0
    for r in (0.3, 0.6):
        beta, omega = 1.0, 1.0
        n_bar = 1.0 / math.expm1(beta * omega)
        cut = auto_cutoff(n_bar, r)
        spec = ReservoirSpec(
            omega * number_operator(cut), beta, squeeze_operator(cut, r, 0.7)
        )
        worst_squeeze = max(worst_squeeze, gibbs_conjugation_check(spec))
    dt = time.perf_counter() - start
    passed = worst_small <= 1e-9 and worst_squeeze <= 1e-8
    return CriterionResult(
        4,
        "Gibbs conjugation identity",
        passed,
        f"max residual {worst_small:.2e} on 50 random specs (limit 1e-9); "
        f"{worst_squeeze:.2e} for squeeze preparation (limit 1e-8)",
        dt,
    )


def criterion_05(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    n_bars = np.linspace(0.0, 3.0, 10)
    ps = np.linspace(0.05, 0.95, 10)
    rs = np.linspace(0.0, 1.5, 10)
    worst = 0.0
    count = 0
    for n_bar in n_bars:
        beta_omega = math.log((n_bar + 1.0) / n_bar) if n_bar > 0 else 50.0
        for p in ps:
            a_min, b_min = min_coefficients(n_bar, float(p), beta_omega, 1.0)
            for r in rs:
                co = sts_coefficients(a_min, b_min, float(r))
                res = abs(positivity_certificate(co))
                worst = max(worst, res / (1.0 + 4.0 * co.A * co.B))
                count += 1
    dt = time.perf_counter() - start
    return CriterionResult(
        5,
        "coefficient positivity identity 4AB - C^2 = 4 A_min B_min",
        worst <= 1e-12,
        f"max relative residual {worst:.2e} over {count} grid points (limit 1e-12)",
        dt,
    )


def _draw_trajectory(rng):
    kind = rng.integers(0, 3)
    x0 = float(rng.uniform(-1.0, 1.0))
    t0 = float(rng.uniform(-3.0, 3.0))
    if kind == 0:
        return StaticTrajectory(x0=x0, t0=t0)
    if kind == 1:
        return InertialTrajectory(v=float(rng.uniform(-0.8, 0.8)), x0=x0, t0=t0)
    return UniformAccelerationTrajectory(
        acceleration=float(rng.uniform(0.5, 2.0)), x0=x0, t0=t0
    )


def _draw_setup(rng):
    det = DetectorSpec(
        gap=float(rng.uniform(0.3, 3.0)),
        p=float(rng.uniform(0.05, 0.95)),
        coupling=0.02,
    )
    omega = float(rng.uniform(0.3, 3.0))
    mode = ModeSpec(
        omega=omega,
        k=omega * float(rng.choice([-1.0, 1.0])),
        r=float(rng.uniform(0.0, 1.5)),
        theta=float(rng.uniform(0.0, 2.0 * math.pi)),
        beta=float(rng.uniform(0.3, 2.0)),
        length=float(rng.uniform(3.0, 10.0)),
    )
    traj = _draw_trajectory(rng)
    # cosh(a s) controls the phase rate on accelerated worldlines; keep the
    # windowed phase budget small enough for desk-scale quadrature
    s_max = 2.0 * math.pi
    if isinstance(traj, UniformAccelerationTrajectory):
        s_max = min(s_max, 4.0 / traj.acceleration)
    win = InteractionWindow(
        s=float(rng.uniform(0.5, s_max)), quadrature_tol=1e-10
    )
    return det, mode, traj, win


def criterion_06(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    rng = _rng(seed, 6)
    min_sigma = math.inf
    worst_rel = 0.0
    for _ in range(500):
        det, mode, traj, win = _draw_setup(rng)
        rep = perturbative_report(det, [mode], traj, win)
        min_sigma = min(min_sigma, rep.sigma, rep.sigma_direct)
        worst_rel = max(worst_rel, rep.dual_residual_relative)
    dt = time.perf_counter() - start
    passed = min_sigma >= -1e-12 and worst_rel <= 1e-9
    return CriterionResult(
        6,
        "perturbative entropy production: positive, dual-path consistent",
        passed,
        f"min sigma {min_sigma:.2e} (limit -1e-12), max dual-path rel residual "
        f"{worst_rel:.2e} (limit 1e-9) over 500 draws",
        dt,
    )


def criterion_07(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    rng = _rng(seed, 7)
    worst = 0.0
    for i in range(20):
        det, mode, traj, win = _draw_setup(rng)
        if i < 10:
            # force the squeezed, shifted configurations the check is about
            mode = replace(mode, r=max(mode.r, 0.3))
            traj = StaticTrajectory(x0=float(rng.uniform(-1, 1)), t0=1.0 + i * 0.5)
        responses = respond(traj, [mode], det, win)
        factorized = float(sum(delta_p_contributions(det, [mode], responses)))
        brute = delta_p_bruteforce(det, [mode], traj, win)
        rel = abs(factorized - brute) / max(abs(factorized), abs(brute), 1e-15)
        worst = max(worst, rel)
    dt = time.perf_counter() - start
    passed = worst <= 1e-6 and dt < 120.0
    return CriterionResult(
        7,
        "factorized vs brute-force population shift",
        passed,
        f"max relative difference {worst:.2e} over 20 configs (limit 1e-6), {dt:.1f}s",
        dt,
    )


def _scaling_case(r: float, theta: float):
    det = DetectorSpec(gap=1.0, p=0.3, coupling=0.01)
    mode = ModeSpec(omega=1.0, k=1.0, r=r, theta=theta, beta=1.0)
    traj = StaticTrajectory(x0=0.3, t0=0.7)
    win = InteractionWindow(s=2.0, quadrature_tol=1e-12)
    cfg = PropagationConfig(steps=128, step_tol=1e-10, method="cf4")
    return exact_vs_perturbative(
        det, mode, traj, win, [0.01, 0.02, 0.04, 0.08], cfg
    )


def criterion_08(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    thermal = _scaling_case(0.0, 0.0)
    squeezed = _scaling_case(0.5, 1.0)
    dt = time.perf_counter() - start
    ok = (
        3.5 <= thermal.slope <= 4.5
        and 3.5 <= squeezed.slope <= 4.5
        and dt < 300.0
    )
    return CriterionResult(
        8,
        "exact-minus-perturbative residual scales as coupling^4",
        ok,
        f"slope {thermal.slope:.2f} (thermal), {squeezed.slope:.2f} (squeezed); "
        f"window [3.5, 4.5]; {dt:.1f}s",
        dt,
    )


def criterion_09(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    det = DetectorSpec(gap=1.0, p=0.3, coupling=0.08)
    mode = ModeSpec(omega=1.0, k=1.0, r=0.5, theta=1.0, beta=1.0)
    traj = StaticTrajectory(x0=0.3, t0=0.7)
    win = InteractionWindow(s=2.0, quadrature_tol=1e-12)
    cfg = PropagationConfig(steps=128, step_tol=1e-10, method="cf4")
    cutoff = oracle_cutoff(mode, cfg)
    result = exact_population_shift(det, mode, traj, win, cfg, cutoff)
    spec = ReservoirSpec(
        mode.omega * number_operator(cutoff),
        mode.beta,
        squeeze_operator(cutoff, mode.r, mode.theta),
    )
    rho_s = DensityMatrix(np.diag([det.p, 1.0 - det.p]).astype(complex), (2,))
    budget = landauer_budget(rho_s, spec, result.unitary)
    dt = time.perf_counter() - start
    passed = abs(budget.equality_residual) <= 1e-8 and budget.sigma >= -1e-10
    return CriterionResult(
        9,
        "exact final state satisfies the budget identity",
        passed,
        f"|residual| {abs(budget.equality_residual):.2e} (limit 1e-8), "
        f"sigma {budget.sigma:.3e} (limit -1e-10)",
        dt,
    )


def criterion_10(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    det = DetectorSpec(gap=1.0, p=0.3, coupling=0.02)
    win = InteractionWindow(s=2.0, quadrature_tol=1e-12)

    def sigma_at(r: float, t0: float) -> float:
        mode = ModeSpec(omega=1.0, k=1.0, r=r, theta=1.0, beta=1.0)
        traj = StaticTrajectory(x0=0.3, t0=t0)
        return perturbative_report(det, [mode], traj, win).sigma

    # the cross-term phase advances by 2*omega*t0, so the half period
    # pi/(2*omega) realizes the maximal shift and pi/omega returns sigma
    half = math.pi / 2.0
    full = math.pi
    s_sq_0 = sigma_at(0.5, 0.0)
    s_sq_half = sigma_at(0.5, half)
    s_sq_full = sigma_at(0.5, full)
    s_th_0 = sigma_at(0.0, 0.0)
    s_th_half = sigma_at(0.0, half)
    change_sq = abs(s_sq_half - s_sq_0) / abs(s_sq_0)
    period_sq = abs(s_sq_full - s_sq_0) / abs(s_sq_0)
    change_th = abs(s_th_half - s_th_0) / abs(s_th_0)
    dt = time.perf_counter() - start
    passed = change_sq > 1e-6 and change_th <= 1e-10 and period_sq <= 1e-8
    return CriterionResult(
        10,
        "squeezing makes sigma track the absolute window position",
        passed,
        f"half-period shift changes sigma by {change_sq:.2e} with squeezing "
        f"(> 1e-6) and {change_th:.2e} without (<= 1e-10); full period returns "
        f"it to {period_sq:.2e}",
        dt,
    )


def criterion_11(seed: int = DEFAULT_SEED) -> CriterionResult:
    start = time.perf_counter()
    det_base = DetectorSpec(gap=1.0, p=0.3, coupling=0.02)
    x0, t0 = 0.4, 1.1
    traj = StaticTrajectory(x0=x0, t0=t0)
    worst = 0.0
    count = 0
    for gap in (0.5, 1.0, 1.7, 2.3):
        for omega, s in ((0.6, 1.3), (1.0, math.pi), (1.9, 2.4), (2.8, 0.9), (gap, 2.0)):
            det = replace(det_base, gap=gap)
            mode = ModeSpec(omega=omega, k=omega, r=0.2, theta=0.4, beta=1.0)
            win = InteractionWindow(s=s, quadrature_tol=1e-12)
            resp = respond(traj, [mode], det, win)[0]
            ip, im = static_response_closed_form(mode, det, win, x0, t0)
            worst = max(worst, abs(resp.iplus - ip), abs(resp.iminus - im))
            count += 1
    dt = time.perf_counter() - start
    return CriterionResult(
        11,
        "static response integrals match the closed-form antiderivative",
        worst <= 1e-10,
        f"max |quadrature - closed form| {worst:.2e} over {count} combinations "
        f"(limit 1e-10)",
        dt,
    )


CRITERIA = [
    criterion_01,
    criterion_02,
    criterion_03,
    criterion_04,
    criterion_05,
    criterion_06,
    criterion_07,
    criterion_08,
    criterion_09,
    criterion_10,
    criterion_11,
]


def run_all(seed: int = DEFAULT_SEED, numbers=None) -> list[CriterionResult]:
    results = []
    for crit in CRITERIA:
        res = crit(seed)
        if numbers is None or res.number in numbers:
            results.append(res)
    return results
