import math

import numpy as np
import pytest

from sqlandauer.trajectories import (
    InertialTrajectory,
    SampledTrajectory,
    StaticTrajectory,
    UniformAccelerationTrajectory,
    trajectory_eval,
)


def test_static_offsets():
    t, x = trajectory_eval(StaticTrajectory(x0=1.5, t0=0.0), 2.0)
    assert t == 2.0 and x == 1.5


def test_inertial_lorentz_factors():
    traj = InertialTrajectory(v=0.6, x0=0.0, t0=0.0)
    t, x = traj.coords(1.0)
    assert abs(t - 1.25) < 1e-14
    assert abs(x - 0.75) < 1e-14


def test_inertial_rejects_superluminal():
    with pytest.raises(ValueError):
        InertialTrajectory(v=1.0)


def test_accelerated_at_origin_of_proper_time():
    traj = UniformAccelerationTrajectory(acceleration=1.0)
    t, x = traj.coords(0.0)
    assert t == 0.0 and x == 1.0


def test_accelerated_hyperbola_invariant():
    a = 0.7
    traj = UniformAccelerationTrajectory(acceleration=a)
    tau = np.linspace(-1.0, 2.0, 7)
    t, x = traj.coords(tau)
    assert np.max(np.abs(x**2 - t**2 - 1.0 / a**2)) < 1e-12


def test_vectorized_evaluation_shapes():
    tau = np.linspace(0.0, 1.0, 11)
    for traj in (
        StaticTrajectory(x0=0.2, t0=0.1),
        InertialTrajectory(v=0.3),
        UniformAccelerationTrajectory(acceleration=1.2),
    ):
        t, x = traj.coords(tau)
        assert t.shape == tau.shape and x.shape == tau.shape
        assert np.all(np.diff(t) > 0)


def test_sampled_matches_parametric_source():
    src = UniformAccelerationTrajectory(acceleration=1.0)
    grid = np.linspace(-0.2, 2.2, 400)
    t, x = src.coords(grid)
    sampled = SampledTrajectory(grid, t, x)
    probe = np.linspace(0.0, 2.0, 37)
    ts, xs = sampled.coords(probe)
    tp, xp = src.coords(probe)
    assert np.max(np.abs(ts - tp)) < 1e-8
    assert np.max(np.abs(xs - xp)) < 1e-8


def test_sampled_out_of_domain():
    grid = np.linspace(0.0, 1.0, 10)
    sampled = SampledTrajectory(grid, grid.copy(), np.zeros_like(grid))
    with pytest.raises(ValueError):
        sampled.coords(1.5)


def test_sampled_monotonicity_enforced():
    grid = np.linspace(0.0, 1.0, 10)
    with pytest.raises(ValueError):
        SampledTrajectory(grid, np.zeros_like(grid), grid.copy())
    bad = grid.copy()
    bad[4] = bad[3]
    with pytest.raises(ValueError):
        SampledTrajectory(bad, grid.copy(), np.zeros_like(grid))


def test_sampled_from_table(tmp_path):
    src = InertialTrajectory(v=0.4, x0=0.1, t0=0.0)
    grid = np.linspace(-0.5, 3.5, 200)
    t, x = src.coords(grid)
    table = tmp_path / "worldline.dat"
    lines = ["# tau t x"]
    lines += [f"{a} {b} {c}" for a, b, c in zip(grid, t, x)]
    table.write_text("\n".join(lines) + "\n")
    sampled = SampledTrajectory.from_table(table)
    probe = np.linspace(0.0, 3.0, 17)
    ts, xs = sampled.coords(probe)
    tp, xp = src.coords(probe)
    assert np.max(np.abs(ts - tp)) < 1e-9
    assert np.max(np.abs(xs - xp)) < 1e-9


def test_table_rejects_malformed_rows(tmp_path):
    table = tmp_path / "bad.dat"
    table.write_text("0.0 0.0\n")
    with pytest.raises(ValueError):
        SampledTrajectory.from_table(table)
