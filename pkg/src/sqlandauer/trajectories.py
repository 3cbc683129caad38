"""Detector worldlines tau -> (t(tau), x(tau)) in 1+1 dimensions, c = 1.

All trajectories evaluate vectorized over numpy arrays of proper time.
Coordinate time must be strictly increasing along every worldline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline


@dataclass(frozen=True)
class StaticTrajectory:
    """Detector at rest at x0; proper time equals coordinate time + offset."""

    x0: float = 0.0
    t0: float = 0.0
    kind: str = field(default="static", init=False)

    def coords(self, tau):
        tau = np.asarray(tau, dtype=float)
        return tau + self.t0, np.broadcast_to(np.float64(self.x0), tau.shape).copy()


@dataclass(frozen=True)
class InertialTrajectory:
    """Constant-velocity worldline, t = t0 + gamma tau, x = x0 + gamma v tau."""

    v: float
    x0: float = 0.0
    t0: float = 0.0
    kind: str = field(default="inertial", init=False)

    def __post_init__(self):
        if abs(self.v) >= 1.0:
            raise ValueError("inertial velocity must satisfy |v| < 1")

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.v**2)

    def coords(self, tau):
        tau = np.asarray(tau, dtype=float)
        return self.t0 + self.gamma * tau, self.x0 + self.gamma * self.v * tau


@dataclass(frozen=True)
class UniformAccelerationTrajectory:
    """Rindler worldline t = t0 + sinh(a tau)/a, x = x0 + cosh(a tau)/a."""

    acceleration: float
    x0: float = 0.0
    t0: float = 0.0
    kind: str = field(default="uniformly_accelerated", init=False)

    def __post_init__(self):
        if self.acceleration <= 0:
            raise ValueError("acceleration must be positive")

    def coords(self, tau):
        tau = np.asarray(tau, dtype=float)
        a = self.acceleration
        return self.t0 + np.sinh(a * tau) / a, self.x0 + np.cosh(a * tau) / a


@dataclass(frozen=True, eq=False)
class SampledTrajectory:
    """Worldline given on a proper-time grid, cubic interpolation in between.

    Evaluation outside the sampled range raises ValueError: cubic
    extrapolation of a worldline is not meaningful.
    """

    tau: np.ndarray
    t: np.ndarray
    x: np.ndarray
    source: str = ""
    kind: str = field(default="sampled", init=False)

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float)
        t = np.asarray(self.t, dtype=float)
        x = np.asarray(self.x, dtype=float)
        if tau.ndim != 1 or tau.shape != t.shape or tau.shape != x.shape:
            raise ValueError("tau, t, x must be equal-length 1-d arrays")
        if tau.size < 4:
            raise ValueError("need at least 4 samples for cubic interpolation")
        if np.any(np.diff(tau) <= 0):
            raise ValueError("proper-time grid must be strictly increasing")
        if np.any(np.diff(t) <= 0):
            raise ValueError("coordinate time must be strictly increasing")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "_t_spline", CubicSpline(tau, t))
        object.__setattr__(self, "_x_spline", CubicSpline(tau, x))

    @classmethod
    def from_table(cls, path) -> "SampledTrajectory":
        """Load a plain numeric table with one 'tau t x' triple per line.

        Blank lines and '#' comments are ignored.
        """
        rows = []
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 3:
                    raise ValueError(
                        f"{path}:{lineno}: expected 'tau t x', got {len(parts)} fields"
                    )
                rows.append([float(v) for v in parts])
        data = np.asarray(rows, dtype=float)
        if data.size == 0:
            raise ValueError(f"{path}: no samples found")
        return cls(data[:, 0], data[:, 1], data[:, 2], source=str(path))

    def coords(self, tau):
        tau = np.asarray(tau, dtype=float)
        lo, hi = self.tau[0], self.tau[-1]
        if np.any(tau < lo - 1e-12) or np.any(tau > hi + 1e-12):
            raise ValueError(
                f"proper time outside the sampled range [{lo:g}, {hi:g}]"
            )
        return self._t_spline(tau), self._x_spline(tau)


Trajectory = (
    StaticTrajectory
    | InertialTrajectory
    | UniformAccelerationTrajectory
    | SampledTrajectory
)


def trajectory_eval(traj, tau):
    """Evaluate a worldline: returns the pair (t, x) at proper time tau."""
    return traj.coords(tau)
