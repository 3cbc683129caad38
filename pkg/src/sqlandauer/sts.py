"""Analytic second moments of squeezed thermal modes and the coefficient
algebra behind the non-negative entropy-production quadratic form.

The key identity is 4AB - C^2 = 4*A_min*B_min, which reduces positivity of
the full quadratic form to positivity of the two thermal-limit coefficients
A_min, B_min. Computing (A, B, C) from (A_min, B_min, r) keeps the identity
exact by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def bose_einstein(beta: float, omega: float) -> float:
    """Mean thermal occupation 1/(exp(beta*omega) - 1)."""
    if beta * omega <= 0:
        raise ValueError("beta*omega must be positive")
    return 1.0 / math.expm1(beta * omega)


@dataclass(frozen=True)
class ModeSpec:
    """One discrete field mode on a periodic box of length ``length``.

    Mode functions are plane waves u(x) = exp(i k x) / sqrt(2 omega length)
    for a 1+1-dimensional massless scalar; the mean thermal occupation is
    derived from (beta, omega), so it is always consistent with them.
    """

    omega: float
    k: float
    r: float = 0.0
    theta: float = 0.0
    beta: float = 1.0
    length: float = 2.0 * math.pi
    normalization: str = "box_periodic"

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("mode frequency must be positive")
        if self.beta <= 0:
            raise ValueError("inverse temperature must be positive")
        if self.r < 0:
            raise ValueError("squeeze strength must be non-negative")
        if self.length <= 0:
            raise ValueError("quantization length must be positive")
        if self.normalization != "box_periodic":
            raise ValueError(f"unknown normalization {self.normalization!r}")

    @property
    def n_bar(self) -> float:
        return bose_einstein(self.beta, self.omega)

    @classmethod
    def box_mode(
        cls,
        j: int,
        length: float,
        r: float = 0.0,
        theta: float = 0.0,
        beta: float = 1.0,
    ) -> "ModeSpec":
        """Mode number j of the box, k = 2 pi j / length, omega = |k|."""
        if j == 0:
            raise ValueError("the zero mode has no positive frequency")
        k = 2.0 * math.pi * j / length
        return cls(omega=abs(k), k=k, r=r, theta=theta, beta=beta, length=length)


@dataclass(frozen=True)
class Moments:
    """Second moments <a a>, <a_dag a> of a zero-mean Gaussian mode state."""

    aa: complex
    ada: float

    def __post_init__(self):
        if self.ada < 0:
            raise ValueError("<a_dag a> must be non-negative")
        if abs(self.aa) > self.ada + 0.5 + 1e-9:
            raise ValueError(
                f"moments unphysical: |<aa>|={abs(self.aa):.6g} exceeds "
                f"<a_dag a> + 1/2 = {self.ada + 0.5:.6g}"
            )

    @property
    def aad(self) -> float:
        return self.ada + 1.0


def sts_moments(mode: ModeSpec) -> Moments:
    """Analytic moments of the squeezed thermal state of one mode."""
    nb = mode.n_bar
    aa = -0.5 * (2.0 * nb + 1.0) * math.sinh(2.0 * mode.r) * np.exp(1j * mode.theta)
    ada = nb * math.cosh(2.0 * mode.r) + math.sinh(mode.r) ** 2
    return Moments(complex(aa), float(ada))


def min_coefficients(
    n_bar: float, p: float, beta: float, omega: float
) -> tuple[float, float]:
    """Thermal-limit (r = 0) entropy-production coefficients.

    Both are non-negative whenever n_bar is the Bose-Einstein occupation of
    (beta, omega), because the two bracket factors of each coefficient then
    share their root in p.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("population p must lie strictly between 0 and 1")
    log_ratio = math.log((1.0 - p) / p)
    bw = beta * omega
    a_min = ((n_bar + 1.0) * p - n_bar * (1.0 - p)) * (bw - log_ratio)
    b_min = ((n_bar + 1.0) * (1.0 - p) - n_bar * p) * (bw + log_ratio)
    return a_min, b_min


@dataclass(frozen=True)
class Coefficients:
    """Quadratic-form coefficients for the per-mode entropy production."""

    A: float
    B: float
    C: float
    A_min: float
    B_min: float

    def __post_init__(self):
        if self.A < self.A_min - 1e-12 or self.B < self.B_min - 1e-12:
            raise ValueError("coefficients below their thermal-limit minima")


def sts_coefficients(a_min: float, b_min: float, r: float) -> Coefficients:
    if r < 0:
        raise ValueError("squeeze strength must be non-negative")
    sh2 = math.sinh(r) ** 2
    total = a_min + b_min
    a = sh2 * total + a_min
    b = sh2 * total + b_min
    c = 2.0 * math.sqrt(sh2 * (1.0 + sh2)) * total
    return Coefficients(a, b, c, a_min, b_min)


def positivity_certificate(c: Coefficients) -> float:
    """Residual of 4AB - C^2 = 4*A_min*B_min; zero up to rounding."""
    return (4.0 * c.A * c.B - c.C**2) - 4.0 * c.A_min * c.B_min
