"""Adaptive quadrature for smooth oscillatory complex integrands.

Adaptive Simpson with Richardson extrapolation: each panel is accepted when
the embedded error estimate |S_fine - S_coarse|/15 meets its share of the
absolute tolerance, which is halved at every split so the accumulated
estimate stays below the requested tolerance.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


class QuadratureError(Exception):
    """Quadrature failed to converge within the subdivision budget."""


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-9, max_depth: int = 48):
    """Integrate a complex-valued f over [a, b] to absolute tolerance tol.

    Returns (value, error_estimate, n_evals). Raises QuadratureError when a
    panel still misses its local tolerance at the maximum recursion depth.
    """
    if b == a:
        return 0.0 + 0.0j, 0.0, 0
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    counter = [0]

    def ev(x):
        counter[0] += 1
        return complex(f(x))

    def rec(x0, x2, f0, f1, f2, whole, tol_local, depth):
        x1 = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + x1)
        xr = 0.5 * (x1 + x2)
        fl = ev(xl)
        fr = ev(xr)
        h = x2 - x0
        left = h / 12.0 * (f0 + 4.0 * fl + f1)
        right = h / 12.0 * (f1 + 4.0 * fr + f2)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol_local:
            return left + right + delta / 15.0, abs(delta) / 15.0
        if depth >= max_depth:
            raise QuadratureError(
                f"panel [{x0:g}, {x2:g}] still at estimate {abs(delta) / 15.0:.2e} "
                f"(> {tol_local:.2e}) after {max_depth} subdivisions"
            )
        lv, le = rec(x0, x1, f0, fl, f1, left, tol_local / 2.0, depth + 1)
        rv, re = rec(x1, x2, f1, fr, f2, right, tol_local / 2.0, depth + 1)
        return lv + rv, le + re

    fa = ev(a)
    fm = ev(0.5 * (a + b))
    fb = ev(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    value, err = rec(a, b, fa, fm, fb, whole, tol, 0)
    return value, err, counter[0]


@lru_cache(maxsize=32)
def gauss_legendre_nodes(n: int, a: float, b: float):
    """Gauss-Legendre nodes and weights mapped to [a, b] (cached)."""
    x, w = np.polynomial.legendre.leggauss(n)
    nodes = 0.5 * (b - a) * x + 0.5 * (a + b)
    weights = 0.5 * (b - a) * w
    return nodes, weights
