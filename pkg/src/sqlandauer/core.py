"""Truncated-Fock operator algebra, Gaussian reservoir states, entropies.

Everything downstream works on explicit complex matrices: ladder operators
on a finite Fock ladder, squeeze / thermal / squeezed-thermal states with a
controlled truncation deficit, tensor-product bookkeeping, partial traces,
and the entropy functionals (von Neumann, relative entropy, mutual
information). Entropies are in nats; hbar = c = k_B = 1 throughout.

The squeeze unitary is built by exponentiating the *truncated* generator,
so it is exactly unitary on the truncated space. Identities that rely only
on unitarity (conjugated Gibbs states, spectrum preservation) therefore
hold to machine precision at any cutoff; the cutoff only controls how well
truncated moments approximate the infinite ladder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
PSD_TOL = 1e-12
TRACE_TOL = 1e-10
UNITARITY_TOL = 1e-10
LOG_FLOOR = 1e-14


class CutoffError(Exception):
    """The truncated Fock ladder is too short for the requested state."""


class SupportError(Exception):
    """A state has weight outside the (clamped) support of the reference."""


@dataclass(frozen=True)
class FockCutoff:
    """Truncated Fock ladder keeping the levels |0> .. |n_max - 1>."""

    n_max: int
    trace_deficit_tol: float = 1e-8

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError("n_max must be at least 2")
        if self.trace_deficit_tol <= 0:
            raise ValueError("trace_deficit_tol must be positive")

    @property
    def dim(self) -> int:
        return self.n_max


def tail_decay_base(n_bar: float, r: float) -> float:
    """Asymptotic per-level decay q of the number distribution, P(n) ~ q^n.

    Governed by the widest quadrature variance (2 n_bar + 1) e^{2r}; for
    r = 0 this reduces to the thermal e^{-beta omega}.
    """
    wide = (2.0 * n_bar + 1.0) * math.exp(2.0 * r)
    return (wide - 1.0) / (wide + 1.0)


def auto_cutoff(n_bar: float, r: float, trace_deficit_tol: float = 1e-8) -> FockCutoff:
    """Cutoff covering the number-distribution tail of a squeezed thermal mode.

    A mean-plus-ten-widths estimate (m = n_bar*cosh(2r) + sinh(r)^2, width
    sqrt(m(m+1))) is combined with the exponential tail model: the geometric
    bound q^n / (1 - q) on the mass above the cutoff must sit below the
    deficit tolerance. The second condition dominates once squeezing makes
    the tail decay slowly.
    """
    m = n_bar * math.cosh(2.0 * r) + math.sinh(r) ** 2
    n_width = math.ceil(m + 10.0 * math.sqrt(m * (m + 1.0)) + 20.0)
    q = tail_decay_base(n_bar, r)
    n_tail = math.ceil(math.log(trace_deficit_tol * (1.0 - q)) / math.log(q))
    return FockCutoff(max(n_width, n_tail, 2), trace_deficit_tol)


def ladder_operators(cutoff: FockCutoff) -> tuple[np.ndarray, np.ndarray]:
    """Return (a, a_dag) on the truncated space, with a|n> = sqrt(n)|n-1>."""
    d = cutoff.dim
    a = np.zeros((d, d), dtype=complex)
    idx = np.arange(1, d)
    a[idx - 1, idx] = np.sqrt(idx)
    return a, a.conj().T


def number_operator(cutoff: FockCutoff) -> np.ndarray:
    return np.diag(np.arange(cutoff.dim, dtype=float)).astype(complex)


def squeeze_operator(cutoff: FockCutoff, r: float, theta: float) -> np.ndarray:
    """Squeeze unitary exp(xi* a^2 / 2 - xi a_dag^2 / 2), xi = r e^{i theta}.

    The generator is truncated first and then exponentiated, so the result
    is unitary on the truncated space by construction.
    """
    if r < 0:
        raise ValueError("squeeze strength r must be non-negative")
    a, ad = ladder_operators(cutoff)
    xi = r * np.exp(1j * theta)
    gen = 0.5 * np.conj(xi) * (a @ a) - 0.5 * xi * (ad @ ad)
    # exponentiate through the Hermitian i*gen so unitarity is structural
    w, v = np.linalg.eigh(1j * gen)
    s = (v * np.exp(-1j * w)) @ v.conj().T
    residual = np.max(np.abs(s.conj().T @ s - np.eye(cutoff.dim)))
    if residual > UNITARITY_TOL:
        raise CutoffError(
            f"squeeze operator lost unitarity (residual {residual:.2e}) at "
            f"n_max={cutoff.n_max}; increase the cutoff for r={r}"
        )
    return s


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix on a labelled tensor-product space.

    ``space`` lists the subsystem dimensions whose product equals the matrix
    dimension.  ``deficit`` records how much probability the construction
    truncated away (0 for states that are exact on their space).
    """

    matrix: np.ndarray
    space: tuple[int, ...]
    deficit: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "space", tuple(int(d) for d in self.space))
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be a square 2-d array")
        if int(np.prod(self.space)) != m.shape[0]:
            raise ValueError(
                f"subsystem dimensions {self.space} do not compose to {m.shape[0]}"
            )
        if not np.all(np.isfinite(m)):
            raise ValueError("density matrix has non-finite entries")
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > HERMITICITY_TOL:
            raise ValueError(f"density matrix not Hermitian (residual {herm:.2e})")
        tr = float(m.trace().real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr!r} is not 1")
        lowest = float(np.linalg.eigvalsh(m)[0])
        if lowest < -PSD_TOL:
            raise ValueError(f"density matrix has eigenvalue {lowest:.2e} < 0")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(np.kron(a.matrix, b.matrix), a.space + b.space)


def thermal_state(cutoff: FockCutoff, beta: float, omega: float) -> DensityMatrix:
    """Truncated Gibbs state of a single mode, renormalized after truncation.

    The relative tail weight exp(-beta*omega*dim) is recorded as the deficit;
    exceeding the cutoff tolerance raises CutoffError.
    """
    if beta * omega <= 0:
        raise ValueError("beta*omega must be positive")
    d = cutoff.dim
    weights = np.exp(-beta * omega * np.arange(d))
    deficit = math.exp(-beta * omega * d)
    if deficit > cutoff.trace_deficit_tol:
        raise CutoffError(
            f"thermal tail {deficit:.2e} exceeds deficit tolerance "
            f"{cutoff.trace_deficit_tol:g} at n_max={cutoff.n_max}"
        )
    rho = np.diag(weights / weights.sum()).astype(complex)
    return DensityMatrix(rho, (d,), deficit=deficit)


def squeezed_thermal_state(
    cutoff: FockCutoff, beta: float, omega: float, r: float, theta: float
) -> DensityMatrix:
    """S rho_th S_dag on the truncated space.

    The top-level population of the squeezed state is used as the realized
    truncation deficit (squeezing is unitary, so the trace itself is exact).
    """
    rho_th = thermal_state(cutoff, beta, omega)
    s = squeeze_operator(cutoff, r, theta)
    m = s @ rho_th.matrix @ s.conj().T
    m = 0.5 * (m + m.conj().T)
    top = float(m[-1, -1].real)
    if top > cutoff.trace_deficit_tol:
        raise CutoffError(
            f"squeezed thermal state puts {top:.2e} on the top Fock level at "
            f"n_max={cutoff.n_max}; increase the cutoff"
        )
    return DensityMatrix(m, (cutoff.dim,), deficit=top)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the kept tensor factors (original factor order)."""
    dims = list(rho.space)
    n = len(dims)
    if n < 2:
        raise ValueError("partial trace needs at least two tensor factors")
    keep = sorted({int(i) for i in keep})
    if not keep or len(keep) >= n:
        raise ValueError("keep must be a nonempty proper subset of factors")
    if keep[0] < 0 or keep[-1] >= n:
        raise IndexError(f"subsystem index out of range for {n} factors")
    t = rho.matrix.reshape(dims + dims)
    cur = list(dims)
    # trace the highest dropped axis first so lower indices stay valid
    for i in [i for i in range(n) if i not in keep][::-1]:
        t = np.trace(t, axis1=i, axis2=i + len(cur))
        cur.pop(i)
    d = int(np.prod(cur))
    return DensityMatrix(t.reshape(d, d), tuple(cur))


def von_neumann_entropy(rho) -> float:
    """-sum(lam ln lam) over the spectrum, with 0 ln 0 = 0 (nats)."""
    vals = np.linalg.eigvalsh(_matrix(rho))
    vals = vals[vals > LOG_FLOOR]
    if vals.size == 0:
        return 0.0
    return float(-np.sum(vals * np.log(vals)))


@dataclass(frozen=True)
class ClampInfo:
    """Diagnostics for eigenvalue clamping inside relative_entropy."""

    clamped_count: int
    clamped_weight: float
    shift_bound: float


def relative_entropy_with_diagnostics(
    rho, sigma, floor: float = LOG_FLOOR
) -> tuple[float, ClampInfo]:
    """Tr rho (ln rho - ln sigma) with sigma eigenvalues floored at ``floor``.

    Raises SupportError when rho carries more than 1e-10 weight on clamped
    directions of sigma, naming the offending eigenvalue.
    """
    p = _matrix(rho)
    s = _matrix(sigma)
    if p.shape != s.shape:
        raise ValueError("states must share a dimension")
    lam = np.linalg.eigvalsh(p)
    mu, w = np.linalg.eigh(s)
    clamped = mu < floor
    mu_c = np.maximum(mu, floor)
    norm = mu_c.sum()
    mu_c = mu_c / norm
    # weight of rho along each eigendirection of sigma
    weights = np.real(np.einsum("ij,jk,ki->i", w.conj().T, p, w))
    weights = np.maximum(weights, 0.0)
    w_clamped = float(weights[clamped].sum()) if clamped.any() else 0.0
    if w_clamped > 1e-10:
        j = int(np.argmax(np.where(clamped, weights, -1.0)))
        raise SupportError(
            f"first state has weight {w_clamped:.3e} on direction {j} where the "
            f"reference eigenvalue {mu[j]:.3e} sits below the clamping floor {floor:g}"
        )
    lam_pos = lam[lam > floor]
    ent = float(np.sum(lam_pos * np.log(lam_pos))) if lam_pos.size else 0.0
    cross = float(weights @ np.log(mu_c))
    shift = w_clamped * abs(math.log(floor)) + abs(math.log(norm))
    info = ClampInfo(int(clamped.sum()), w_clamped, shift)
    return ent - cross, info


def relative_entropy(rho, sigma, floor: float = LOG_FLOOR) -> float:
    value, _ = relative_entropy_with_diagnostics(rho, sigma, floor)
    return value


def mutual_information(rho: DensityMatrix) -> float:
    """S(A) + S(B) - S(AB) for a bipartite state."""
    if len(rho.space) != 2:
        raise ValueError("mutual information needs a bipartite space")
    sa = von_neumann_entropy(partial_trace(rho, [0]))
    sb = von_neumann_entropy(partial_trace(rho, [1]))
    return sa + sb - von_neumann_entropy(rho)


def is_unitary(m: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))) <= tol


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density_matrix(
    dim: int, rng: np.random.Generator, rank: int | None = None
) -> DensityMatrix:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    m = m / m.trace().real
    return DensityMatrix(0.5 * (m + m.conj().T), (dim,))
