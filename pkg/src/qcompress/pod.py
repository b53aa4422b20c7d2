"""Optimal linear model reduction of state trajectories.

The covariance of a unit-norm trajectory is normalized to trace one, so
singular-value tail sums are directly the relative quantities plotted in
the error curves.  Reduction bases come from the Hermitian eigendecomposition
of the covariance (negative roundoff eigenvalues clamped at zero), and all
reported errors are root-mean-square values, i.e. square roots of the
quadratic functionals.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ValidationError
from .hamiltonians import HamiltonianModel, fix_phases
from .dynamics import Trajectory

DEGENERACY_TOL = 1e-12
HIST_FLOOR = 1e-300


@dataclass
class CovarianceMatrix:
    """Hermitian PSD time-average of psi_t psi_t^dag, trace-normalized."""

    matrix: np.ndarray
    origin: str = ""

    def __post_init__(self):
        C = np.asarray(self.matrix, dtype=complex)
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise ValidationError(f"covariance must be square, got {C.shape}")
        scale = np.max(np.abs(C)) or 1.0
        skew = np.max(np.abs(C - C.conj().T))
        if skew > 1e-12 * scale:
            raise ValidationError(f"covariance is not Hermitian: max asymmetry {skew:.3e}")
        self.matrix = C

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def covariance_from_snapshot(traj: Trajectory) -> CovarianceMatrix:
    """C = Psi Psi^dag / K; trace 1 for unit-norm snapshot columns."""
    K = traj.num_samples
    if K < 1:
        raise ValidationError("need at least one snapshot column")
    C = traj.states @ traj.states.conj().T / K
    return CovarianceMatrix((C + C.conj().T) / 2, origin=f"snapshot:K={K}")


@dataclass
class PodModel:
    """Rank-m orthonormal basis minimizing the time-averaged state error."""

    basis: np.ndarray  # n x m, orthonormal columns
    singular_values: np.ndarray  # length n, descending
    m: int
    degenerate: bool = False  # sigma_m == sigma_{m+1} within tolerance; basis non-unique

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @cached_property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def project(self, states: np.ndarray) -> np.ndarray:
        """Apply the rank-m projector without forming it."""
        return self.basis @ (self.basis.conj().T @ states)

    def tail_error(self) -> float:
        """Minimal quadratic state error: sum of the trailing n-m singular values."""
        return float(np.sum(self.singular_values[self.m :]))


def pod_fit(C: CovarianceMatrix, m: int) -> PodModel:
    """Top-m singular vectors of the covariance as the reduction basis."""
    n = C.n
    if not 1 <= m <= n:
        raise ValidationError(f"compression m={m} outside [1, {n}]")
    w, U = np.linalg.eigh(C.matrix)
    sigma = np.clip(w[::-1], 0.0, None)
    U = U[:, ::-1]
    degenerate = m < n and (sigma[m - 1] - sigma[m]) <= DEGENERACY_TOL
    basis = fix_phases(U[:, :m])
    return PodModel(basis, sigma, m, degenerate)


def state_error_rms(model: PodModel, traj: Trajectory) -> float:
    """RMS over samples of the orthogonal residual ||psi - Gamma psi||."""
    resid = traj.states - model.project(traj.states)
    return float(np.sqrt(np.mean(np.sum(np.abs(resid) ** 2, axis=0))))


def equation_error_rms(model: PodModel, H: HamiltonianModel, traj: Trajectory) -> float:
    """RMS over samples of the commutator residual ||(H Gamma - Gamma H) psi||."""
    if H.n != model.n or H.n != traj.n:
        raise ValidationError("dimension mismatch between model, Hamiltonian, trajectory")
    Hpsi = H.matrix @ traj.states
    resid = H.matrix @ model.project(traj.states) - model.project(Hpsi)
    return float(np.sqrt(np.mean(np.sum(np.abs(resid) ** 2, axis=0))))


def singular_value_error_curve(sigma) -> np.ndarray:
    """Relative cumulative tail eps_m = 1 - sum_{i<=m} sigma_i / sum sigma_i, m = 1..n."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 1 or sigma.size == 0:
        raise ValidationError("sigma must be a non-empty vector")
    if np.max(sigma) <= 0:
        raise ValidationError("sigma must contain a positive entry")
    csum = np.cumsum(sigma)
    return np.clip(1.0 - csum / csum[-1], 0.0, None)


def compression_level(eps, threshold: float) -> int:
    """Smallest 1-based m with eps_m <= threshold, or -1 if never reached."""
    eps = np.asarray(eps, dtype=float)
    hits = np.nonzero(eps <= threshold)[0]
    return int(hits[0]) + 1 if hits.size else -1


@dataclass
class Histogram:
    """log10-magnitude histogram: counts[i] covers [edges[i], edges[i+1])."""

    edges: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(np.sum(self.counts))


def log_abs_histogram(values: np.ndarray, bins: int, value_range=None) -> Histogram:
    """Histogram of log10 |values| with magnitudes below 1e-300 clamped."""
    if bins < 2:
        raise ValidationError("bins must be at least 2")
    logs = np.log10(np.maximum(np.abs(np.asarray(values)).ravel(), HIST_FLOOR))
    counts, edges = np.histogram(logs, bins=bins, range=value_range)
    return Histogram(edges, counts)


def error_histogram(model: PodModel, C: CovarianceMatrix, bins: int, value_range=None) -> Histogram:
    """Histogram of log10 |entries| of the state-error matrix (I - Gamma) C."""
    X = C.matrix - model.project(C.matrix)
    return log_abs_histogram(X, bins, value_range)
