"""Per-column reduction of unitary dynamics and its aggregate Frobenius error.

Each column of the propagator evolves under the same Hamiltonian from a
basis vector, so its eigenbasis covariance is diag(alpha_nu) S diag(alpha_nu)^dag
with one shared sinc matrix S and alpha_nu the conjugated nu-th row of V.
The aggregate error at compression m is the sum of all per-column tail sums,
and the linear-sweep sinc spectrum gives the n * eps_m(S_lin) upper estimate.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError, ValidationError
from .hamiltonians import HamiltonianModel
from .pod import CovarianceMatrix, PodModel, pod_fit, singular_value_error_curve
from .spectral import linear_sweep_sinc, sinc, time_bandwidth, _descending_eigvals

FULL_SWEEP_DIM_CAP = 256


@dataclass
class UnitaryPodModel:
    """Shared-compression reduction of every propagator column.

    Per-column covariances, bases, and projectors are reconstructed on demand
    from the stored eigensystem and the single shared sinc matrix; only the
    per-column singular values (rows of `sigma`) are kept in memory.
    """

    V: np.ndarray
    omega: np.ndarray
    T: float
    m: int
    sinc_matrix: np.ndarray
    sigma: np.ndarray  # (n, n): row nu holds descending singular values of column nu

    @property
    def n(self) -> int:
        return self.V.shape[0]

    def alpha(self, nu: int) -> np.ndarray:
        """Eigenbasis coefficients of basis vector nu: conj of row nu of V."""
        return self.V[nu, :].conj()

    def _eigen_covariance(self, nu: int) -> np.ndarray:
        a = self.alpha(nu)
        R = (a[:, None] * a.conj()[None, :]) * self.sinc_matrix
        return (R + R.conj().T) / 2

    def covariance(self, nu: int) -> CovarianceMatrix:
        """Time-averaged covariance of column nu in the computational basis."""
        D = np.exp(-1j * self.omega * self.T / 2)
        F = (D[:, None] * self._eigen_covariance(nu)) * D.conj()[None, :]
        C = self.V @ F @ self.V.conj().T
        return CovarianceMatrix((C + C.conj().T) / 2, origin=f"unitary-column:{nu}")

    def column_model(self, nu: int) -> PodModel:
        """Rank-m reduction of column nu (exact reuse of the state-case fit)."""
        return pod_fit(self.covariance(nu), self.m)

    def error(self, m: int | None = None) -> float:
        """Aggregate Frobenius-norm error: sum over columns of the sigma tails."""
        m = self.m if m is None else m
        if not 0 <= m <= self.n:
            raise ValidationError(f"compression m={m} outside [0, {self.n}]")
        return float(np.sum(self.sigma[:, m:]))

    def error_curve(self) -> np.ndarray:
        """Aggregate error at every compression level m = 1..n."""
        tails = np.cumsum(self.sigma[:, ::-1], axis=1)[:, ::-1]
        curve = np.zeros(self.n)
        curve[: self.n - 1] = np.sum(tails[:, 1:], axis=0)
        return np.clip(curve, 0.0, None)


def unitary_pod(
    H: HamiltonianModel,
    T: float,
    m: int,
    max_dim: int = FULL_SWEEP_DIM_CAP,
    allow_large: bool = False,
) -> UnitaryPodModel:
    """Reduce all n columns of the propagator at shared compression m.

    Costs n Hermitian eigendecompositions of n x n matrices; dimensions above
    `max_dim` are refused unless `allow_large` is set.
    """
    n = H.n
    if not 1 <= m <= n:
        raise ValidationError(f"compression m={m} outside [1, {n}]")
    if T < 0:
        raise ValidationError("T must be non-negative")
    if n > max_dim and not allow_large:
        raise ResourceLimitError(
            f"per-column sweep at n={n} exceeds cap {max_dim}; pass allow_large=True"
        )
    w = H.omega
    V = H.V
    Lam = (w[:, None] - w[None, :]) * (T / 2)
    S = sinc(Lam)
    sigma = np.empty((n, n))
    for nu in range(n):
        a = V[nu, :].conj()
        R = (a[:, None] * a.conj()[None, :]) * S
        sigma[nu] = _descending_eigvals((R + R.conj().T) / 2)
    return UnitaryPodModel(V=V, omega=w, T=T, m=m, sinc_matrix=S, sigma=sigma)


def unitary_error_bound(H: HamiltonianModel, T: float, m: int) -> float:
    """Linear-sweep estimate n * eps_m(S_lin) at the Hamiltonian's (n, Delta)."""
    return float(unitary_error_bound_curve(H, T)[m - 1])


def unitary_error_bound_curve(H: HamiltonianModel, T: float) -> np.ndarray:
    """The bound at every compression level m = 1..n."""
    tbw = time_bandwidth(H, T)
    sig = _descending_eigvals(linear_sweep_sinc(H.n, tbw.delta))
    return H.n * singular_value_error_curve(sig)


def frobenius_error_quadrature(model: UnitaryPodModel, K: int) -> float:
    """Trapezoidal time average of ||X_t - U_t||_F^2 on a K-point grid.

    Independent check of `UnitaryPodModel.error`: propagates every basis
    column exactly and accumulates the projector residuals in time.
    """
    if K < 2:
        raise ValidationError("K must be at least 2")
    n = model.n
    times = np.linspace(0.0, model.T, K)
    phases = np.exp(-1j * np.outer(times, model.omega))  # K x n
    acc = np.zeros(K)
    for nu in range(n):
        a = model.alpha(nu)
        traj = (phases * a[None, :]) @ model.V.T  # rows are u_t^T
        M = model.column_model(nu).basis
        norm2 = np.sum(np.abs(traj) ** 2, axis=1)
        coeff = traj @ M.conj()
        acc += np.clip(norm2 - np.sum(np.abs(coeff) ** 2, axis=1), 0.0, None)
    if model.T == 0:
        return float(acc[0])
    return float(np.trapezoid(acc, times) / model.T)
