"""Analytic compression theory for constant Hamiltonians.

Everything here is computed without time integration: the initial-state
covariance in the eigenbasis (R), the initial-state-free sinc matrix (S),
their linear-sweep Toeplitz idealizations, the time-bandwidth compression
estimate, singular-value/rank bounds, and the path-length stretch of a
nonlinear eigenvalue sweep.

Conventions: sinc is unnormalized, sinc(x) = sin(x)/x with sinc(0) = 1;
frequencies are cycles, f = omega / (2 pi), so the time-bandwidth product
is Delta = (omega_max - omega_min) T / (2 pi).
"""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.linalg import toeplitz

from .errors import ValidationError
from .hamiltonians import HamiltonianModel, InitialState
from .pod import CovarianceMatrix, singular_value_error_curve

RANK_TOL = 1e-10
BOUND_SLACK = 1e-10


def sinc(x) -> np.ndarray:
    """Unnormalized sinc: sin(x)/x, sinc(0) = 1."""
    return np.sinc(np.asarray(x) / np.pi)


def _descending_eigvals(M: np.ndarray) -> np.ndarray:
    return np.clip(np.linalg.eigvalsh(M)[::-1], 0.0, None)


@dataclass
class SpectralPair:
    """Eigenbasis covariance R = diag(alpha) S diag(alpha)^dag and sinc matrix S."""

    R: np.ndarray
    S: np.ndarray
    alpha: np.ndarray
    Lambda: np.ndarray
    T: float

    def __post_init__(self):
        tr = float(np.trace(self.R).real)
        if abs(tr - 1.0) > 1e-9:
            raise ValidationError(f"trace of R is {tr}, expected 1")

    @property
    def n(self) -> int:
        return self.R.shape[0]

    @cached_property
    def sigma_R(self) -> np.ndarray:
        return _descending_eigvals(self.R)

    @cached_property
    def sigma_S(self) -> np.ndarray:
        return _descending_eigvals(self.S)


def spectral_pair(H: HamiltonianModel, psi0: InitialState, T: float) -> SpectralPair:
    """Build (R, S) from the eigenvalue differences and alpha = V^dag psi0."""
    if H.n < 2:
        raise ValidationError("need dimension at least 2")
    if T <= 0:
        raise ValidationError("T must be positive")
    if psi0.n != H.n:
        raise ValidationError(f"state dim {psi0.n} vs Hamiltonian dim {H.n}")
    w = H.omega
    alpha = H.V.conj().T @ psi0.vector
    Lam = (w[:, None] - w[None, :]) * (T / 2)
    S = sinc(Lam)
    R = (alpha[:, None] * alpha.conj()[None, :]) * S
    R = (R + R.conj().T) / 2
    return SpectralPair(R, S, alpha, Lam, T)


def analytic_covariance(H: HamiltonianModel, psi0: InitialState, T: float) -> CovarianceMatrix:
    """Closed-form time-averaged covariance C = V D R D^dag V^dag, D = diag(e^{-i omega T/2})."""
    pair = spectral_pair(H, psi0, T)
    D = np.exp(-1j * H.omega * T / 2)
    F = (D[:, None] * pair.R) * D.conj()[None, :]
    C = H.V @ F @ H.V.conj().T
    return CovarianceMatrix((C + C.conj().T) / 2, origin="analytic")


@dataclass
class TimeBandwidth:
    """Dimensionless frequency-spread/run-time product and the compression it predicts."""

    delta: float
    m_tbw: int
    n: int


def tbw_from_spread(spread: float, T: float, n: int) -> TimeBandwidth:
    """Time-bandwidth numbers from a raw eigenvalue spread."""
    if n < 2:
        raise ValidationError("need dimension at least 2")
    delta = spread * T / (2 * math.pi)
    if delta <= 0:
        return TimeBandwidth(delta, 1, n)
    return TimeBandwidth(delta, math.ceil(n / (n - 1) * delta), n)


def time_bandwidth(H: HamiltonianModel, T: float) -> TimeBandwidth:
    """Delta = (omega_max - omega_min) T / (2 pi); m_tbw = ceil(n/(n-1) Delta)."""
    return tbw_from_spread(H.spectral_range, T, H.n)


def log_scaled_compression(n: int, n0: int, delta0: float) -> int:
    """Compression rescaled to a larger dimension: ceil(log n / log n0 * delta0)."""
    if not n >= n0 >= 2:
        raise ValidationError("need n >= n0 >= 2")
    return math.ceil(math.log(n) / math.log(n0) * delta0)


def linear_sweep_sinc(n: int, delta: float) -> np.ndarray:
    """Symmetric Toeplitz sinc matrix of an exactly linear eigenvalue sweep."""
    if n < 2:
        raise ValidationError("need dimension at least 2")
    k = np.arange(n)
    return toeplitz(sinc(np.pi * delta * k / (n - 1)))


def ideal_sinc_spectrum(n: int, delta: float) -> np.ndarray:
    """Idealized singular values of the linear-sweep sinc matrix.

    A flat plateau of value n/delta on the first ceil(delta) indices, zero
    after; the plateau count is the large-n knee of the exact spectrum.
    """
    if delta <= 0:
        raise ValidationError("delta must be positive")
    count = min(n, max(1, math.ceil(delta)))
    sigma = np.zeros(n)
    sigma[:count] = n / delta
    return sigma


def fourier_asymptotic_spectrum(n: int, delta: float, L: int | None = None) -> np.ndarray:
    """Asymptotic singular values of the linear-sweep sinc matrix.

    Evaluates the Toeplitz symbol at omega_k = 2 pi k / n (wrapped to
    (-pi, pi]), sorts magnitudes descending.  The closed form is a rect of
    height (n-1)/delta on |omega| <= pi delta / (n-1); with L given, the
    symbol is instead the numerical partial sum of L sinc terms.
    """
    if delta <= 0:
        raise ValidationError("delta must be positive")
    om = 2 * np.pi * np.arange(n) / n
    om = np.where(om > np.pi, om - 2 * np.pi, om)
    if L is None:
        F = np.where(np.abs(om) <= np.pi * delta / (n - 1), (n - 1) / delta, 0.0)
    else:
        if L < n:
            raise ValidationError("series length L must be at least n")
        # symmetric sum F(w) = 1 + 2 sum_{l>=1} cos(w l) sinc(pi delta l / (n-1)),
        # accumulated in chunks to bound memory
        F = np.ones(n)
        for lo in range(1, L, 1 << 14):
            ell = np.arange(lo, min(lo + (1 << 14), L))
            terms = sinc(np.pi * delta * ell / (n - 1))
            F += 2.0 * (np.cos(np.outer(om, ell)) @ terms)
    return np.sort(np.abs(F))[::-1]


@dataclass
class BoundReport:
    """Outcome of the singular-value, rank, and Ky Fan comparisons for one pair."""

    product_bound_ok: bool
    product_bound_worst_slack: float
    rank_R: int
    rank_S: int
    support_alpha: int
    rank_ok: bool
    kyfan_ok: bool
    kyfan_violations: list = field(default_factory=list)


def _numerical_rank(sigma: np.ndarray) -> int:
    if sigma.size == 0 or sigma[0] <= 0:
        return 0
    return int(np.sum(sigma > RANK_TOL * sigma[0]))


def singular_value_bounds_check(pair: SpectralPair) -> BoundReport:
    """Check sigma_k(R) <= min(||alpha||_inf^2 sigma_k(S), ||S|| sigma_k^2(alpha)),
    the rank inequality, and the Ky Fan sum comparison (diagnostic only)."""
    sig_R = pair.sigma_R
    sig_S = pair.sigma_S
    a_sorted = np.sort(np.abs(pair.alpha))[::-1]
    bound = np.minimum(np.max(a_sorted) ** 2 * sig_S, sig_S[0] * a_sorted**2)
    slack = np.min(bound - sig_R)
    product_ok = bool(slack >= -BOUND_SLACK)

    rank_R = _numerical_rank(sig_R)
    rank_S = _numerical_rank(sig_S)
    support = int(np.sum(np.abs(pair.alpha) > RANK_TOL * np.max(np.abs(pair.alpha))))
    rank_ok = rank_R <= min(rank_S, support)

    lhs = np.cumsum(sig_S) / pair.n
    rhs = np.cumsum(sig_R)
    viol = np.nonzero(lhs > rhs + BOUND_SLACK)[0]
    return BoundReport(
        product_bound_ok=product_ok,
        product_bound_worst_slack=float(slack),
        rank_R=rank_R,
        rank_S=rank_S,
        support_alpha=support,
        rank_ok=bool(rank_ok),
        kyfan_ok=viol.size == 0,
        kyfan_violations=(viol + 1).tolist(),
    )


@dataclass
class IdealPairReport:
    """Ideal linear-sweep covariance versus its closed-form singular-value bound."""

    sigma_Rbar: np.ndarray
    bound: np.ndarray
    bound_ok: bool
    rank: int
    rank_ok: bool
    dominance_ok: bool


def ideal_linear_pair(alpha, n: int, delta: float) -> IdealPairReport:
    """Rank-ceil(delta) ideal pair built from the lowest-frequency Fourier modes.

    Realizes the ideal sinc matrix through its spectral form (plateau n/delta
    on Fourier vectors inside the symbol passband), then verifies the
    singular-value bound (n/delta) sigma_k^2(alpha) and, as a diagnostic,
    whether sigma_k(ideal S / n) <= sigma_k(ideal R) for all k.
    """
    alpha = np.asarray(alpha, dtype=complex)
    if alpha.size != n:
        raise ValidationError(f"alpha length {alpha.size} vs n={n}")
    sigma_ideal = ideal_sinc_spectrum(n, delta)
    count = int(np.sum(sigma_ideal > 0))
    # Fourier modes with wrapped frequency inside the passband, lowest first
    om = 2 * np.pi * np.arange(n) / n
    om = np.where(om > np.pi, om - 2 * np.pi, om)
    order = np.argsort(np.abs(om), kind="stable")[:count]
    j = np.arange(n)
    U = np.exp(-1j * np.outer(j, om[order])) / math.sqrt(n)
    A = alpha[:, None] * U
    svals = np.linalg.svd(A, compute_uv=False)
    sigma_R = np.zeros(n)
    sigma_R[: svals.size] = (n / delta) * svals**2

    a_sorted = np.sort(np.abs(alpha))[::-1]
    bound = np.zeros(n)
    bound[:count] = (n / delta) * a_sorted[:count] ** 2
    bound_ok = bool(np.all(sigma_R <= bound + BOUND_SLACK))
    rank = _numerical_rank(sigma_R)
    dominance_ok = bool(np.all(sigma_ideal / n <= sigma_R + BOUND_SLACK))
    return IdealPairReport(sigma_R, bound, bound_ok, rank, rank <= count, dominance_ok)


@dataclass
class StretchReport:
    """Path-length stretch of a monotone eigenvalue sweep into a linear one."""

    n: int
    path_length: float
    spectral_range: float
    n_prime: int


def stretch_dimension(omega) -> StretchReport:
    """d = sum_k sqrt(gap_k^2 + 1); n' = ceil(1 + sqrt(d^2 - range^2))."""
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 1 or omega.size < 2:
        raise ValidationError("omega must be a vector of length >= 2")
    gaps = np.diff(omega)
    if np.any(gaps < 0):
        raise ValidationError("omega must be sorted non-decreasing")
    d = float(np.sum(np.sqrt(gaps**2 + 1.0)))
    spread = float(omega[-1] - omega[0])
    n_prime = math.ceil(1.0 + math.sqrt(max(d * d - spread * spread, 0.0)))
    return StretchReport(omega.size, d, spread, n_prime)


@dataclass
class SpectralReport:
    """Bundle of spectra, error curves, and bound checks for one (H, psi0, T)."""

    n: int
    T: float
    delta: float
    m_tbw: int
    sigma_R: np.ndarray
    sigma_S: np.ndarray
    sigma_Slin: np.ndarray
    eps_R: np.ndarray
    eps_S: np.ndarray
    eps_Slin: np.ndarray
    bounds: BoundReport

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "T": self.T,
            "delta": self.delta,
            "m_tbw": self.m_tbw,
            "sigma_R": self.sigma_R.tolist(),
            "sigma_S": self.sigma_S.tolist(),
            "sigma_Slin": self.sigma_Slin.tolist(),
            "eps_R": self.eps_R.tolist(),
            "eps_S": self.eps_S.tolist(),
            "eps_Slin": self.eps_Slin.tolist(),
            "bounds": {
                "svRbnd_ok": self.bounds.product_bound_ok,
                "kyfan_ok": self.bounds.kyfan_ok,
                "rank_R": self.bounds.rank_R,
            },
        }


def spectral_report(H: HamiltonianModel, psi0: InitialState, T: float) -> SpectralReport:
    """Full analytic report: R/S/S_lin spectra, error curves, bound checks."""
    pair = spectral_pair(H, psi0, T)
    tbw = time_bandwidth(H, T)
    sigma_Slin = _descending_eigvals(linear_sweep_sinc(H.n, tbw.delta))
    return SpectralReport(
        n=H.n,
        T=T,
        delta=tbw.delta,
        m_tbw=tbw.m_tbw,
        sigma_R=pair.sigma_R,
        sigma_S=pair.sigma_S,
        sigma_Slin=sigma_Slin,
        eps_R=singular_value_error_curve(pair.sigma_R),
        eps_S=singular_value_error_curve(pair.sigma_S),
        eps_Slin=singular_value_error_curve(sigma_Slin),
        bounds=singular_value_bounds_check(pair),
    )


def save_report_json(report: SpectralReport, path):
    from .util import write_json

    write_json(path, report.to_dict())


def save_report_csv(report: SpectralReport, path):
    """Plot-ready companion: one row per index m."""
    from .util import write_csv

    rows = [
        (
            m + 1,
            report.sigma_R[m],
            report.sigma_S[m],
            report.sigma_Slin[m],
            report.eps_R[m],
            report.eps_S[m],
            report.eps_Slin[m],
        )
        for m in range(report.n)
    ]
    write_csv(path, ["m", "sigma_R", "sigma_S", "sigma_Slin", "eps_R", "eps_S", "eps_Slin"], rows)
