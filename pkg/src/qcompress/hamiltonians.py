"""Hamiltonian families with cached Hermitian eigendecompositions.

Spin-chain builders (transverse-field Ising, XXZ), seeded random Hermitian
ensembles, and synthetic spectra with Haar-random eigenvectors.  Every model
carries a lazily computed eigendecomposition H = V diag(omega) V-dagger with
omega sorted ascending and a fixed eigenvector phase convention, so repeated
constructions from the same inputs are bit-identical.
"""

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ResourceLimitError, ValidationError

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

MAX_SPINS = 14
MAX_DIM = 4096

HERMITICITY_TOL = 1e-12
DEGENERACY_TOL = 1e-10


class Family(str, Enum):
    TFI = "TFI"
    XXZ = "XXZ"
    RANDOM_HERMITIAN = "RandomHermitian"
    SYNTHETIC_SPECTRUM = "SyntheticSpectrum"
    COMPOSITE = "Composite"


def fix_phases(V: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column real-positive."""
    idx = np.argmax(np.abs(V), axis=0)
    pivots = V[idx, np.arange(V.shape[1])]
    return V / (pivots / np.abs(pivots))[None, :]


@dataclass
class HamiltonianModel:
    """Dense Hermitian matrix with a cached eigendecomposition.

    `omega` and `V` are computed on first access (values only via eigvalsh
    when the eigenvectors have not been requested; a full eigh replaces
    both so they always describe one consistent decomposition).
    """

    matrix: np.ndarray
    family: Family
    params: dict = field(default_factory=dict)
    _omega: np.ndarray | None = field(default=None, repr=False)
    _V: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValidationError(f"Hamiltonian must be square, got shape {M.shape}")
        scale = np.max(np.abs(M)) or 1.0
        skew = np.max(np.abs(M - M.conj().T))
        if skew > HERMITICITY_TOL * scale:
            raise ValidationError(f"matrix is not Hermitian: max asymmetry {skew:.3e}")
        self.matrix = M

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def omega(self) -> np.ndarray:
        """Eigenvalues, sorted ascending."""
        if self._omega is None:
            self._omega = np.linalg.eigvalsh(self.matrix)
        return self._omega

    @property
    def V(self) -> np.ndarray:
        """Unitary of eigenvectors (columns), phase-fixed."""
        if self._V is None:
            w, V = np.linalg.eigh(self.matrix)
            self._omega = w
            self._V = fix_phases(V)
        return self._V

    @property
    def spectral_range(self) -> float:
        w = self.omega
        return float(w[-1] - w[0])

    def _set_eigensystem(self, omega, V):
        self._omega = np.asarray(omega, dtype=float)
        self._V = np.asarray(V, dtype=complex)


def _kron_chain(ops) -> np.ndarray:
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def _site_op(op, site, n_spin) -> np.ndarray:
    ops = [PAULI_I] * n_spin
    ops[site] = op
    return _kron_chain(ops)


def _bond_op(a, b, site, n_spin) -> np.ndarray:
    ops = [PAULI_I] * n_spin
    ops[site] = a
    ops[site + 1] = b
    return _kron_chain(ops)


def _check_spins(n_spin: int, max_spins: int):
    if n_spin < 1:
        raise ValidationError(f"n_spin must be positive, got {n_spin}")
    if n_spin > max_spins:
        raise ResourceLimitError(
            f"n_spin={n_spin} exceeds cap {max_spins} (dim 2^{n_spin}); raise max_spins to override"
        )


def build_tfi(n_spin: int, h: float, max_spins: int = MAX_SPINS) -> HamiltonianModel:
    """Open-chain transverse-field Ising model.

    H = -h * sum_i X_i - sum_{i<n_spin} Z_i Z_{i+1}, dense 2^n_spin matrix.
    """
    _check_spins(n_spin, max_spins)
    dim = 2**n_spin
    H = np.zeros((dim, dim), dtype=complex)
    for i in range(n_spin):
        H -= h * _site_op(PAULI_X, i, n_spin)
    for i in range(n_spin - 1):
        H -= _bond_op(PAULI_Z, PAULI_Z, i, n_spin)
    return HamiltonianModel(H, Family.TFI, {"n_spin": n_spin, "h": h})


def build_xxz(n_spin: int, delta: float, max_spins: int = MAX_SPINS) -> HamiltonianModel:
    """Open-chain XXZ model: H = sum_i X_i X_{i+1} + Y_i Y_{i+1} + delta * Z_i Z_{i+1}."""
    _check_spins(n_spin, max_spins)
    dim = 2**n_spin
    H = np.zeros((dim, dim), dtype=complex)
    for i in range(n_spin - 1):
        H += _bond_op(PAULI_X, PAULI_X, i, n_spin)
        H += _bond_op(PAULI_Y, PAULI_Y, i, n_spin)
        H += delta * _bond_op(PAULI_Z, PAULI_Z, i, n_spin)
    return HamiltonianModel(H, Family.XXZ, {"n_spin": n_spin, "delta": delta})


def _check_dim(n: int, max_dim: int):
    if n < 1:
        raise ValidationError(f"dimension must be positive, got {n}")
    if n > max_dim:
        raise ResourceLimitError(f"n={n} exceeds dense-diagonalization cap {max_dim}")


def build_random_hermitian(
    n: int, seed: int, norm_target: float | None = None, max_dim: int = MAX_DIM
) -> HamiltonianModel:
    """Symmetrized complex Gaussian matrix (GUE up to scale).

    With `norm_target` set, the matrix is rescaled so its spectral norm
    (largest |eigenvalue|) equals the target.
    """
    _check_dim(n, max_dim)
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = (A + A.conj().T) / 2
    params = {"n": n, "seed": seed}
    if norm_target is not None:
        if norm_target <= 0:
            raise ValidationError("norm_target must be positive")
        w = np.linalg.eigvalsh(H)
        scale = norm_target / max(abs(w[0]), abs(w[-1]))
        params["norm_target"] = norm_target
        model = HamiltonianModel(H * scale, Family.RANDOM_HERMITIAN, params)
        model._omega = w * scale
        return model
    return HamiltonianModel(H, Family.RANDOM_HERMITIAN, params)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary: QR of a complex Gaussian with the phase fix."""
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(A)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))[None, :]


def build_synthetic_spectrum(omega, seed: int, max_dim: int = MAX_DIM) -> HamiltonianModel:
    """H = V diag(omega) V-dagger with V a seeded Haar-random unitary."""
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 1 or omega.size < 1:
        raise ValidationError("omega must be a non-empty vector")
    if not np.all(np.isfinite(omega)):
        raise ValidationError("omega must be finite")
    if np.any(np.diff(omega) < 0):
        raise ValidationError("omega must be sorted non-decreasing")
    n = omega.size
    _check_dim(n, max_dim)
    V = fix_phases(haar_unitary(n, np.random.default_rng(seed)))
    H = (V * omega[None, :]) @ V.conj().T
    H = (H + H.conj().T) / 2
    model = HamiltonianModel(H, Family.SYNTHETIC_SPECTRUM, {"n": n, "seed": seed})
    model._set_eigensystem(omega, V)
    return model


def build_composite(
    H0: HamiltonianModel, H1: HamiltonianModel, coeff: float
) -> HamiltonianModel:
    """H0 + coeff * H1 as a new model (used for field-displaced Hamiltonians)."""
    if H0.n != H1.n:
        raise ValidationError(f"dimension mismatch: {H0.n} vs {H1.n}")
    return HamiltonianModel(
        H0.matrix + coeff * H1.matrix,
        Family.COMPOSITE,
        {"coeff": coeff, "families": (H0.family.value, H1.family.value)},
    )


def polynomial_spectrum(n: int, degree: int = 5, amplitude: float = 85.0) -> np.ndarray:
    """Exaggerated odd-polynomial eigenvalue sweep: amplitude * x**degree, x linear in [-1, 1]."""
    if degree % 2 == 0:
        raise ValidationError("degree must be odd so the sweep is monotone")
    x = np.linspace(-1.0, 1.0, n)
    return amplitude * x**degree


@dataclass
class InitialState:
    """Unit-norm state vector with a record of how it was prepared."""

    vector: np.ndarray
    kind: str
    meta: dict = field(default_factory=dict)
    degenerate: bool = False

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex)
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > 1e-12:
            raise ValidationError(f"initial state norm {nrm} is not 1 within 1e-12")
        self.vector = v

    @property
    def n(self) -> int:
        return self.vector.size


def ground_state(H: HamiltonianModel) -> InitialState:
    """Lowest eigenvector; flags (and warns about) a degenerate ground level."""
    w = H.omega
    degenerate = H.n > 1 and (w[1] - w[0]) < DEGENERACY_TOL
    if degenerate:
        warnings.warn("ground level is degenerate; returning the lowest-index eigenvector")
    v = H.V[:, 0].copy()
    v /= np.linalg.norm(v)
    return InitialState(v, "GroundStateOf", {"family": H.family.value, **H.params}, degenerate)


def random_state(n: int, seed: int) -> InitialState:
    """Normalized complex Gaussian vector."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    return InitialState(v, "RandomHaar", {"seed": seed})


def subspace_confined_state(H: HamiltonianModel, k: int, seed: int) -> InitialState:
    """Random unit combination of k distinct eigenvectors of H.

    The coefficient vector alpha = V-dagger psi0 has exactly k nonzero entries.
    """
    n = H.n
    if not 1 <= k <= n:
        raise ValidationError(f"k={k} outside [1, {n}]")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(n, size=k, replace=False))
    c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    c /= np.linalg.norm(c)
    v = H.V[:, idx] @ c
    v /= np.linalg.norm(v)
    return InitialState(v, "SubspaceConfined", {"seed": seed, "indices": idx.tolist(), "k": k})


def basis_state(n: int, index: int) -> InitialState:
    if not 0 <= index < n:
        raise ValidationError(f"basis index {index} outside [0, {n})")
    v = np.zeros(n, dtype=complex)
    v[index] = 1.0
    return InitialState(v, "Basis", {"index": index})


def explicit_state(vector) -> InitialState:
    return InitialState(np.asarray(vector, dtype=complex), "Explicit")
