"""State and unitary propagation under constant and piecewise-constant Hamiltonians.

Constant-H trajectories are computed exactly through the eigendecomposition
(no time-stepping error); time-varying dynamics use per-subinterval matrix
exponentials (scaling-and-squaring Pade via scipy).  Sampling conventions:

* constant H: K samples on a uniform grid including both endpoints,
  dt = T / (K - 1);
* time-varying: K equal subintervals, states recorded at t = 0 and at the
  K right endpoints (K + 1 columns), dt = T / K.
"""

import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import ResourceLimitError, ValidationError
from .hamiltonians import HamiltonianModel, InitialState

NORM_TOL = 1e-9
UNITARY_STACK_CAP = 2 << 30  # bytes


@dataclass
class Trajectory:
    """Time-indexed complex state columns: states[:, k] is the state at times[k]."""

    times: np.ndarray
    states: np.ndarray
    source: str = ""

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=complex)
        if self.states.ndim != 2 or self.times.ndim != 1:
            raise ValidationError("states must be n x K with a length-K time grid")
        if self.states.shape[1] != self.times.size:
            raise ValidationError(
                f"{self.states.shape[1]} state columns vs {self.times.size} time samples"
            )
        norms = np.linalg.norm(self.states, axis=0)
        worst = np.max(np.abs(norms - 1.0)) if norms.size else 0.0
        if worst > NORM_TOL:
            raise ValidationError(f"state columns deviate from unit norm by {worst:.3e}")

    @property
    def n(self) -> int:
        return self.states.shape[0]

    @property
    def num_samples(self) -> int:
        return self.states.shape[1]


@dataclass
class FieldSchedule:
    """Piecewise-constant field values on K equal subintervals of [0, T]."""

    c: np.ndarray
    c_mag: float
    seed: int | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        if self.c.ndim != 1 or self.c.size < 1:
            raise ValidationError("schedule must be a non-empty vector")
        if self.c_mag < 0:
            raise ValidationError("c_mag must be non-negative")
        if np.max(np.abs(self.c), initial=0.0) > self.c_mag * (1 + 1e-12):
            raise ValidationError("schedule values exceed the stated magnitude bound")

    @classmethod
    def random_uniform(cls, c_mag: float, K: int, seed: int) -> "FieldSchedule":
        rng = np.random.default_rng(seed)
        return cls(rng.uniform(-c_mag, c_mag, size=K), c_mag, seed)

    @property
    def K(self) -> int:
        return self.c.size


def _phase_columns(H: HamiltonianModel, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Columns V exp(-i t Omega) V^dag psi0 for every t, via the eigendecomposition."""
    alpha = H.V.conj().T @ psi0
    phases = np.exp(-1j * np.outer(H.omega, times))
    return H.V @ (alpha[:, None] * phases)


def evolve_constant(H: HamiltonianModel, psi0: InitialState, T: float, K: int) -> Trajectory:
    """Exact evolution under a constant Hamiltonian, sampled at K uniform times."""
    if K < 2:
        raise ValidationError("K must be at least 2")
    if T < 0:
        raise ValidationError("T must be non-negative")
    if psi0.n != H.n:
        raise ValidationError(f"state dim {psi0.n} vs Hamiltonian dim {H.n}")
    times = np.linspace(0.0, T, K)
    states = _phase_columns(H, psi0.vector, times)
    return Trajectory(times, states, source=f"constant:{H.family.value}")


def evolve_time_varying(
    H0: HamiltonianModel,
    H1: HamiltonianModel,
    schedule: FieldSchedule,
    psi0: InitialState,
    T: float,
) -> Trajectory:
    """Piecewise-constant evolution under H0 + c_k H1, one expm per subinterval.

    Returns the initial state plus the K right-endpoint states (K + 1 columns).
    """
    if H0.n != H1.n:
        raise ValidationError(f"dimension mismatch: {H0.n} vs {H1.n}")
    if psi0.n != H0.n:
        raise ValidationError(f"state dim {psi0.n} vs Hamiltonian dim {H0.n}")
    if T <= 0:
        raise ValidationError("T must be positive")
    K = schedule.K
    dt = T / K
    cols = np.empty((H0.n, K + 1), dtype=complex)
    psi = psi0.vector
    cols[:, 0] = psi
    for k, c in enumerate(schedule.c):
        U = expm(-1j * dt * (H0.matrix + c * H1.matrix))
        psi = U @ psi
        cols[:, k + 1] = psi
    times = np.linspace(0.0, T, K + 1)
    return Trajectory(times, cols, source="time-varying")


@dataclass
class UnitaryEvolution:
    """Stack of propagators U_{t_k} = V exp(-i t_k Omega) V^dag at uniform times."""

    times: np.ndarray
    unitaries: np.ndarray  # (K, n, n)
    source: str = ""

    def __len__(self) -> int:
        return self.unitaries.shape[0]

    def __getitem__(self, k: int) -> np.ndarray:
        return self.unitaries[k]

    @property
    def n(self) -> int:
        return self.unitaries.shape[1]

    def column(self, nu: int) -> Trajectory:
        """Trajectory of column nu: evolution of the nu-th basis vector."""
        return Trajectory(self.times, self.unitaries[:, :, nu].T, source=f"{self.source}:col{nu}")


def evolve_unitary(
    H: HamiltonianModel, T: float, K: int, max_bytes: int = UNITARY_STACK_CAP
) -> UnitaryEvolution:
    """Materialize the propagator at K uniform times on [0, T]."""
    if K < 2:
        raise ValidationError("K must be at least 2")
    need = 16 * K * H.n * H.n
    if need > max_bytes:
        raise ResourceLimitError(
            f"unitary stack needs {need} bytes > cap {max_bytes}; raise max_bytes to override"
        )
    times = np.linspace(0.0, T, K)
    V = H.V
    Vd = V.conj().T
    stack = np.empty((K, H.n, H.n), dtype=complex)
    for k, t in enumerate(times):
        stack[k] = (V * np.exp(-1j * t * H.omega)[None, :]) @ Vd
    return UnitaryEvolution(times, stack, source=f"unitary:{H.family.value}")


def perturb_initial_state(psi0: InitialState, magnitude: float, seed: int) -> InitialState:
    """Renormalized psi0 + magnitude * g with g a seeded random unit vector."""
    if not 0 <= magnitude < 1:
        raise ValidationError("magnitude must lie in [0, 1)")
    if magnitude == 0:
        return psi0
    rng = np.random.default_rng(seed)
    g = rng.standard_normal(psi0.n) + 1j * rng.standard_normal(psi0.n)
    g /= np.linalg.norm(g)
    v = psi0.vector + magnitude * g
    v /= np.linalg.norm(v)
    applied = float(np.linalg.norm(v - psi0.vector))
    return InitialState(
        v, psi0.kind + "+perturbation", {**psi0.meta, "perturbation": magnitude, "applied": applied}
    )


_BIN_MAGIC = b"QTRJ"
_BIN_ENDIAN_TAG = 0x01020304


def save_trajectory_csv(traj: Trajectory, path):
    """K rows: t followed by interleaved re/im of each state component."""
    from .util import write_csv

    header = ["t"]
    for i in range(traj.n):
        header += [f"re{i}", f"im{i}"]
    rows = []
    for k in range(traj.num_samples):
        col = traj.states[:, k]
        row = [traj.times[k]]
        inter = np.empty(2 * traj.n)
        inter[0::2] = col.real
        inter[1::2] = col.imag
        rows.append(row + inter.tolist())
    write_csv(path, header, rows)


def save_trajectory_bin(traj: Trajectory, path):
    """Compact container: magic, endianness tag, n, K, T; column-major complex body."""
    T = float(traj.times[-1])
    header = _BIN_MAGIC + struct.pack("<IQQd", _BIN_ENDIAN_TAG, traj.n, traj.num_samples, T)
    body = np.asfortranarray(traj.states).astype("<c16").tobytes(order="F")
    from .util import _atomic_write

    _atomic_write(path, header + body)


def load_trajectory_bin(path) -> Trajectory:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _BIN_MAGIC:
            raise ValidationError(f"bad magic {magic!r} in trajectory container")
        tag, n, K, T = struct.unpack("<IQQd", fh.read(28))
        if tag != _BIN_ENDIAN_TAG:
            raise ValidationError("endianness tag mismatch in trajectory container")
        body = fh.read(16 * n * K)
    if len(body) != 16 * n * K:
        raise ValidationError("truncated trajectory container")
    states = np.frombuffer(body, dtype="<c16").reshape((n, K), order="F").copy()
    return Trajectory(np.linspace(0.0, T, K), states, source="file")
