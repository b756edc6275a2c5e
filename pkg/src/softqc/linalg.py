"""Dense complex linear algebra over multi-qubit registers.

States are plain ``numpy`` arrays of shape ``(2**n, 2**n)``. Qubit 0 is the
leftmost (most significant) tensor factor, so the basis index of
``|b0 b1 ... b_{n-1}>`` is ``b0 * 2**(n-1) + ... + b_{n-1}``, and
``|0> = (1, 0)``, ``|1> = (0, 1)``.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import ValidationError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
EIG_CLAMP = 1e-12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used by validity checks."""

    hermitian: float = HERMITIAN_TOL
    trace: float = TRACE_TOL
    psd: float = PSD_TOL
    discord: float = 1e-6
    unitary: float = 1e-8

    def as_dict(self):
        return {
            "hermitian": self.hermitian,
            "trace": self.trace,
            "psd": self.psd,
            "discord": self.discord,
            "unitary": self.unitary,
        }


TOLERANCE_PROFILES = {
    "default": Tolerances(),
    "strict": Tolerances(hermitian=1e-12, trace=1e-12, psd=1e-11, discord=1e-8, unitary=1e-10),
    "loose": Tolerances(hermitian=1e-8, trace=1e-8, psd=1e-7, discord=1e-5, unitary=1e-6),
}


def ket(bits):
    """Computational basis vector for a bit string such as ``"01"``."""
    n = len(bits)
    v = np.zeros(2**n, dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def projector(vec):
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())


def basis_state(bits):
    """Density matrix ``|bits><bits|``."""
    return projector(ket(bits))


def diagonal_qubit(p0):
    """Single-qubit state ``p0|0><0| + (1 - p0)|1><1|``."""
    return np.diag([p0, 1.0 - p0]).astype(complex)


PLUS = projector(np.array([1, 1]) / np.sqrt(2))
MINUS = projector(np.array([1, -1]) / np.sqrt(2))


def bell_state():
    """``|Phi+><Phi+|`` on two qubits."""
    return projector(np.array([1, 0, 0, 1]) / np.sqrt(2))


def maximally_mixed(n):
    d = 2**n
    return np.eye(d, dtype=complex) / d


def num_qubits(m):
    d = m.shape[0]
    n = d.bit_length() - 1
    if m.ndim != 2 or m.shape[0] != m.shape[1] or 2**n != d:
        raise ValueError(f"expected a square 2^n x 2^n matrix, got shape {m.shape}")
    return n


def tensor(*mats):
    """Kronecker product of the arguments, leftmost factor most significant."""
    if not mats:
        raise ValueError("tensor() needs at least one operand")
    return reduce(np.kron, (np.asarray(m, dtype=complex) for m in mats))


def embed(op, n, target):
    """Place a single-qubit operator at ``target`` inside an n-qubit register."""
    if not 0 <= target < n:
        raise ValueError(f"qubit index {target} out of range for {n} qubits")
    factors = [I2] * n
    factors[target] = op
    return tensor(*factors)


def partial_trace(rho, traced):
    """Trace out the qubits in ``traced``; the rest keep their relative order."""
    rho = np.asarray(rho)
    n = num_qubits(rho)
    traced = sorted(set(traced))
    if not traced:
        raise ValueError("nothing to trace out")
    if any(not 0 <= q < n for q in traced):
        raise ValueError(f"qubit indices {traced} out of range for {n} qubits")
    if len(traced) == n:
        raise ValueError("cannot trace out every qubit")
    kept = [q for q in range(n) if q not in traced]
    t = rho.reshape((2,) * (2 * n))
    # einsum subscripts: row axes 0..n-1, column axes n..2n-1; traced pairs share a label
    row = list(range(n))
    col = [q if q in traced else n + q for q in range(n)]
    out = [q for q in kept] + [n + q for q in kept]
    dk = 2 ** len(kept)
    return np.einsum(t, row + col, out).reshape(dk, dk)


def is_hermitian(m, tol=HERMITIAN_TOL):
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T)) <= tol


def eig_hermitian(m, tol=1e-8):
    """Ascending real eigenvalues and orthonormal eigenvectors (as columns)."""
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise ValueError("eig_hermitian requires a Hermitian matrix")
    return np.linalg.eigh((m + m.conj().T) / 2)


def check_density_matrix(rho, tols=Tolerances()):
    """Raise ``ValidationError`` unless ``rho`` is a valid multi-qubit state."""
    rho = np.asarray(rho)
    try:
        num_qubits(rho)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    if not np.all(np.isfinite(rho)):
        raise ValidationError("state has non-finite entries")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > tols.hermitian:
        raise ValidationError(f"state is not Hermitian (deviation {herm:.3g})")
    tr = np.trace(rho)
    if abs(tr - 1) > tols.trace:
        raise ValidationError(f"state trace is {tr.real:.12g}, expected 1")
    lo = np.linalg.eigvalsh((rho + rho.conj().T) / 2)[0]
    if lo < -tols.psd:
        raise ValidationError(f"state is not positive semidefinite (min eigenvalue {lo:.3g})")
    return rho


def von_neumann_entropy(rho):
    """Entropy in bits, with eigenvalues below ``EIG_CLAMP`` treated as zero."""
    w = np.linalg.eigvalsh((rho + np.conj(rho).T) / 2)
    w = w[w > EIG_CLAMP]
    return float(max(0.0, -np.sum(w * np.log2(w))))


def trace_distance(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2))))


def random_density_matrix(rng, n, rank=None):
    """Random n-qubit state from the induced (Ginibre) measure."""
    d = 2**n
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, d):
    """Haar-random unitary via QR with phase correction."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
