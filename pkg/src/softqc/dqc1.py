"""One-clean-qubit estimation of the normalized trace of a unitary.

The clean (control) qubit starts in ``(I + alpha Z) / 2``, the n-qubit
register in ``I / 2**n``. After a Hadamard on the control and a controlled-U,
the control's Pauli expectations satisfy

    <X> + i <Y> = alpha * tr(U) / 2**n,

which is the value returned as the estimate.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import HADAMARD, I2, PAULI, X, Y, Z, maximally_mixed, partial_trace, random_unitary, tensor

MAX_QUBITS = 8


@dataclass(frozen=True)
class DQC1Estimate:
    estimate: complex
    expect_x: float
    expect_y: float
    alpha: float
    num_qubits: int
    shots: int | None = None
    stderr_x: float | None = None
    stderr_y: float | None = None


def check_unitary(u, tol=1e-8):
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValidationError(f"unitary must be square, got shape {u.shape}")
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > tol:
        raise ValidationError(f"matrix is not unitary (max |U^dag U - I| = {dev:.3g})")
    return u


def named_unitary(name, n, seed=0):
    """Unitaries selectable by name: ``identity``, ``random``, ``qft`` or ``pauli:XZY...``."""
    d = 2**n
    if name == "identity":
        return np.eye(d, dtype=complex)
    if name == "random":
        return random_unitary(np.random.default_rng(seed), d)
    if name == "qft":
        w = np.exp(2j * np.pi / d)
        k = np.arange(d)
        return w ** np.outer(k, k) / np.sqrt(d)
    if name.startswith("pauli:"):
        word = name.split(":", 1)[1].upper()
        if len(word) != n or any(c not in PAULI for c in word):
            raise ValidationError(f"Pauli word {word!r} must have {n} letters from IXYZ")
        return tensor(*(PAULI[c] for c in word))
    raise ValidationError(f"unknown unitary {name!r}")


def dqc1_state(u, alpha=1.0):
    """Final joint state (control first) of the one-clean-qubit circuit."""
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    n = d.bit_length() - 1
    control = (I2 + alpha * Z) / 2
    rho = tensor(HADAMARD @ control @ HADAMARD, maximally_mixed(n))
    cu = np.block([[np.eye(d), np.zeros((d, d))], [np.zeros((d, d)), u]])
    return cu @ rho @ cu.conj().T


def dqc1_estimate(u, alpha=1.0, shots=None, seed=0, tol=1e-8):
    """Estimate ``alpha * tr(U) / 2**n``; exact when ``shots`` is None."""
    u = check_unitary(u, tol)
    d = u.shape[0]
    n = d.bit_length() - 1
    if 2**n != d or not 1 <= n <= MAX_QUBITS:
        raise ValidationError(f"unitary dimension {d} is not 2**n with 1 <= n <= {MAX_QUBITS}")
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError(f"alpha={alpha} outside [0, 1]")
    control = partial_trace(dqc1_state(u, alpha), range(1, n + 1))
    ex = float(np.trace(X @ control).real)
    ey = float(np.trace(Y @ control).real)
    if shots is None:
        return DQC1Estimate(complex(ex, ey), ex, ey, alpha, n)
    if shots < 1:
        raise ValueError("shots must be at least 1")
    rng = np.random.default_rng(seed)
    # +1 outcome probability of each Pauli measurement is (1 + <P>) / 2
    sx = 2.0 * rng.binomial(shots, np.clip((1 + ex) / 2, 0, 1)) / shots - 1.0
    sy = 2.0 * rng.binomial(shots, np.clip((1 + ey) / 2, 0, 1)) / shots - 1.0
    return DQC1Estimate(
        complex(sx, sy),
        sx,
        sy,
        alpha,
        n,
        shots,
        float(np.sqrt(max(0.0, 1 - ex**2) / shots)),
        float(np.sqrt(max(0.0, 1 - ey**2) / shots)),
    )
