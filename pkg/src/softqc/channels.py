"""Kraus channels: the named noise models, application, composition and checks.

Completeness is tested in the standard operator ordering ``sum_k M_k^dag M_k``;
a channel is trace preserving when that sum equals the identity and trace
decreasing when it stays below it.
"""

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import ValidationError
from .linalg import I2, X, Y, Z, embed, trace_distance

TP_TOL = 1e-9
CHOI_PSD_TOL = 1e-8

TRACE_PRESERVING = "trace-preserving"
TRACE_DECREASING = "trace-decreasing"
INVALID = "invalid"


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus_ops: tuple
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        ops = tuple(np.array(op, dtype=complex) for op in self.kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        for op in ops:
            if op.ndim != 2 or op.shape != (d, d):
                raise ValueError("Kraus operators must be square and of equal dimension")
            op.flags.writeable = False
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def dim(self):
        return self.kraus_ops[0].shape[0]

    def completeness(self):
        """``sum_k M_k^dag M_k``."""
        return sum(op.conj().T @ op for op in self.kraus_ops)

    @property
    def is_trace_preserving(self):
        return bool(np.max(np.abs(self.completeness() - np.eye(self.dim))) <= TP_TOL)

    def __call__(self, rho):
        return apply(self, rho)

    def __repr__(self):
        params = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"KrausChannel({self.name}({params}), dim={self.dim}, ops={len(self.kraus_ops)})"


def classify(ops, tol=TP_TOL):
    """Completeness class of a Kraus set without building a channel."""
    ops = [np.asarray(op, dtype=complex) for op in ops]
    d = ops[0].shape[0]
    s = sum(op.conj().T @ op for op in ops)
    if np.max(np.abs(s - np.eye(d))) <= tol:
        return TRACE_PRESERVING
    if np.linalg.eigvalsh((s + s.conj().T) / 2)[-1] <= 1 + tol:
        return TRACE_DECREASING
    return INVALID


def _check_probability(p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"channel parameter p={p} outside [0, 1]")
    return float(p)


def identity_channel(dim=2):
    return KrausChannel((np.eye(dim),), name="identity")


def depolarizing(p):
    p = _check_probability(p)
    ops = (np.sqrt(1 - p) * I2,) + tuple(np.sqrt(p / 3) * s for s in (X, Y, Z))
    return KrausChannel(ops, name="depolarizing", params={"p": p})


def phase_damping(p):
    p = _check_probability(p)
    ops = (
        np.sqrt(1 - p) * I2,
        np.sqrt(p) / 2 * (I2 + Z),
        np.sqrt(p) / 2 * (I2 - Z),
    )
    return KrausChannel(ops, name="phase_damping", params={"p": p})


def amplitude_damping(p):
    p = _check_probability(p)
    ops = (
        np.array([[1, 0], [0, np.sqrt(1 - p)]]),
        np.array([[0, np.sqrt(p)], [0, 0]]),
    )
    return KrausChannel(ops, name="amplitude_damping", params={"p": p})


NAMED_CHANNELS = {
    "depolarizing": depolarizing,
    "phase_damping": phase_damping,
    "amplitude_damping": amplitude_damping,
}


def custom_channel(ops, name="custom"):
    """Wrap an arbitrary Kraus set, rejecting it if it can increase trace."""
    ops = [np.asarray(op, dtype=complex) for op in ops]
    if not ops:
        raise ValueError("a channel needs at least one Kraus operator")
    ch = KrausChannel(tuple(ops), name=name)
    if classify(ch.kraus_ops) == INVALID:
        raise ValidationError("sum of M^dag M exceeds the identity")
    return ch


def apply(ch, rho):
    rho = np.asarray(rho)
    if rho.shape != (ch.dim, ch.dim):
        raise ValueError(f"channel of dimension {ch.dim} cannot act on shape {rho.shape}")
    out = np.zeros_like(rho, dtype=complex)
    for op in ch.kraus_ops:
        out += op @ rho @ op.conj().T
    return out


def lift(ch, register_size, target):
    """Embed a single-qubit channel at ``target`` of an n-qubit register."""
    if ch.dim != 2:
        raise ValueError("only single-qubit channels can be lifted")
    ops = tuple(embed(op, register_size, target) for op in ch.kraus_ops)
    return KrausChannel(ops, name=ch.name, params=dict(ch.params))


def compose(first, second):
    """Channel that applies ``first`` and then ``second``."""
    if first.dim != second.dim:
        raise ValueError(f"dimension mismatch: {first.dim} vs {second.dim}")
    ops = tuple(b @ a for a, b in product(first.kraus_ops, second.kraus_ops))
    return KrausChannel(ops, name=f"{second.name}*{first.name}")


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Normalized Choi state ``(id (x) W)(|Omega><Omega|)``, input factor first."""

    matrix: np.ndarray
    source: str
    dim: int

    def min_eigenvalue(self):
        m = self.matrix
        return float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])

    @property
    def is_completely_positive(self):
        return self.min_eigenvalue() >= -CHOI_PSD_TOL

    def input_marginal(self):
        """Partial trace over the output factor; ``I/d`` iff trace preserving."""
        d = self.dim
        return np.einsum("iaja->ij", self.matrix.reshape(d, d, d, d))

    @property
    def is_trace_preserving(self):
        return bool(np.max(np.abs(self.input_marginal() - np.eye(self.dim) / self.dim)) <= TP_TOL)


def choi(ch):
    d = ch.dim
    m = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            eij = np.zeros((d, d), dtype=complex)
            eij[i, j] = 1.0
            m += np.kron(eij, apply(ch, eij))
    return ChoiMatrix(m / d, ch.name, d)


def commutativity_gap(a, b):
    """Trace distance between the Choi states of ``b after a`` and ``a after b``."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return trace_distance(choi(compose(a, b)).matrix, choi(compose(b, a)).matrix)

