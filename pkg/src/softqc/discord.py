"""Quantum discord of two-qubit states under rank-1 projective measurements.

``side`` always names the measured qubit (0 or 1). Entropies are in bits.
Classical correlation is maximised over measurement directions by a fixed
64 x 32 grid on (theta, phi) followed by Nelder-Mead refinement, so every
report is deterministic.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .linalg import EIG_CLAMP, embed, partial_trace, projector, von_neumann_entropy

GRID_THETA = 64
GRID_PHI = 32
ANGLE_TOL = 1e-6
MAX_EVALS = 500
CLAMP_FLOOR = -1e-7

CLASSICAL = "classical"
CLASSICAL_QUANTUM = "classical-quantum"
QUANTUM_CLASSICAL = "quantum-classical"
FULLY_QUANTUM = "fully-quantum"


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective qubit measurement along the Bloch direction (theta, phi)."""

    theta: float
    phi: float

    @classmethod
    def normalized(cls, theta, phi):
        theta = float(np.mod(theta, 2 * np.pi))
        phi = float(phi)
        if theta > np.pi:
            theta = 2 * np.pi - theta
            phi += np.pi
        return cls(theta, float(np.mod(phi, 2 * np.pi)))

    def vectors(self):
        c, s = np.cos(self.theta / 2), np.sin(self.theta / 2)
        e = np.exp(1j * self.phi)
        return np.array([c, e * s]), np.array([np.conj(e) * s, -c])

    @property
    def projectors(self):
        return tuple(projector(v) for v in self.vectors())


@dataclass(frozen=True)
class DiscordReport:
    mutual_information: float
    classical_correlation: float
    discord: float
    raw_discord: float
    best_basis: MeasurementBasis
    measured_side: int
    optimizer_evals: int

    def as_dict(self):
        return {
            "mutual_information": self.mutual_information,
            "classical_correlation": self.classical_correlation,
            "discord": self.discord,
            "raw_discord": self.raw_discord,
            "best_basis": {"theta": self.best_basis.theta, "phi": self.best_basis.phi},
            "measured_side": self.measured_side,
            "optimizer_evals": self.optimizer_evals,
        }


def _check_two_qubit(rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a two-qubit (4x4) state, got shape {rho.shape}")
    return rho


def _check_side(side):
    if side not in (0, 1):
        raise ValueError("side must be 0 or 1")


def mutual_information(rho12):
    rho12 = _check_two_qubit(rho12)
    s1 = von_neumann_entropy(partial_trace(rho12, [1]))
    s2 = von_neumann_entropy(partial_trace(rho12, [0]))
    return s1 + s2 - von_neumann_entropy(rho12)


def conditional_entropy(rho12, side, basis):
    """Outcome-averaged entropy of the unmeasured qubit."""
    rho12 = _check_two_qubit(rho12)
    _check_side(side)
    total = 0.0
    for proj in basis.projectors:
        big = embed(proj, 2, side)
        branch = partial_trace(big @ rho12 @ big, [side])
        p = np.trace(branch).real
        if p > EIG_CLAMP:
            total += p * von_neumann_entropy(branch / p)
    return total


def _binary_entropy_from_eigs(lam):
    lam = np.where(lam > EIG_CLAMP, lam, 1.0)
    return -np.sum(lam * np.log2(lam), axis=-1)


def _conditional_entropies(rho12, side, thetas, phis):
    """Vectorised ``conditional_entropy`` over arrays of angles."""
    t = rho12.reshape(2, 2, 2, 2)
    if side == 1:
        t = t.transpose(1, 0, 3, 2)
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    c, s = np.cos(thetas / 2), np.sin(thetas / 2)
    e = np.exp(1j * phis)
    total = np.zeros(thetas.shape)
    for vec in (np.stack([c, e * s], -1), np.stack([np.conj(e) * s, -c], -1)):
        # branch[b, b'] = sum_{a, a'} conj(v_a) rho[a b, a' b'] v_a'
        br = np.einsum("...a,abcd,...c->...bd", vec.conj(), t, vec)
        p = (br[..., 0, 0] + br[..., 1, 1]).real
        diff = (br[..., 0, 0] - br[..., 1, 1]).real
        rad = np.sqrt(diff**2 + 4 * np.abs(br[..., 0, 1]) ** 2)
        safe = np.where(p > EIG_CLAMP, p, 1.0)
        lam = np.stack([(p + rad) / 2, (p - rad) / 2], -1) / safe[..., None]
        h = _binary_entropy_from_eigs(np.clip(lam, 0.0, 1.0))
        total += np.where(p > EIG_CLAMP, p * h, 0.0)
    return total


def classical_correlation(rho12, side):
    """Return ``(J, best_basis, evaluations)`` for measurement on ``side``."""
    rho12 = _check_two_qubit(rho12)
    _check_side(side)
    theta_grid = np.linspace(0.0, np.pi, GRID_THETA)
    phi_grid = np.linspace(0.0, 2 * np.pi, GRID_PHI, endpoint=False)
    tt, pp = np.meshgrid(theta_grid, phi_grid, indexing="ij")
    values = _conditional_entropies(rho12, side, tt, pp)
    k = np.unravel_index(np.argmin(values), values.shape)
    x0 = np.array([tt[k], pp[k]])
    best = float(values[k])
    evals = values.size

    def objective(x):
        return float(_conditional_entropies(rho12, side, x[0], x[1]))

    dt, dp = theta_grid[1] - theta_grid[0], phi_grid[1] - phi_grid[0]
    simplex = np.array([x0, x0 + [dt / 2, 0.0], x0 + [0.0, dp / 2]])
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "xatol": ANGLE_TOL,
            "fatol": 1e-14,
            "maxfev": MAX_EVALS,
        },
    )
    evals += int(res.nfev)
    if res.fun < best:
        best = float(res.fun)
        x0 = res.x
    other = partial_trace(rho12, [side])
    j = von_neumann_entropy(other) - best
    return j, MeasurementBasis.normalized(x0[0], x0[1]), evals


def discord(rho12, side):
    rho12 = _check_two_qubit(rho12)
    _check_side(side)
    mi = mutual_information(rho12)
    j, basis, evals = classical_correlation(rho12, side)
    raw = mi - j
    value = 0.0 if CLAMP_FLOOR <= raw < 0 else raw
    return DiscordReport(mi, j, value, raw, basis, side, evals)


def is_classically_correlated(rho12, tol=1e-6):
    return all(discord(rho12, side).discord <= tol for side in (0, 1))


def classify_classical_quantum(rho12, tol=1e-6):
    """Label by which measured side leaves zero discord.

    ``classical-quantum`` means measuring qubit 0 costs nothing while
    measuring qubit 1 does.
    """
    return classify_pair(discord(rho12, 0).discord, discord(rho12, 1).discord, tol)


def classify_pair(discord0, discord1, tol=1e-6):
    """Classification from the discords measured on qubit 0 and on qubit 1."""
    d0 = discord0 <= tol
    d1 = discord1 <= tol
    if d0 and d1:
        return CLASSICAL
    if d0:
        return CLASSICAL_QUANTUM
    if d1:
        return QUANTUM_CLASSICAL
    return FULLY_QUANTUM
