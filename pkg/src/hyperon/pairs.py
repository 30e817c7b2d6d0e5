"""Hyperon-antihyperon pair analysis: joint distribution, witness, simplex.

Produced pairs are modeled as the antisymmetric Bell state (any other
maximally entangled choice is a local unitary away); each side's decay acts
as an imperfect spin measurement with analyzing power alpha, so every spin
correlation is scaled by k = alpha alpha-bar.  The joint daughter-direction
density for the singlet is (1/(4 pi)^2)(1 - k n1.n2), entanglement is
witnessed by 1/3 - k < 0, and in the magic-simplex picture the accessible
correlation tensor shrinks by k.

Estimators consume plain (N, 3) direction arrays, so event batches can be
split and merged by weighted means.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qcore import DensityMatrix, PAULI, as_density, pure_state, tensor

PSI_MINUS_KET = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)

_MIN_EVENTS = 100


def psi_minus_state() -> DensityMatrix:
    """Projector onto the antisymmetric Bell state."""
    return pure_state(PSI_MINUS_KET)


def _pauli_correlation_operator(c) -> np.ndarray:
    """sum_i c_i sigma_i x sigma_i."""
    out = np.zeros((4, 4), dtype=complex)
    for ci, sigma in zip(c, PAULI):
        out += ci * tensor(sigma, sigma)
    return out


@dataclass(frozen=True)
class PairModel:
    """Signed analyzing powers of the two decays and the initial two-qubit state."""

    alpha_L: float
    alpha_Lbar: float
    initial: DensityMatrix = field(default_factory=psi_minus_state)

    def __post_init__(self):
        if abs(self.alpha_L) > 1.0 or abs(self.alpha_Lbar) > 1.0:
            raise ValueError("analyzing powers must lie in [-1, 1]")
        if self.initial.dim != 4:
            raise ValueError("initial state must be a two-qubit density matrix")

    @property
    def k(self) -> float:
        return self.alpha_L * self.alpha_Lbar


def joint_pdf(model: PairModel, n1, n2) -> float:
    """Joint density of the two daughter directions, normalized on both spheres.

    Computed from the channel form
    (1/(4 pi)^2) Tr[(I + a1 n1.sigma) x (I + a2 n2.sigma) rho]; for the
    default singlet state this reduces to (1/(4 pi)^2)(1 - k n1.n2).
    """
    n1 = np.asarray(n1, dtype=float)
    n2 = np.asarray(n2, dtype=float)
    for name, n in (("n1", n1), ("n2", n2)):
        if abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise ValueError(f"{name} is not a unit vector")
    eff1 = np.eye(2, dtype=complex) + model.alpha_L * np.tensordot(n1, PAULI, axes=1)
    eff2 = np.eye(2, dtype=complex) + model.alpha_Lbar * np.tensordot(n2, PAULI, axes=1)
    val = np.trace(tensor(eff1, eff2) @ model.initial.matrix).real
    return float(val / (4.0 * np.pi) ** 2)


def witness_operator(scale: float = 1.0) -> np.ndarray:
    """(1/3)(I x I + scale * sum_i sigma_i x sigma_i), optimal for the singlet."""
    return (np.eye(4, dtype=complex) + scale * _pauli_correlation_operator([1.0, 1.0, 1.0])) / 3.0


def witness_value(model: PairModel) -> float:
    """Scaled witness expectation 1/3 - k; negative means entanglement detected."""
    return 1.0 / 3.0 - model.k


def _paired_directions(n1, n2) -> tuple[np.ndarray, np.ndarray]:
    n1 = np.asarray(n1, dtype=float)
    n2 = np.asarray(n2, dtype=float)
    if n1.ndim != 2 or n1.shape[1] != 3 or n1.shape != n2.shape:
        raise ValueError("expected matching (N, 3) direction arrays")
    if n1.shape[0] < _MIN_EVENTS:
        raise ValueError(f"need at least {_MIN_EVENTS} events, got {n1.shape[0]}")
    return n1, n2


def witness_estimate(n1, n2) -> tuple[float, float]:
    """Witness estimate and its standard error from paired direction samples.

    The singlet moment identity E[n1.n2] = -k/3 turns the witness 1/3 - k
    into 1/3 + 3 E[n1.n2]; the error is the plug-in standard error of the
    sample mean.
    """
    n1, n2 = _paired_directions(n1, n2)
    dots = np.einsum("ij,ij->i", n1, n2)
    value = 1.0 / 3.0 + 3.0 * dots.mean()
    stderr = 3.0 * dots.std(ddof=1) / np.sqrt(dots.size)
    return float(value), float(stderr)


def correlation_estimate(n1, n2, model: PairModel | None = None, renormalize: bool = False) -> np.ndarray:
    """Spin-correlation matrix estimate <sigma_i x sigma_j> from direction samples.

    Raw mode returns M_ij = 9 mean(n1_i n2_j), the direction-moment estimate
    of the k-scaled correlations (for the singlet: -k on the diagonal).
    Renormalized mode divides by alpha_L alpha_Lbar so the singlet gives
    -identity; the renormalized numbers presuppose the analyzing powers and
    are therefore not admissible inputs to a Bell test.
    """
    n1, n2 = _paired_directions(n1, n2)
    m = 9.0 * (n1[:, :, None] * n2[:, None, :]).mean(axis=0)
    if renormalize:
        if model is None or model.k == 0.0:
            raise ValueError("renormalization requires a model with nonzero analyzing powers")
        m = m / model.k
    return m


@dataclass(frozen=True)
class SimplexPoint:
    """Diagonal (c1, c2, c3) of the correlation tensor of a locally mixed state."""

    c1: float
    c2: float
    c3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3])


def simplex_state(p: SimplexPoint) -> np.ndarray:
    """The two-qubit matrix (1/4)(I + sum_i c_i sigma_i x sigma_i)."""
    return (np.eye(4, dtype=complex) + _pauli_correlation_operator(p.as_array())) / 4.0


def simplex_shrink(p: SimplexPoint, k: float) -> SimplexPoint:
    """Scale the correlation diagonal by k (imperfect-measurement shrinking)."""
    return SimplexPoint(k * p.c1, k * p.c2, k * p.c3)


def in_state_tetrahedron(p: SimplexPoint) -> bool:
    """Whether (c1, c2, c3) corresponds to a positive semidefinite state."""
    eigs = np.linalg.eigvalsh(simplex_state(p))
    return bool(eigs.min() >= -1e-12)


def is_separable_point(p: SimplexPoint) -> bool:
    """Octahedron criterion |c1| + |c2| + |c3| <= 1 for points inside the tetrahedron.

    The comparison is strict so that the separability boundary and the zero
    of the scaled witness coincide bit for bit at the 1/3 threshold.
    """
    if not in_state_tetrahedron(p):
        raise ValueError(f"{p} lies outside the state space")
    return bool(np.abs(p.as_array()).sum() <= 1.0)


def is_ppt(rho) -> bool:
    """Positive partial transpose check; for two qubits PPT iff separable."""
    rho = as_density(rho)
    if rho.dim != 4:
        raise ValueError("PPT cross-check is implemented for two qubits only")
    r = rho.matrix.reshape(2, 2, 2, 2)
    pt = r.transpose(0, 3, 2, 1).reshape(4, 4)
    return bool(np.linalg.eigvalsh(pt).min() >= -1e-12)
