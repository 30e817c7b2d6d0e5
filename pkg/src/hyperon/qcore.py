"""Dense complex-matrix foundation for small spin systems.

Density matrices, generalized Gell-Mann (Bloch) expansions, tensor products,
partial traces and the generic two-amplitude interference intensity with its
visibility/predictability split.  Everything here is a pure function over
immutable values; dimensions of interest are small (d <= 4, d <= 16 for
two-particle systems) so all storage is dense.

Conventions
-----------
* Basis: generalized Hermitian traceless Gell-Mann matrices in
  symmetric / antisymmetric / diagonal order, normalized to
  ``Tr(G_i G_j) = 2 delta_ij``.  For d=2 this is exactly (sigma_x,
  sigma_y, sigma_z).
* Bloch expansion: ``rho = (1/d) (I + b . G)`` with
  ``b_i = (d/2) Tr(G_i rho)``; for d=2 the coefficients coincide with the
  usual ``Tr(sigma_i rho)``.  A maximal (pure-state) vector has
  ``|b| = sqrt(d(d-1)/2)``.
* Matrix norm used for visibility/predictability: Frobenius norm scaled so
  that ``||I|| = 1`` in every dimension, i.e. ``||T|| = ||T||_F / sqrt(d)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_EIG_TOL = -1e-10

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
PAULI.setflags(write=False)


def pauli_dot(v) -> np.ndarray:
    """Return ``v . sigma`` for a real 3-vector v (2x2 complex matrix)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    return np.tensordot(v, PAULI, axes=1)


@lru_cache(maxsize=8)
def gell_mann_basis(d: int) -> np.ndarray:
    """Traceless Hermitian basis of shape (d^2 - 1, d, d), Tr(G_i G_j) = 2 d_ij.

    Order: symmetric off-diagonal pairs, antisymmetric pairs, then the
    diagonal matrices; for d=2 this returns the Pauli matrices.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    mats = []
    for k in range(1, d):
        for j in range(k):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = 1.0
            mats.append(m)
    for k in range(1, d):
        for j in range(k):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1.0j
            m[k, j] = 1.0j
            mats.append(m)
    for l in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        m[np.arange(l), np.arange(l)] = 1.0
        m[l, l] = -float(l)
        mats.append(m * np.sqrt(2.0 / (l * (l + 1))))
    basis = np.stack(mats, axis=0)
    basis.setflags(write=False)
    return basis


def _as_square(mat, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(mat, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.view(float))):
        raise ValueError(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix: Hermitian, unit trace, positive semidefinite."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = _as_square(self.matrix, "density matrix").copy()
        herm = np.max(np.abs(mat - mat.conj().T))
        if herm > HERMITICITY_TOL:
            raise ValueError(f"not Hermitian: max |rho - rho^dag| = {herm:.3e}")
        tr = mat.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace is {tr:.15g}, expected 1")
        lo = float(np.linalg.eigvalsh(mat).min())
        if lo < PSD_EIG_TOL:
            raise ValueError(f"not positive semidefinite: min eigenvalue {lo:.3e}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def as_density(rho) -> DensityMatrix:
    """Coerce an array or DensityMatrix to a validated DensityMatrix."""
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix(np.asarray(rho, dtype=complex))


def maximally_mixed(d: int) -> DensityMatrix:
    return DensityMatrix(np.eye(d, dtype=complex) / d)


def pure_state(ket) -> DensityMatrix:
    """Projector |psi><psi| onto a (normalized) state vector."""
    v = np.asarray(ket, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("cannot project onto the zero vector")
    v = v / n
    return DensityMatrix(np.outer(v, v.conj()))


@dataclass(frozen=True)
class Projector:
    """Validated projector: Hermitian with P^2 = P."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = _as_square(self.matrix, "projector").copy()
        if np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_TOL:
            raise ValueError("projector is not Hermitian")
        if np.max(np.abs(mat @ mat - mat)) > HERMITICITY_TOL:
            raise ValueError("matrix is not idempotent")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True)
class BlochVector:
    """Coefficient vector of a density matrix in the Gell-Mann basis."""

    dim: int
    components: np.ndarray = field()

    def __post_init__(self):
        b = np.asarray(self.components, dtype=float).copy()
        if b.shape != (self.dim**2 - 1,):
            raise ValueError(
                f"expected {self.dim**2 - 1} components for dim {self.dim}, got shape {b.shape}"
            )
        if not np.all(np.isfinite(b)):
            raise ValueError("components must be finite")
        r_max = np.sqrt(self.dim * (self.dim - 1) / 2.0)
        if np.linalg.norm(b) > r_max + 1e-9:
            raise ValueError(
                f"|b| = {np.linalg.norm(b):.6g} exceeds the pure-state radius {r_max:.6g}"
            )
        b.setflags(write=False)
        object.__setattr__(self, "components", b)


def bloch_expand(rho) -> BlochVector:
    """Expand rho in the Gell-Mann basis; inverse of :func:`bloch_compose`.

    Coefficients are scaled so that ``rho = (1/d)(I + b . G)`` holds exactly;
    for d=2 they equal the familiar ``Tr(sigma_i rho)``.
    """
    rho = as_density(rho)
    d = rho.dim
    basis = gell_mann_basis(d)
    b = (d / 2.0) * np.einsum("kij,ji->k", basis, rho.matrix).real
    return BlochVector(dim=d, components=b)


def bloch_compose(b: BlochVector) -> DensityMatrix:
    """Build ``(1/d)(I + b . G)``; rejects vectors giving a non-PSD matrix."""
    d = b.dim
    mat = (np.eye(d, dtype=complex) + np.tensordot(b.components, gell_mann_basis(d), axes=1)) / d
    lo = float(np.linalg.eigvalsh(mat).min())
    if lo < PSD_EIG_TOL:
        raise ValueError(
            f"Bloch vector of length {np.linalg.norm(b.components):.6g} gives "
            f"min eigenvalue {lo:.3e}; not a physical state"
        )
    return DensityMatrix(mat)


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(rho, dims: tuple[int, int], trace_out: int) -> DensityMatrix:
    """Reduced state of a bipartite density matrix.

    Parameters
    ----------
    rho : array or DensityMatrix of dimension dims[0] * dims[1]
    dims : (d1, d2) factorization of the total dimension
    trace_out : 0 to trace out the first subsystem, 1 for the second
    """
    rho = as_density(rho)
    d1, d2 = dims
    if d1 * d2 != rho.dim:
        raise ValueError(f"dims {dims} do not factor dimension {rho.dim}")
    if trace_out not in (0, 1):
        raise ValueError("trace_out must be 0 or 1")
    r = rho.matrix.reshape(d1, d2, d1, d2)
    if trace_out == 0:
        red = np.einsum("ijik->jk", r)
    else:
        red = np.einsum("jiki->jk", r)
    return DensityMatrix(red)


def two_amplitude_intensity(t_a, t_b, rho) -> float:
    """Intensity ``Tr[(Ta + Tb) rho (Ta + Tb)^dag]`` of a two-amplitude process.

    The result must be real (to 1e-10) and nonnegative for any PSD rho.
    """
    t_a = _as_square(t_a, "Ta")
    t_b = _as_square(t_b, "Tb")
    rho = as_density(rho)
    if t_a.shape != t_b.shape or t_a.shape[0] != rho.dim:
        raise ValueError(
            f"dimension mismatch: Ta {t_a.shape}, Tb {t_b.shape}, rho dim {rho.dim}"
        )
    t = t_a + t_b
    val = np.trace(t @ rho.matrix @ t.conj().T)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"intensity has imaginary part {val.imag:.3e}")
    if val.real < -1e-10:
        raise ValueError(f"intensity is negative: {val.real:.3e}")
    return float(val.real)


def amplitude_norm(t) -> float:
    """Frobenius norm scaled so the identity has norm 1: ||T||_F / sqrt(d)."""
    t = _as_square(t, "T")
    return float(np.linalg.norm(t) / np.sqrt(t.shape[0]))


def complementarity_of(t_a, t_b) -> tuple[float, float]:
    """Visibility and predictability of a two-amplitude process.

    Returns ``(V, P)`` with ``V = 2 |Ta| |Tb| / (|Ta|^2 + |Tb|^2)`` and
    ``P = | |Ta|^2 - |Tb|^2 | / (|Ta|^2 + |Tb|^2)`` in the scaled Frobenius
    norm; they satisfy V^2 + P^2 = 1.
    """
    na = amplitude_norm(t_a)
    nb = amplitude_norm(t_b)
    total = na**2 + nb**2
    if total == 0.0:
        raise ValueError("both amplitudes vanish")
    visibility = 2.0 * na * nb / total
    predictability = abs(na**2 - nb**2) / total
    return visibility, predictability
