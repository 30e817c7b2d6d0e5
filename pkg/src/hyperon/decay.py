"""Spin-1/2 hyperon nonleptonic decay as a two-amplitude process.

A decay with S-wave (parity violating) and P-wave (parity conserving)
amplitudes acts on the parent spin through the transition matrix
``T = S I + P n.sigma`` where n is the daughter momentum direction.  The
same process, viewed as an open channel, is a two-outcome incomplete spin
measurement: with probability ``(1 +/- alpha)/2`` the spin is projected
along ``+/- n``.  This module holds the amplitude <-> parameter
conversions, the Kraus decomposition and the normalized angular density.

Phase conventions: ``alpha + i beta`` has phase ``chi_SP`` (the S-P phase
shift), and ``beta + i gamma`` has phase ``pi/2 - phi``.  `DecayParameters`
stores ``chi_SP = atan2(beta, alpha)`` on the full circle; published tables
report it modulo pi (see :func:`chi_sp_mod_pi`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import PAULI, as_density, pauli_dot
from .sphere import require_unit

_PARAM_TOL = 1e-12


@dataclass(frozen=True)
class DecayAmplitudes:
    """S-wave and P-wave amplitudes; at least one must be nonzero."""

    S: complex
    P: complex

    def __post_init__(self):
        if self.norm_sq == 0.0:
            raise ValueError("S and P cannot both vanish")

    @property
    def norm_sq(self) -> float:
        return abs(self.S) ** 2 + abs(self.P) ** 2


@dataclass(frozen=True)
class DecayParameters:
    """Asymmetry parameters (alpha, beta, gamma) and their information-theoretic face.

    alpha = 2 Re(S* P) / (|S|^2 + |P|^2)
    beta  = 2 Im(S* P) / (|S|^2 + |P|^2) = sqrt(1 - alpha^2) sin(phi)
    gamma = (|S|^2 - |P|^2) / (|S|^2 + |P|^2) = sqrt(1 - alpha^2) cos(phi)
    visibility = sqrt(alpha^2 + beta^2), predictability = |gamma|,
    chi_sp = atan2(beta, alpha).
    """

    alpha: float
    beta: float
    gamma: float
    phi: float
    chi_sp: float
    visibility: float
    predictability: float

    def __post_init__(self):
        a, b, g = self.alpha, self.beta, self.gamma
        checks = {
            "alpha^2+beta^2+gamma^2 = 1": a * a + b * b + g * g - 1.0,
            "V^2+P^2 = 1": self.visibility**2 + self.predictability**2 - 1.0,
            "alpha = V cos(chi_sp)": a - self.visibility * np.cos(self.chi_sp),
            "beta = V sin(chi_sp)": b - self.visibility * np.sin(self.chi_sp),
            "beta = sqrt(1-alpha^2) sin(phi)": b - np.sqrt(max(1.0 - a * a, 0.0)) * np.sin(self.phi),
            "gamma = sqrt(1-alpha^2) cos(phi)": g - np.sqrt(max(1.0 - a * a, 0.0)) * np.cos(self.phi),
            "predictability = |gamma|": self.predictability - abs(g),
        }
        for label, err in checks.items():
            if abs(err) > _PARAM_TOL:
                raise ValueError(f"inconsistent decay parameters: {label} off by {err:.3e}")


def chi_sp_mod_pi(params: DecayParameters) -> float:
    """S-P phase shift folded into (-pi/2, pi/2], the convention of published tables.

    Tables report |alpha| together with a principal-branch phase; the fold
    keeps tan(chi) = beta/alpha while dropping the overall amplitude sign.
    """
    chi = params.chi_sp
    if chi > np.pi / 2:
        chi -= np.pi
    elif chi <= -np.pi / 2:
        chi += np.pi
    return chi


def _build_params(alpha: float, beta: float, gamma: float) -> DecayParameters:
    visibility = float(np.hypot(alpha, beta))
    return DecayParameters(
        alpha=float(alpha),
        beta=float(beta),
        gamma=float(gamma),
        phi=float(np.arctan2(beta, gamma)),
        chi_sp=float(np.arctan2(beta, alpha)),
        visibility=visibility,
        predictability=abs(float(gamma)),
    )


def params_from_amplitudes(a: DecayAmplitudes) -> DecayParameters:
    """Standard decay parameters (alpha, beta, gamma, ...) from (S, P)."""
    n = a.norm_sq
    sp = np.conj(a.S) * a.P
    return _build_params(2.0 * sp.real / n, 2.0 * sp.imag / n, (abs(a.S) ** 2 - abs(a.P) ** 2) / n)


def params_from_alpha_phi(alpha: float, phi: float, gamma_sign: int | None = None) -> DecayParameters:
    """Parameters from the measured pair (alpha, phi).

    ``gamma_sign`` (+1 or -1), when given, must agree with the sign of
    cos(phi); it is carried by parameter files as an explicit cross-check
    since gamma's sign is not recoverable from visibility/predictability
    magnitudes alone.
    """
    if abs(alpha) > 1.0:
        raise ValueError(f"|alpha| = {abs(alpha)} exceeds 1")
    r = np.sqrt(1.0 - alpha * alpha)
    beta = r * np.sin(phi)
    gamma = r * np.cos(phi)
    if gamma_sign is not None:
        if gamma_sign not in (1, -1):
            raise ValueError("gamma_sign must be +1 or -1")
        if gamma != 0.0 and np.sign(gamma) != gamma_sign:
            raise ValueError(
                f"gamma_sign {gamma_sign:+d} contradicts cos(phi) = {np.cos(phi):.6g}"
            )
    return _build_params(alpha, beta, gamma)


def amplitudes_from_params(p: DecayParameters) -> DecayAmplitudes:
    """Reconstruct amplitudes with S real nonnegative and |S|^2 + |P|^2 = 1.

    Observables depend only on (alpha, beta, gamma), so the global phase and
    scale are fixed by this convention.
    """
    s_sq = (1.0 + p.gamma) / 2.0
    if s_sq <= 0.0:
        # pure P wave: gamma = -1, phase free; pick P = 1
        return DecayAmplitudes(S=0.0, P=1.0)
    s = np.sqrt(s_sq)
    return DecayAmplitudes(S=complex(s), P=(p.alpha + 1j * p.beta) / (2.0 * s))


@dataclass(frozen=True)
class DecayChannel:
    """One weak decay mode of a spin-1/2 hyperon."""

    parent: str
    daughters: tuple[str, str]
    branching: float
    params: DecayParameters
    spin: float = 0.5

    def __post_init__(self):
        if self.spin != 0.5:
            raise ValueError("only spin-1/2 channels can be constructed")
        if not 0.0 <= self.branching <= 1.0:
            raise ValueError(f"branching fraction {self.branching} outside [0, 1]")


@dataclass(frozen=True)
class KrausPair:
    """Two-outcome channel data: probabilities and quantization Bloch vectors.

    The channel projects the spin along ``w1 + w2`` with probability
    ``omega_plus`` and along ``w1 - w2`` with probability ``omega_minus``;
    for spin 1/2 the vectors satisfy w1 = 0 and |w1 +/- w2|^2 = 1.
    """

    omega_plus: float
    omega_minus: float
    w1: np.ndarray
    w2: np.ndarray

    def __post_init__(self):
        w1 = np.asarray(self.w1, dtype=float)
        w2 = np.asarray(self.w2, dtype=float)
        if abs(self.omega_plus + self.omega_minus - 1.0) > _PARAM_TOL:
            raise ValueError("outcome probabilities must sum to 1")
        if self.omega_plus < 0.0 or self.omega_minus < 0.0:
            raise ValueError("outcome probabilities must be nonnegative")
        if abs(np.dot(w1, w2)) > _PARAM_TOL:
            raise ValueError("quantization vectors must be orthogonal")
        for sign in (+1.0, -1.0):
            length_sq = float(np.dot(w1 + sign * w2, w1 + sign * w2))
            if abs(length_sq - 1.0) > _PARAM_TOL:  # s(2s+1) = 1 for s = 1/2
                raise ValueError(f"|w1 {'+' if sign > 0 else '-'} w2|^2 = {length_sq:.12g}, expected 1")
        w1.setflags(write=False)
        w2.setflags(write=False)
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)


def transition_matrix(a: DecayAmplitudes, n) -> np.ndarray:
    """Decay matrix ``T = S I + P n.sigma`` for daughter direction n."""
    n = require_unit(n)
    return a.S * np.eye(2, dtype=complex) + a.P * pauli_dot(n)


def spin_half_projector(direction) -> np.ndarray:
    """Projector (I + w.sigma)/2 onto the spin state along a unit vector."""
    w = require_unit(direction)
    return (np.eye(2, dtype=complex) + pauli_dot(w)) / 2.0


def kraus_decompose(a: DecayAmplitudes, n) -> KrausPair:
    """Two-outcome Kraus data of the decay: project along +/- n with (1 +/- alpha)/2."""
    n = require_unit(n)
    alpha = params_from_amplitudes(a).alpha
    return KrausPair(
        omega_plus=(1.0 + alpha) / 2.0,
        omega_minus=(1.0 - alpha) / 2.0,
        w1=np.zeros(3),
        w2=n,
    )


def kraus_operators(a: DecayAmplitudes, n) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian Kraus operators (K+, K-) with Tr(K+ rho K+) + Tr(K- rho K-) = Tr(T rho T^dag).

    K+- = sqrt(2 (|S|^2+|P|^2) omega_+-) Pi(+-n); the prefactor makes the
    pair reproduce the unnormalized two-amplitude intensity exactly, i.e.
    K+^2 + K-^2 = T^dag T.
    """
    pair = kraus_decompose(a, n)
    scale = 2.0 * a.norm_sq
    axis = pair.w1 + pair.w2
    k_plus = np.sqrt(scale * pair.omega_plus) * spin_half_projector(axis)
    k_minus = np.sqrt(scale * pair.omega_minus) * spin_half_projector(-axis)
    return k_plus, k_minus


def kraus_intensity(a: DecayAmplitudes, n, rho) -> float:
    """Intensity through the Kraus pair; equals Tr(T rho T^dag)."""
    k_plus, k_minus = kraus_operators(a, n)
    rho = as_density(rho).matrix
    val = np.trace(k_plus @ rho @ k_plus) + np.trace(k_minus @ rho @ k_minus)
    return float(val.real)


def angular_pdf(params: DecayParameters, s, n) -> float:
    """Normalized daughter-direction density ``(1/4pi)(1 + alpha s.n)``.

    ``s`` is the parent Bloch vector (|s| <= 1), ``n`` a unit direction.
    Integrates to 1 over the sphere; only the normalized shape is observable,
    the (|S|^2 + |P|^2) scale lives in the unnormalized intensity.
    """
    s = np.asarray(s, dtype=float)
    if s.shape != (3,):
        raise ValueError("polarization must be a 3-vector")
    if np.linalg.norm(s) > 1.0 + 1e-12:
        raise ValueError(f"|s| = {np.linalg.norm(s):.6g} exceeds 1")
    n = require_unit(n)
    return float((1.0 + params.alpha * np.dot(s, n)) / (4.0 * np.pi))


def spin_bloch(rho) -> np.ndarray:
    """Bloch 3-vector Tr(sigma rho) of a qubit state."""
    rho = as_density(rho)
    if rho.dim != 2:
        raise ValueError("spin Bloch vector is defined for qubits only")
    return np.einsum("kij,ji->k", PAULI, rho.matrix).real
