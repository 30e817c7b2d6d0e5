"""Two sequential spin-1/2 decays treated as a single two-outcome channel.

A hyperon mu decays to a hyperon nu which decays to a baryon; the composed
process is again an imperfect spin measurement, but its Kraus pair is NOT
the product of the single-decay pairs (after the first decay the spin and
momentum degrees of freedom are correlated).  With normalized amplitudes
(|S|^2 + |P|^2 = 1 per decay) the joint intensity is ``tau0 + tau . s``:

    tau0 = 1 + alpha_mu alpha_nu (n_mu . n_nu)
    tau  = (alpha_mu + alpha_nu (1 - gamma_mu) (n_mu . n_nu)) n_mu
           + alpha_nu gamma_mu n_nu + alpha_nu beta_mu (n_mu x n_nu)

The coefficient of n_nu is the signed gamma of the first decay, which
equals its predictability for every parity-preference sign gamma > 0 (all
bundled channels except Sigma+ -> n pi+); the signed form is what the
operator product Tr(T_nu T_mu rho T_mu^dag T_nu^dag) gives and is verified
against it in the tests.

Both daughter directions are expressed in one common frame; the formulas
depend only on the invariants n_mu . n_nu and n_mu x n_nu, so no boost or
rotation chain is modeled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decay import DecayParameters
from .sphere import require_unit

FOUR_PI_SQ = (4.0 * np.pi) ** 2


@dataclass(frozen=True)
class CascadeKraus:
    """Quantization data of a two-step decay at fixed daughter directions."""

    tau0: float
    tau: np.ndarray
    omega_plus: float
    omega_minus: float
    n_mu: np.ndarray
    n_nu: np.ndarray

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float)
        if self.tau0 <= 0.0:
            raise ValueError(f"tau0 = {self.tau0} must be positive")
        if np.linalg.norm(tau) > self.tau0 * (1.0 + 1e-12):
            raise ValueError(
                f"|tau| = {np.linalg.norm(tau):.6g} exceeds tau0 = {self.tau0:.6g}"
            )
        expected = (1.0 + np.linalg.norm(tau) / self.tau0) / 2.0
        if abs(self.omega_plus - expected) > 1e-12 or abs(
            self.omega_plus + self.omega_minus - 1.0
        ) > 1e-12:
            raise ValueError("outcome probabilities inconsistent with (tau0, tau)")
        for name in ("tau", "n_mu", "n_nu"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def cascade_tau(
    mu: DecayParameters, nu: DecayParameters, n_mu, n_nu
) -> tuple[float, np.ndarray]:
    """(tau0, tau) of the composed channel, normalized amplitudes."""
    n_mu = require_unit(n_mu, name="n_mu")
    n_nu = require_unit(n_nu, name="n_nu")
    cos_mn = float(np.dot(n_mu, n_nu))
    tau0 = 1.0 + mu.alpha * nu.alpha * cos_mn
    tau = (
        (mu.alpha + nu.alpha * (1.0 - mu.gamma) * cos_mn) * n_mu
        + nu.alpha * mu.gamma * n_nu
        + nu.alpha * mu.beta * np.cross(n_mu, n_nu)
    )
    return tau0, tau


def cascade_kraus(mu: DecayParameters, nu: DecayParameters, n_mu, n_nu) -> CascadeKraus:
    tau0, tau = cascade_tau(mu, nu, n_mu, n_nu)
    ratio = np.linalg.norm(tau) / tau0
    return CascadeKraus(
        tau0=tau0,
        tau=tau,
        omega_plus=(1.0 + ratio) / 2.0,
        omega_minus=(1.0 - ratio) / 2.0,
        n_mu=np.asarray(n_mu, dtype=float),
        n_nu=np.asarray(n_nu, dtype=float),
    )


def cascade_pdf(mu: DecayParameters, nu: DecayParameters, s, n_mu, n_nu) -> float:
    """Joint density of the two daughter directions, normalized over both spheres.

    Proportional to tau0 + tau . s; the normalization constant is (4 pi)^2
    because every s- and direction-linear term averages to zero.
    """
    s = np.asarray(s, dtype=float)
    if np.linalg.norm(s) > 1.0 + 1e-12:
        raise ValueError(f"|s| = {np.linalg.norm(s):.6g} exceeds 1")
    tau0, tau = cascade_tau(mu, nu, n_mu, n_nu)
    return float((tau0 + np.dot(tau, s)) / FOUR_PI_SQ)


def large_predictability_axis(
    mu: DecayParameters, nu: DecayParameters, n_mu, n_nu
) -> np.ndarray:
    """Approximate quantization axis alpha_mu n_mu + alpha_nu n_nu.

    Good when the first decay's predictability is close to 1 (the
    (1 - P_mu) and beta_mu terms are then small); diagnostic only, compare
    with the exact tau from :func:`cascade_tau`.
    """
    n_mu = require_unit(n_mu, name="n_mu")
    n_nu = require_unit(n_nu, name="n_nu")
    return mu.alpha * n_mu + nu.alpha * n_nu


def conditional_axis(mu: DecayParameters, nu: DecayParameters, s, n_mu) -> np.ndarray:
    """Axis b of the second direction's conditional density (1 + b.n_nu)/4pi.

    Conditioning the joint density on the first daughter direction leaves a
    density linear in n_nu; this is what the cascade sampler draws from.
    """
    n_mu = require_unit(n_mu, name="n_mu")
    s = np.asarray(s, dtype=float)
    weight = 1.0 + mu.alpha * np.dot(n_mu, s)
    vec = nu.alpha * (
        (mu.alpha + (1.0 - mu.gamma) * np.dot(n_mu, s)) * n_mu
        + mu.gamma * s
        + mu.beta * np.cross(s, n_mu)
    )
    return vec / weight
