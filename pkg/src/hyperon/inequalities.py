"""Bell expressions in CH probability form and the Mermin-Peres square.

The probability model is the singlet with both spin measurements scaled by
the analyzing powers: joint (+,+) probability (1 - k a.b)/4 and singles 1/2.
Under local realism each expression is bounded by 0; the inequalities are
linear in k at fixed settings, so the optimal settings do not depend on k
and every expression has a sharp violation threshold k*.

Raw (k-scaled) probabilities are the only admissible inputs here: dividing
out the analyzing powers presupposes quantum mechanics and is confined to
the pair-analysis estimators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .pairs import psi_minus_state
from .qcore import PAULI, tensor

MERMIN_PERES_CLASSICAL_BOUND = 4.0
# Published equal-alpha contextuality claim; the displayed formula's own root
# is ~0.916 (equal_alpha_contextuality_threshold), and the two disagree.
PUBLISHED_EQUAL_ALPHA_THRESHOLD = 0.88


@dataclass(frozen=True)
class InequalitySpec:
    """Coefficients of one CH-form Bell expression, classical bound 0."""

    name: str
    joint: np.ndarray       # (n_a, n_b) coefficients of Prob(a_i, b_j)
    singles_a: np.ndarray   # coefficients of Prob(a_i)
    singles_b: np.ndarray   # coefficients of Prob(b_j)

    def __post_init__(self):
        joint = np.asarray(self.joint, dtype=float)
        sa = np.asarray(self.singles_a, dtype=float)
        sb = np.asarray(self.singles_b, dtype=float)
        if joint.shape != (sa.size, sb.size):
            raise ValueError("coefficient table shapes are inconsistent")
        for name, arr in (("joint", joint), ("singles_a", sa), ("singles_b", sb)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_a(self) -> int:
        return self.singles_a.size

    @property
    def n_b(self) -> int:
        return self.singles_b.size


I2 = InequalitySpec(
    "I2",
    joint=[[1, 1], [1, -1]],
    singles_a=[-1, 0],
    singles_b=[-1, 0],
)

I3 = InequalitySpec(
    "I3",
    joint=[[1, 1, 1], [1, 1, -1], [1, -1, 0]],
    singles_a=[-1, 0, 0],
    singles_b=[-2, -1, 0],
)

I4 = InequalitySpec(
    "I4",
    joint=[[1, 1, 1, 1], [1, 1, 1, -1], [1, 1, -1, 0], [1, -1, 0, 0]],
    singles_a=[-1, 0, 0, 0],
    singles_b=[-3, -2, -1, 0],
)

_SPECS = {s.name: s for s in (I2, I3, I4)}


def inequality(name: str) -> InequalitySpec:
    try:
        return _SPECS[name]
    except KeyError:
        raise ValueError(f"unknown inequality {name!r}; choose from {sorted(_SPECS)}") from None


@dataclass(frozen=True)
class BellSettings:
    """Measurement directions for the two sides."""

    a: np.ndarray  # (n_a, 3) unit vectors
    b: np.ndarray  # (n_b, 3) unit vectors

    def __post_init__(self):
        for name in ("a", "b"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 2 or arr.shape[1] != 3:
                raise ValueError(f"settings {name} must have shape (n, 3)")
            norms = np.linalg.norm(arr, axis=1)
            if np.max(np.abs(norms - 1.0)) > 1e-12:
                raise ValueError(f"settings {name} contain non-unit vectors")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class ProbModel:
    """Correlation scale k = alpha alpha-bar of the measured singlet."""

    k: float

    def __post_init__(self):
        if not 0.0 <= self.k <= 1.0:
            raise ValueError(f"k = {self.k} outside [0, 1]")


def prob_joint(model: ProbModel, a, b) -> float:
    """Probability that both sides give the plus result along a and b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float((1.0 - model.k * np.dot(a, b)) / 4.0)


def prob_single(model: ProbModel, direction=None) -> float:
    """Single-side plus probability; 1/2 for the locally mixed singlet."""
    return 0.5


def evaluate(spec: InequalitySpec, settings: BellSettings, model: ProbModel) -> float:
    """Value of the Bell expression at the given settings."""
    if settings.a.shape[0] != spec.n_a or settings.b.shape[0] != spec.n_b:
        raise ValueError(
            f"{spec.name} needs {spec.n_a}+{spec.n_b} settings, "
            f"got {settings.a.shape[0]}+{settings.b.shape[0]}"
        )
    dots = settings.a @ settings.b.T
    joint = ((1.0 - model.k * dots) / 4.0 * spec.joint).sum()
    singles = 0.5 * (spec.singles_a.sum() + spec.singles_b.sum())
    return float(joint + singles)


def _settings_from_angles(x: np.ndarray, n_a: int, n_b: int) -> BellSettings:
    thetas = x[0::2]
    phis = x[1::2]
    st = np.sin(thetas)
    vecs = np.column_stack([st * np.cos(phis), st * np.sin(phis), np.cos(thetas)])
    return BellSettings(a=vecs[:n_a], b=vecs[n_a:])


def maximize(
    spec: InequalitySpec, model: ProbModel, n_starts: int = 32, seed: int = 0
) -> tuple[float, BellSettings]:
    """Maximize the expression over all measurement directions.

    Multistart Powell search over the spherical angles of every setting;
    deterministic for a fixed seed, ties resolved by the first start that
    attains the best value.
    """
    n_vec = spec.n_a + spec.n_b
    rng = np.random.default_rng(seed)

    def negated(x):
        return -evaluate(spec, _settings_from_angles(x, spec.n_a, spec.n_b), model)

    best_val = -np.inf
    best_x = None
    for _ in range(n_starts):
        x0 = np.empty(2 * n_vec)
        x0[0::2] = np.arccos(rng.uniform(-1.0, 1.0, n_vec))
        x0[1::2] = rng.uniform(0.0, 2.0 * np.pi, n_vec)
        res = optimize.minimize(
            negated, x0, method="Powell", options={"ftol": 1e-9, "xtol": 1e-9, "maxiter": 4000}
        )
        if -res.fun > best_val + 1e-12:
            best_val = -res.fun
            best_x = res.x
    return float(best_val), _settings_from_angles(best_x, spec.n_a, spec.n_b)


def maximize_at_settings(spec: InequalitySpec, model: ProbModel, warm: BellSettings) -> float:
    """Polish a known optimum at a different k; the optimal geometry is k-independent."""

    def negated(x):
        return -evaluate(spec, _settings_from_angles(x, spec.n_a, spec.n_b), model)

    vecs = np.vstack([warm.a, warm.b])
    x0 = np.empty(2 * vecs.shape[0])
    x0[0::2] = np.arccos(np.clip(vecs[:, 2], -1.0, 1.0))
    x0[1::2] = np.arctan2(vecs[:, 1], vecs[:, 0])
    res = optimize.minimize(
        negated, x0, method="Powell", options={"ftol": 1e-9, "xtol": 1e-9, "maxiter": 4000}
    )
    return float(-res.fun)


def threshold(spec: InequalitySpec, tol: float = 1e-4, seed: int = 0) -> float:
    """Smallest k in [0, 1] where the maximal value crosses zero, by bisection.

    The maximum is verified to be increasing on a coarse k-grid before
    bisecting; raises if the maximal value never changes sign on [0, 1].
    """
    top, settings = maximize(spec, ProbModel(1.0), seed=seed)

    def max_value(k: float) -> float:
        return maximize_at_settings(spec, ProbModel(k), settings)

    grid = [max_value(k) for k in (0.0, 0.25, 0.5, 0.75, 1.0)]
    if any(hi < lo - 1e-9 for lo, hi in zip(grid, grid[1:])):
        raise ValueError(f"maximum of {spec.name} is not monotone in k: {grid}")
    lo_val, hi_val = grid[0], grid[-1]
    if lo_val > 0.0 or hi_val <= 0.0:
        raise ValueError(
            f"no violation threshold for {spec.name} on [0, 1]: "
            f"max at k=0 is {lo_val:.6g}, at k=1 is {hi_val:.6g}"
        )
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if max_value(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2.0


def contextuality_value(alpha_L: float, alpha_Lbar: float) -> float:
    """Mermin-Peres expression with both sides' observables scaled by their alphas.

    (a^2 + b^2)^2 + 2 a^3 b^3; contextuality would show as a value above the
    classical bound 4.
    """
    for v in (alpha_L, alpha_Lbar):
        if abs(v) > 1.0:
            raise ValueError("analyzing powers must lie in [-1, 1]")
    return float((alpha_L**2 + alpha_Lbar**2) ** 2 + 2.0 * alpha_L**3 * alpha_Lbar**3)


def equal_alpha_contextuality_threshold() -> float:
    """Root of (2 a^2)^2 + 2 a^6 = 4: the equal-alpha value where violation starts."""
    return float(
        optimize.brentq(lambda a: contextuality_value(a, a) - MERMIN_PERES_CLASSICAL_BOUND, 0.0, 1.0)
    )


_SQUARE = (
    (("x", None), (None, "x"), ("x", "x")),
    ((None, "y"), ("y", None), ("y", "y")),
    (("x", "y"), ("y", "x"), ("z", "z")),
)
_IDX = {"x": 0, "y": 1, "z": 2}


def _square_observable(labels, scaling: float) -> np.ndarray:
    """Two-qubit observable with each non-identity factor scaled."""
    left, right = labels
    a = np.eye(2, dtype=complex) if left is None else scaling * PAULI[_IDX[left]]
    b = np.eye(2, dtype=complex) if right is None else scaling * PAULI[_IDX[right]]
    return tensor(a, b)


def mermin_peres_quantum_value(scaling: float) -> float:
    """Row/column product expectations of the magic square on the singlet.

    Builds the 3x3 square of two-qubit observables, multiplies the three
    observables of each of the six contexts, takes expectations on the
    singlet and returns the standard sum (rows and first two columns with
    plus sign, last column with minus).  At scaling 1 the products are all
    proportional to the identity and the value is 6, independent of state.
    """
    if not 0.0 <= scaling <= 1.0:
        raise ValueError("scaling must lie in [0, 1]")
    square = [[_square_observable(lbl, scaling) for lbl in row] for row in _SQUARE]
    rho = psi_minus_state().matrix

    def expect(product: np.ndarray) -> float:
        return float(np.trace(product @ rho).real)

    value = 0.0
    for i in range(3):
        value += expect(square[i][0] @ square[i][1] @ square[i][2])
    for j in range(2):
        value += expect(square[0][j] @ square[1][j] @ square[2][j])
    value -= expect(square[0][2] @ square[1][2] @ square[2][2])
    return value
