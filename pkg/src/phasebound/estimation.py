"""Monte-Carlo measurement sampling and maximum-likelihood phase estimation.

Estimation is local: the true phase is assumed to sit inside a known search
interval shorter than the likelihood period set by the generator's spectrum,
so the global phase ambiguity never enters.  Outcome sampling is multinomial
with a splittable counter-based seed scheme (one child stream per trial), so
results are reproducible and independent of execution order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryWarning, UsageError, ValidationError
from .metrology import classical_fisher, outcome_probabilities, validate_povm
from .opalg import HermitianOperator, PureState, evolve, hermitian_eigensystem, tensor_product
from .procedures import JointGenerator
from .states import _extreme_columns

RNG_ALGORITHM = "pcg64"  # numpy default_rng bit generator
GRID_POINTS = 1000
REFINE_TOL = 1e-8
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class TrialConfig:
    """Inputs of one Monte-Carlo estimation run."""

    phi_true: float
    shots_per_trial: int
    n_trials: int
    rng_seed: int
    povm: tuple
    search_interval: tuple[float, float]

    def __post_init__(self):
        if self.shots_per_trial < 1:
            raise ValidationError("shots_per_trial must be >= 1")
        if self.n_trials < 1:
            raise ValidationError("n_trials must be >= 1")
        povm = tuple(self.povm)
        validate_povm(list(povm))
        lo, hi = (float(self.search_interval[0]), float(self.search_interval[1]))
        if not lo < hi:
            raise ValidationError(f"search interval must satisfy lo < hi, got ({lo}, {hi})")
        if not lo <= self.phi_true <= hi:
            raise ValidationError(
                f"phi_true {self.phi_true} lies outside the search interval ({lo}, {hi})"
            )
        object.__setattr__(self, "povm", povm)
        object.__setattr__(self, "search_interval", (lo, hi))


@dataclass(frozen=True, eq=False)
class TrialResult:
    """Per-trial estimates plus the realized and predicted errors."""

    estimates: np.ndarray
    empirical_rmse: float
    predicted_crb: float
    rng_algorithm: str = RNG_ALGORITHM

    def __post_init__(self):
        est = np.asarray(self.estimates, dtype=float)
        est.setflags(write=False)
        object.__setattr__(self, "estimates", est)
        if self.empirical_rmse < 0:
            raise ValidationError("empirical_rmse must be >= 0")

    def to_dict(self) -> dict:
        return {
            "estimates": [float(x) for x in self.estimates],
            "empirical_rmse": self.empirical_rmse,
            "predicted_crb": self.predicted_crb,
            "rng_algorithm": self.rng_algorithm,
        }


def optimal_povm(gen: JointGenerator) -> list[HermitianOperator]:
    """Balanced two-outcome measurement of |h_max><h_min| + h.c.

    On probes confined to the plane of the two extreme eigenvectors this is
    the parity-type measurement whose statistics carry the full quantum
    Fisher information of the balanced superposition.
    """
    vec_min, vec_max = _extreme_columns(hermitian_eigensystem(gen.generator))
    cross = np.outer(vec_max, vec_min.conj())
    x = cross + cross.conj().T
    eye = np.eye(gen.dim)
    return [HermitianOperator((eye + x) / 2), HermitianOperator((eye - x) / 2)]


def tensor_power_povm(povm: list[HermitianOperator], n: int) -> list[HermitianOperator]:
    """n-fold tensor power: one outcome per length-n word of single-site outcomes."""
    if n < 1:
        raise UsageError("n must be >= 1")
    out = list(povm)
    for _ in range(n - 1):
        out = [tensor_product(a, b) for a in out for b in povm]
    return out


def sample_outcomes(state: PureState, povm, shots: int, seed) -> np.ndarray:
    """Multinomial outcome counts for the given probe and measurement.

    ``seed`` may be an integer or a numpy SeedSequence; equal seeds give
    identical counts.
    """
    if shots < 1:
        raise UsageError("shots must be >= 1")
    probs = outcome_probabilities(state, list(povm))
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"outcome probabilities sum to {total!r}, not 1")
    rng = np.random.default_rng(seed)
    return rng.multinomial(shots, probs / total)


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    # ties break toward the left end, keeping estimates deterministic
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (a + b) / 2


def mle_estimate(counts, model, interval: tuple[float, float]) -> float:
    """Maximize the multinomial log-likelihood of the counts over the interval.

    A 1000-point grid scan brackets the maximum (first occurrence wins, so
    exact ties resolve to the smaller phase), then golden-section search
    tightens the bracket to 1e-8.  A maximum on the interval edge raises
    BoundaryWarning since the true optimum may lie outside.
    """
    counts = np.asarray(counts, dtype=float)
    lo, hi = (float(interval[0]), float(interval[1]))
    if not lo < hi:
        raise UsageError(f"interval must satisfy lo < hi, got ({lo}, {hi})")

    def loglik(phi: float) -> float:
        p = np.clip(np.asarray(model(phi), dtype=float), 1e-300, None)
        return float(np.dot(counts, np.log(p)))

    grid = np.linspace(lo, hi, GRID_POINTS)
    values = np.array([loglik(phi) for phi in grid])
    best = int(np.argmax(values))
    if best in (0, GRID_POINTS - 1):
        warnings.warn(
            "likelihood maximum sits on the search-interval boundary; the interval may not "
            "contain the true phase",
            BoundaryWarning,
            stacklevel=2,
        )
    left = grid[max(best - 1, 0)]
    right = grid[min(best + 1, GRID_POINTS - 1)]
    return _golden_max(loglik, float(left), float(right), REFINE_TOL)


def precision_trial(gen: JointGenerator, state: PureState, config: TrialConfig) -> TrialResult:
    """Repeated sample-and-estimate rounds against a fixed true phase.

    Each trial draws its RNG stream from (rng_seed, trial_index), so the
    result does not depend on scheduling; the predicted error is the
    Cramer-Rao value 1/sqrt(shots * F) at the true phase.
    """
    if state.dim != gen.dim:
        raise UsageError(f"dimension mismatch: state {state.dim} vs generator {gen.dim}")
    if config.povm[0].dim != gen.dim:
        raise UsageError("POVM dimension does not match the generator")
    lo, hi = config.search_interval
    if gen.seminorm > 0 and hi - lo > 2 * math.pi / gen.seminorm:
        raise ValidationError(
            f"search interval width {hi - lo:g} exceeds the likelihood period "
            f"{2 * math.pi / gen.seminorm:g}; local estimation would be ambiguous"
        )

    def state_at(phi: float) -> PureState:
        return evolve(state, gen.generator, phi)

    def model(phi: float) -> np.ndarray:
        return outcome_probabilities(state_at(phi), list(config.povm))

    fisher = classical_fisher(list(config.povm), state_at, config.phi_true)
    if fisher <= 0:
        raise ValidationError("measurement carries no phase information at phi_true")
    truth = state_at(config.phi_true)
    estimates = np.empty(config.n_trials)
    for trial in range(config.n_trials):
        stream = np.random.SeedSequence(entropy=config.rng_seed, spawn_key=(trial,))
        counts = sample_outcomes(truth, config.povm, config.shots_per_trial, stream)
        estimates[trial] = mle_estimate(counts, model, config.search_interval)
    rmse = float(np.sqrt(np.mean((estimates - config.phi_true) ** 2)))
    crb = 1.0 / math.sqrt(config.shots_per_trial * fisher)
    return TrialResult(estimates, rmse, crb)
