"""Resource counts, precision bounds, Fisher information, error propagation.

Three resource counts are in play: the query count Q carried by the
generator, the standard deviation of the generator in the probe, and the
expectation of the generator above its ground state.  Each feeds its own
lower bound on the phase uncertainty; for the balanced extreme-eigenvector
superpositions all of them collapse to the same number.

Bounds that would be infinite (zero resource, e.g. an eigenstate probe or a
flat generator) are reported as the NO_SENSITIVITY sentinel instead of a
float so serialized reports stay finite and explicit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    NumericalIntegrityError,
    RelativeValueWarning,
    StationaryPointError,
    UsageError,
    ValidationError,
)
from .opalg import HermitianOperator, PureState, hermitian_eigensystem, moments
from .procedures import JointGenerator, ProcedureSpec, snl_baseline
from .states import optimal_state

NO_SENSITIVITY = "no-sensitivity"
ZERO_RESOURCE_TOL = 1e-12
DEFAULT_DERIVATIVE_STEP = 1e-5
POVM_TOL = 1e-9
_PROB_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class ResourceReport:
    """Every resource count and bound for one probe/generator pair.

    Optional fields are None when undefined: q for probes without a query
    count, bound_query without a procedure giving the per-query constant,
    bound_snl for kinds without a separable baseline.  ``to_dict`` drops the
    None fields so serialized reports omit rather than null them.
    """

    expectation_raw: float
    expectation_shifted: float
    stddev: float
    seminorm: float
    bound_new_hl: float | str
    bound_stddev: float | str
    qfi: float
    q: int | None = None
    bound_query: float | None = None
    bound_snl: float | None = None

    def __post_init__(self):
        if self.expectation_shifted < -1e-10:
            raise ValidationError(
                f"shifted expectation {self.expectation_shifted:.3e} is negative beyond tolerance"
            )
        if self.stddev < 0 or self.seminorm < 0 or self.qfi < 0:
            raise ValidationError("stddev, seminorm and qfi must be non-negative")

    def to_dict(self) -> dict:
        out = {
            "expectation_raw": self.expectation_raw,
            "expectation_shifted": self.expectation_shifted,
            "stddev": self.stddev,
            "seminorm": self.seminorm,
            "bound_new_hl": self.bound_new_hl,
            "bound_stddev": self.bound_stddev,
            "qfi": self.qfi,
        }
        if self.q is not None:
            out["q"] = self.q
        if self.bound_query is not None:
            out["bound_query"] = self.bound_query
        if self.bound_snl is not None:
            out["bound_snl"] = self.bound_snl
        return out


def resource_count_shifted(state: PureState, gen: JointGenerator) -> float:
    """Expectation of the generator above its ground state, <H - h_min I>."""
    if gen.unbounded_below:
        warnings.warn(
            "generator is flagged unbounded below; the shifted expectation is relative "
            "to the truncated ground state only",
            RelativeValueWarning,
            stacklevel=2,
        )
    expectation, _ = moments(state, gen.generator)
    shifted = expectation - gen.h_min
    if shifted < -1e-10:
        raise NumericalIntegrityError(
            f"shifted expectation {shifted:.3e} fell below the ground state beyond tolerance"
        )
    return shifted


def heisenberg_bound_expectation(shifted_expectation: float):
    """1/(2 <H - h_min I>), or NO_SENSITIVITY when the resource vanishes."""
    if shifted_expectation < -1e-10:
        raise UsageError(f"shifted expectation must be >= 0, got {shifted_expectation}")
    if shifted_expectation <= ZERO_RESOURCE_TOL:
        return NO_SENSITIVITY
    return 1.0 / (2.0 * shifted_expectation)


def heisenberg_bound_stddev(stddev: float):
    """1/(2 dH), or NO_SENSITIVITY when the probe carries no spread."""
    if stddev < 0:
        raise UsageError(f"stddev must be >= 0, got {stddev}")
    if stddev <= ZERO_RESOURCE_TOL:
        return NO_SENSITIVITY
    return 1.0 / (2.0 * stddev)


def query_bound(q: int, lambda_min: float, lambda_max: float, k: int) -> float:
    """c_k / q with c_k = 1/(lambda_max^k - lambda_min^k)."""
    if q < 1:
        raise UsageError(f"query count must be >= 1, got {q}")
    span = lambda_max**k - lambda_min**k
    if span <= 0:
        raise ValidationError(
            f"degenerate powers: lambda_max^{k} - lambda_min^{k} = {span:g} is not positive"
        )
    return 1.0 / (span * q)


def qfi_pure(state: PureState, gen: HermitianOperator) -> float:
    """Quantum Fisher information of a pure probe under exp(-i phi gen): 4 Var(gen)."""
    _, variance = moments(state, gen)
    return 4.0 * variance


def validate_povm(povm: list[HermitianOperator]) -> None:
    if not povm:
        raise ValidationError("POVM must have at least one element")
    dim = povm[0].dim
    total = np.zeros((dim, dim), dtype=complex)
    for element in povm:
        if element.dim != dim:
            raise ValidationError("POVM elements must share one dimension")
        if hermitian_eigensystem(element).lambda_min < -POVM_TOL:
            raise ValidationError("POVM element has a negative eigenvalue beyond tolerance")
        total += element.entries
    defect = float(np.max(np.abs(total - np.eye(dim))))
    if defect > POVM_TOL:
        raise ValidationError(f"POVM does not sum to identity: defect {defect:.3e}")


def outcome_probabilities(state: PureState, povm: list[HermitianOperator]) -> np.ndarray:
    probs = np.array([float(np.vdot(state.amplitudes, e.entries @ state.amplitudes).real) for e in povm])
    if probs.min() < -1e-12:
        raise ValidationError(f"negative outcome probability {probs.min():.3e}")
    return np.clip(probs, 0.0, None)


def classical_fisher(
    povm: list[HermitianOperator],
    state_at,
    phi: float,
    eps: float = DEFAULT_DERIVATIVE_STEP,
    richardson: bool = False,
) -> float:
    """Fisher information of the POVM statistics, sum over (dp/dphi)^2 / p.

    The derivative is a central difference; outcomes with probability under
    1e-12 are skipped before dividing.
    """
    validate_povm(povm)
    p0 = outcome_probabilities(state_at(phi), povm)
    dp = (outcome_probabilities(state_at(phi + eps), povm) - outcome_probabilities(state_at(phi - eps), povm)) / (
        2 * eps
    )
    if richardson:
        wide = (
            outcome_probabilities(state_at(phi + 2 * eps), povm)
            - outcome_probabilities(state_at(phi - 2 * eps), povm)
        ) / (4 * eps)
        dp = (4 * dp - wide) / 3
    keep = p0 >= _PROB_FLOOR
    return float(np.sum(dp[keep] ** 2 / p0[keep]))


def error_propagation(
    observable: HermitianOperator,
    state_at,
    phi: float,
    eps: float = DEFAULT_DERIVATIVE_STEP,
    richardson: bool = False,
) -> float:
    """dX / |d<X>/dphi| at the working point phi."""
    _, variance = moments(state_at(phi), observable)
    plus, _ = moments(state_at(phi + eps), observable)
    minus, _ = moments(state_at(phi - eps), observable)
    slope = (plus - minus) / (2 * eps)
    if richardson:
        plus2, _ = moments(state_at(phi + 2 * eps), observable)
        minus2, _ = moments(state_at(phi - 2 * eps), observable)
        slope = (4 * slope - (plus2 - minus2) / (4 * eps)) / 3
    if abs(slope) <= 1e-12:
        raise StationaryPointError(
            f"expectation of the observable is stationary at phi = {phi!r}; "
            "move the working point where the signal has slope"
        )
    return float(np.sqrt(variance) / abs(slope))


def mu_sweep(gen: JointGenerator, grid) -> list[tuple[float, float, float]]:
    """Rows (mu, shifted expectation, stddev) for the extreme-superposition family."""
    rows = []
    for mu in grid:
        mu = float(mu)
        if not 0.0 <= mu <= 1.0:
            raise ValidationError(f"mu grid values must lie in [0, 1], got {mu}")
        probe = optimal_state(gen, mu)
        expectation, variance = moments(probe, gen.generator)
        rows.append((mu, expectation - gen.h_min, float(np.sqrt(variance))))
    return rows


def _procedure_query_bound(spec: ProcedureSpec, gen: JointGenerator) -> float | None:
    # linear and sequential-over-linear have per-query span lambda_max - lambda_min;
    # kbody raises it to the k-th power; the exponential constant is computed
    # from the seminorm itself (c_e = Q/seminorm, of order one for bases in [0,1])
    lo, hi = spec.base_eigs
    try:
        if spec.kind in ("linear", "sequential-wrapped"):
            return query_bound(gen.query_complexity, lo, hi, 1)
        if spec.kind == "kbody":
            return query_bound(gen.query_complexity, lo, hi, spec.body_order)
        return 1.0 / gen.seminorm if gen.seminorm > 0 else None
    except ValidationError:
        return None


def build_report(state: PureState, gen: JointGenerator, spec: ProcedureSpec | None = None) -> ResourceReport:
    """Assemble every count and bound for one probe/generator pair.

    The per-query bound needs the procedure's base eigenvalues, so it is
    omitted when no spec is given (network-derived or photonic generators);
    the separable baseline applies to the linear kind only.
    """
    if state.dim != gen.dim:
        raise UsageError(f"dimension mismatch: state {state.dim} vs generator {gen.dim}")
    expectation, variance = moments(state, gen.generator)
    shifted = resource_count_shifted(state, gen)
    stddev = float(np.sqrt(variance))
    bound_query = None
    bound_snl = None
    if spec is not None and gen.query_complexity is not None:
        bound_query = _procedure_query_bound(spec, gen)
    if spec is not None and spec.kind == "linear":
        bound_snl = snl_baseline(spec)[1]
    return ResourceReport(
        expectation_raw=expectation,
        expectation_shifted=shifted,
        stddev=stddev,
        seminorm=gen.seminorm,
        bound_new_hl=heisenberg_bound_expectation(shifted),
        bound_stddev=heisenberg_bound_stddev(stddev),
        qfi=4.0 * variance,
        q=gen.query_complexity,
        bound_query=bound_query,
        bound_snl=bound_snl,
    )
