"""Named joint-generator constructions over N identical subsystems.

Four procedure kinds are supported.  ``linear`` applies one box per
subsystem, ``kbody`` one box per size-k subset (tensor product of the base
generator over the subset), ``exponential`` one box per nonempty subset, and
``sequential-wrapped`` repeats an inner evolution T times, which scales the
generator and the query count by T.

When the base generator is diagonal the joint generator is assembled as a
diagonal vector over product basis states, which keeps the eigensystem work
trivial; a non-diagonal base falls back to dense embedded sums.  Both paths
sum subset terms in a fixed lexicographic order so results are reproducible
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np

from .errors import UsageError, ValidationError
from .networks import QuantumNetwork, embed_operator, generator_analytic, query_count
from .opalg import DIM_CAP, HermitianOperator, PureState, hermitian_eigensystem, moments

KINDS = ("linear", "kbody", "exponential", "sequential-wrapped")
EXPONENTIAL_N_CAP = 10  # 2^N - 1 boxes; term count explodes past this
EXTREME_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ProcedureSpec:
    """Declarative description of a procedure: kind, size, and base spectrum.

    ``base_eigs`` fixes the extreme eigenvalues of the single-subsystem base
    generator; the default base is the diagonal operator with ``subsystem_dim``
    equally spaced eigenvalues between them.  ``body_order`` is the subset
    size k and is meaningful for the kbody kind only; ``repetitions`` is the
    wrap count T for the sequential-wrapped kind only.
    """

    kind: str
    n_systems: int
    base_eigs: tuple[float, float]
    body_order: int | None = None
    repetitions: int | None = None
    subsystem_dim: int = 2

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown procedure kind {self.kind!r}; expected one of {KINDS}")
        if self.n_systems < 1:
            raise ValidationError("n_systems must be >= 1")
        if len(self.base_eigs) != 2:
            raise ValidationError(f"base_eigs must be a (lambda_min, lambda_max) pair, got {len(self.base_eigs)} values")
        lo, hi = (float(self.base_eigs[0]), float(self.base_eigs[1]))
        if not hi > lo:
            raise ValidationError(f"base_eigs must satisfy lambda_max > lambda_min, got ({lo}, {hi})")
        if self.subsystem_dim < 2:
            raise ValidationError("subsystem_dim must be >= 2 to hold two distinct eigenvalues")
        if self.kind == "kbody":
            if self.body_order is None:
                raise ValidationError("kbody needs body_order")
            if self.body_order < 1:
                raise ValidationError("body_order must be >= 1")
            if self.body_order > self.n_systems:
                raise UsageError(f"body_order {self.body_order} exceeds n_systems {self.n_systems}")
        elif self.body_order is not None:
            raise ValidationError(f"body_order applies to the kbody kind only, not {self.kind!r}")
        if self.kind == "sequential-wrapped":
            if self.repetitions is None:
                raise ValidationError("sequential-wrapped needs repetitions")
            if self.repetitions < 1:
                raise ValidationError("repetitions must be >= 1")
        elif self.repetitions is not None:
            raise ValidationError(f"repetitions applies to the sequential-wrapped kind only, not {self.kind!r}")
        object.__setattr__(self, "base_eigs", (lo, hi))

    @property
    def dim(self) -> int:
        return self.subsystem_dim**self.n_systems


@dataclass(frozen=True, eq=False)
class JointGenerator:
    """A materialized joint generator with its query count and extreme eigenvalues.

    ``query_complexity`` is None for probes without a defined query count
    (a coherent probe knows its photon number only on average).
    ``unbounded_below`` marks generators whose true spectrum has no ground
    state, making any shifted expectation a relative statement; the built-in
    constructions never set it.
    """

    generator: HermitianOperator
    query_complexity: int | None
    h_min: float
    h_max: float
    unbounded_below: bool = False
    seminorm: float = field(init=False)

    def __post_init__(self):
        if self.query_complexity is not None and self.query_complexity < 1:
            raise ValidationError("query_complexity must be >= 1 when defined")
        spec = hermitian_eigensystem(self.generator)
        if abs(spec.lambda_min - self.h_min) > EXTREME_TOL or abs(spec.lambda_max - self.h_max) > EXTREME_TOL:
            raise ValidationError(
                f"stated extremes ({self.h_min}, {self.h_max}) disagree with the spectrum "
                f"({spec.lambda_min}, {spec.lambda_max}) beyond {EXTREME_TOL:.0e}"
            )
        seminorm = self.h_max - self.h_min
        if seminorm < 0:
            raise ValidationError("h_max must not be below h_min")
        object.__setattr__(self, "seminorm", seminorm)

    @property
    def dim(self) -> int:
        return self.generator.dim


def base_diagonal(spec: ProcedureSpec) -> np.ndarray:
    """Eigenvalues of the default per-subsystem base, equally spaced over base_eigs."""
    lo, hi = spec.base_eigs
    return np.linspace(lo, hi, spec.subsystem_dim)


def _check_materialization(spec: ProcedureSpec) -> None:
    if spec.dim > DIM_CAP:
        raise ValidationError(
            f"joint space dimension {spec.subsystem_dim}^{spec.n_systems} exceeds the cap {DIM_CAP}; "
            "closed_form_extremes and snl_baseline still work at this size"
        )


def _resolve_base(spec: ProcedureSpec, base: HermitianOperator | None) -> HermitianOperator:
    if base is None:
        return HermitianOperator.from_diagonal(base_diagonal(spec))
    if base.dim != spec.subsystem_dim:
        raise UsageError(f"base dimension {base.dim} does not match subsystem_dim {spec.subsystem_dim}")
    return base


def _lifted_site_values(values: np.ndarray, site: int, n: int, d: int) -> np.ndarray:
    # value of the site's diagonal entry on every product basis state; site 0
    # is the most significant digit, matching the package kron convention
    stride = d ** (n - 1 - site)
    return values[(np.arange(d**n) // stride) % d]


def _joint_from_subsets(spec: ProcedureSpec, base: HermitianOperator, subsets, q: int) -> JointGenerator:
    n, d = spec.n_systems, spec.subsystem_dim
    if base.is_diagonal:
        v = np.diagonal(base.entries).real
        lifted = [_lifted_site_values(v, j, n, d) for j in range(n)]
        total = np.zeros(d**n)
        for subset in subsets:
            term = lifted[subset[0]].copy()
            for j in subset[1:]:
                term *= lifted[j]
            total += term
        op = HermitianOperator.from_diagonal(total)
        return JointGenerator(op, q, float(total.min()), float(total.max()))
    acc = np.zeros((d**n, d**n), dtype=complex)
    for subset in subsets:
        small = base.entries
        for _ in subset[1:]:
            small = np.kron(small, base.entries)
        acc += embed_operator(small, subset, n, d)
    op = HermitianOperator(acc, hermitian_tol=1e-8)
    spectrum = hermitian_eigensystem(op)
    return JointGenerator(op, q, spectrum.lambda_min, spectrum.lambda_max)


def linear_generator(spec: ProcedureSpec, base: HermitianOperator | None = None) -> JointGenerator:
    """One box per subsystem: the sum of N commuting single-site terms, Q = N."""
    if spec.kind != "linear":
        raise UsageError(f"linear_generator got kind {spec.kind!r}")
    _check_materialization(spec)
    base = _resolve_base(spec, base)
    subsets = [(j,) for j in range(spec.n_systems)]
    return _joint_from_subsets(spec, base, subsets, spec.n_systems)


def kbody_generator(
    spec: ProcedureSpec, base: HermitianOperator | None = None, include_self_pairs: bool = False
) -> JointGenerator:
    """One box per size-k subset, each a k-fold tensor power of the base, Q = C(N,k).

    ``include_self_pairs`` (two-body only) adds the N same-site squared terms
    so the term count becomes N(N+1)/2; it exists for comparing the strict
    pair convention against the laxer one and changes Q accordingly.
    """
    if spec.kind != "kbody":
        raise UsageError(f"kbody_generator got kind {spec.kind!r}")
    _check_materialization(spec)
    n, k = spec.n_systems, spec.body_order
    if include_self_pairs and k != 2:
        raise UsageError("include_self_pairs is defined for body_order 2 only")
    base = _resolve_base(spec, base)
    subsets = list(combinations(range(n), k))
    q = math.comb(n, k)
    if include_self_pairs:
        subsets = subsets + [(j, j) for j in range(n)]
        q += n
    return _joint_from_subsets(spec, base, subsets, q)


def exponential_generator(spec: ProcedureSpec, base: HermitianOperator | None = None) -> JointGenerator:
    """One box per nonempty subset of the N subsystems, Q = 2^N - 1."""
    if spec.kind != "exponential":
        raise UsageError(f"exponential_generator got kind {spec.kind!r}")
    if spec.n_systems > EXPONENTIAL_N_CAP:
        raise ValidationError(
            f"exponential kind is capped at N = {EXPONENTIAL_N_CAP}; got N = {spec.n_systems}"
        )
    _check_materialization(spec)
    base = _resolve_base(spec, base)
    n = spec.n_systems
    subsets = [s for size in range(1, n + 1) for s in combinations(range(n), size)]
    return _joint_from_subsets(spec, base, subsets, 2**n - 1)


def sequential_wrap(inner: JointGenerator, t: int) -> JointGenerator:
    """Repeat the inner evolution t times: generator, extremes and Q all scale by t."""
    if t < 1:
        raise UsageError(f"repetition count must be >= 1, got {t}")
    q = None if inner.query_complexity is None else t * inner.query_complexity
    return JointGenerator(inner.generator * t, q, t * inner.h_min, t * inner.h_max)


def build_generator(spec: ProcedureSpec, base: HermitianOperator | None = None) -> JointGenerator:
    """Dispatch on spec.kind; sequential-wrapped wraps the linear procedure."""
    if spec.kind == "linear":
        return linear_generator(spec, base)
    if spec.kind == "kbody":
        return kbody_generator(spec, base)
    if spec.kind == "exponential":
        return exponential_generator(spec, base)
    inner = replace(spec, kind="linear", repetitions=None)
    return sequential_wrap(linear_generator(inner, base), spec.repetitions)


def from_network(net: QuantumNetwork, phi: float = 0.0) -> JointGenerator:
    """Bridge an explicit evolution network to a JointGenerator at the given phi."""
    total, _ = generator_analytic(net, phi)
    spectrum = hermitian_eigensystem(total)
    return JointGenerator(total, query_count(net), spectrum.lambda_min, spectrum.lambda_max)


def closed_form_extremes(spec: ProcedureSpec) -> tuple[int, float, float]:
    """Query count and extreme eigenvalues without constructing any matrix.

    For subset products of degree two and higher the identification of the
    extremes with powers of the base extremes needs lambda_min >= 0; negative
    eigenvalues raised to even powers would reorder.
    """
    lo, hi = spec.base_eigs
    n = spec.n_systems
    if spec.kind == "linear":
        return n, n * lo, n * hi
    if spec.kind == "kbody":
        k = spec.body_order
        if k >= 2 and lo < 0:
            raise ValidationError(f"kbody closed form needs lambda_min >= 0, got {lo}")
        q = math.comb(n, k)
        return q, q * lo**k, q * hi**k
    if spec.kind == "exponential":
        if lo < 0:
            raise ValidationError(f"exponential closed form needs lambda_min >= 0, got {lo}")
        q = 2**n - 1
        h_lo = sum(math.comb(n, j) * lo**j for j in range(1, n + 1))
        h_hi = sum(math.comb(n, j) * hi**j for j in range(1, n + 1))
        return q, h_lo, h_hi
    inner = replace(spec, kind="linear", repetitions=None)
    q, h_lo, h_hi = closed_form_extremes(inner)
    t = spec.repetitions
    return t * q, t * h_lo, t * h_hi


def snl_baseline(spec: ProcedureSpec) -> tuple[float, float]:
    """Standard-noise-limit baseline for the linear kind on separable probes.

    Evaluates the generator's standard deviation in the N-fold product of
    per-site balanced superpositions of the two extreme eigenvectors.  Site
    variances add for product states, so only a single-site moment
    computation is needed and N can be arbitrarily large.
    """
    if spec.kind != "linear":
        raise UsageError(
            f"separable baseline is defined for the linear kind only, got {spec.kind!r}; "
            "no separable benchmark is established for entangling procedures"
        )
    base = HermitianOperator.from_diagonal(base_diagonal(spec))
    v = np.diagonal(base.entries).real
    amps = np.zeros(spec.subsystem_dim, dtype=complex)
    amps[int(np.argmin(v))] = 1 / math.sqrt(2)
    amps[int(np.argmax(v))] += 1 / math.sqrt(2)
    _, site_var = moments(PureState(amps), base)
    delta = math.sqrt(spec.n_systems * site_var)
    if delta == 0.0:
        raise ValidationError("degenerate base spectrum gives a flat separable baseline")
    return delta, 1.0 / (2.0 * delta)
