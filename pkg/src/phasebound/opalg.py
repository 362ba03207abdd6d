"""Dense complex linear algebra for small Hilbert spaces.

Operators and states are immutable after construction and every operation is
pure, so values can be shared freely between workers.  The tensor convention
is fixed once for the whole package: the LEFT factor is the most significant
one, i.e. ``tensor_product(a, b)`` indexes the joint basis as
``i = i_a * dim_b + i_b`` (numpy's Kronecker order).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalIntegrityError, UsageError, ValidationError

DIM_CAP = 4096  # 12 qubits; exponential constructions make larger spaces pointless
HERMITIAN_TOL = 1e-9
NORM_TOL = 1e-12


def _as_complex_matrix(entries) -> np.ndarray:
    a = np.asarray(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise UsageError(f"operator entries must be a square matrix, got shape {a.shape}")
    return a


def _check_dim(dim: int) -> None:
    if dim < 1:
        raise ValidationError("dimension must be >= 1")
    if dim > DIM_CAP:
        raise ValidationError(
            f"dimension {dim} exceeds the cap {DIM_CAP}; this toolkit targets desk-scale spaces"
        )


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Dense Hermitian matrix; violations beyond ``hermitian_tol`` fail construction."""

    entries: np.ndarray
    hermitian_tol: float = HERMITIAN_TOL
    _spectrum_cache: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        a = _as_complex_matrix(self.entries)
        _check_dim(a.shape[0])
        defect = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
        if defect > self.hermitian_tol:
            raise ValidationError(
                f"matrix is not Hermitian: max |A - A^dag| = {defect:.3e} > {self.hermitian_tol:.1e}"
            )
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def is_diagonal(self) -> bool:
        return bool(np.count_nonzero(self.entries - np.diag(np.diagonal(self.entries))) == 0)

    @classmethod
    def from_diagonal(cls, values) -> "HermitianOperator":
        v = np.asarray(values, dtype=float)
        _check_dim(v.size)
        return cls(np.diag(v.astype(complex)))

    @classmethod
    def identity(cls, dim: int) -> "HermitianOperator":
        _check_dim(dim)
        return cls(np.eye(dim, dtype=complex))

    def shifted(self, offset: float) -> "HermitianOperator":
        """A + offset * I."""
        return HermitianOperator(self.entries + offset * np.eye(self.dim))

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        if not isinstance(other, HermitianOperator):
            return NotImplemented
        if other.dim != self.dim:
            raise UsageError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return HermitianOperator(self.entries + other.entries)

    def __mul__(self, scalar: float) -> "HermitianOperator":
        return HermitianOperator(self.entries * float(scalar))

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized complex amplitude vector over an optionally labeled basis."""

    amplitudes: np.ndarray
    basis_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        _check_dim(a.shape[0])
        norm_sq = float(np.sum(np.abs(a) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValidationError(f"state is not normalized: sum |a|^2 = {norm_sq!r}")
        if self.basis_labels is not None and len(self.basis_labels) != a.shape[0]:
            raise ValidationError("basis_labels length must equal the state dimension")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        if self.basis_labels is not None:
            object.__setattr__(self, "basis_labels", tuple(self.basis_labels))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @classmethod
    def basis_vector(cls, dim: int, index: int, basis_labels=None) -> "PureState":
        if not 0 <= index < dim:
            raise UsageError(f"basis index {index} out of range for dimension {dim}")
        a = np.zeros(dim, dtype=complex)
        a[index] = 1.0
        return cls(a, basis_labels)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Full real eigensystem; eigenvalues ascending, eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.eigenvalues, dtype=float).reshape(-1)
        v = np.asarray(self.eigenvectors, dtype=complex)
        if np.any(np.diff(w) < 0):
            raise ValidationError("eigenvalues must be sorted ascending")
        if v.shape != (w.shape[0], w.shape[0]):
            raise ValidationError("eigenvector matrix shape must match eigenvalue count")
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])


def tensor_product(a, b):
    """Kronecker product of two operators or two states (left = most significant)."""
    if isinstance(a, HermitianOperator) and isinstance(b, HermitianOperator):
        return HermitianOperator(
            np.kron(a.entries, b.entries),
            hermitian_tol=max(a.hermitian_tol, b.hermitian_tol),
        )
    if isinstance(a, PureState) and isinstance(b, PureState):
        labels = None
        if a.basis_labels is not None and b.basis_labels is not None:
            labels = tuple(la + lb for la in a.basis_labels for lb in b.basis_labels)
        return PureState(np.kron(a.amplitudes, b.amplitudes), labels)
    raise UsageError(
        f"tensor_product needs two operators or two states, got {type(a).__name__} and {type(b).__name__}"
    )


def hermitian_eigensystem(a: HermitianOperator) -> Spectrum:
    """Eigenvalues ascending with orthonormal eigenvector columns (cached on the operator)."""
    if a._spectrum_cache:
        return a._spectrum_cache[0]
    if a.is_diagonal:
        d = np.diagonal(a.entries).real
        order = np.argsort(d, kind="stable")
        vecs = np.eye(a.dim, dtype=complex)[:, order]
        spec = Spectrum(d[order], vecs)
    else:
        w, v = np.linalg.eigh(a.entries)
        spec = Spectrum(w, v)
    a._spectrum_cache.append(spec)
    return spec


def evolve(state: PureState, gen: HermitianOperator, phi: float) -> PureState:
    """Apply exp(-i * phi * gen) via the eigendecomposition of the generator."""
    if state.dim != gen.dim:
        raise UsageError(f"dimension mismatch: state {state.dim} vs generator {gen.dim}")
    if gen.is_diagonal:
        phases = np.exp(-1j * phi * np.diagonal(gen.entries).real)
        return PureState(phases * state.amplitudes, state.basis_labels)
    spec = hermitian_eigensystem(gen)
    coeffs = spec.eigenvectors.conj().T @ state.amplitudes
    out = spec.eigenvectors @ (np.exp(-1j * phi * spec.eigenvalues) * coeffs)
    return PureState(out, state.basis_labels)


def moments(state: PureState, a: HermitianOperator) -> tuple[float, float]:
    """Expectation and variance of a Hermitian observable in a pure state.

    The variance is the squared norm of the centered vector (A - <A>) psi,
    which stays non-negative and avoids the cancellation of <A^2> - <A>^2
    for near-eigenstates; a residual imaginary part above 1e-8 aborts.
    """
    if state.dim != a.dim:
        raise UsageError(f"dimension mismatch: state {state.dim} vs operator {a.dim}")
    a_psi = a.entries @ state.amplitudes
    raw = np.vdot(state.amplitudes, a_psi)
    if abs(raw.imag) > 1e-8:
        raise NumericalIntegrityError(
            f"expectation has imaginary part {raw.imag:.3e}; operator or state is corrupted"
        )
    expectation = float(raw.real)
    centered = a_psi - expectation * state.amplitudes
    variance = float(np.vdot(centered, centered).real)
    return expectation, variance
