"""Probe-state families and the generators naturally paired with them.

Covers the mu-parameterized superpositions of the extreme eigenvectors of a
joint generator, NOON states in the fixed-photon-number two-mode sector,
balanced product states, and truncated coherent states.  The photonic
families come with their phase generators (mode occupation numbers) so they
can flow through the same resource accounting as the qubit procedures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeneratorError, ValidationError
from .opalg import HermitianOperator, PureState, Spectrum, hermitian_eigensystem, tensor_product
from .procedures import JointGenerator

STATE_KINDS = ("optimal_mu", "noon", "product_balanced", "coherent")
COHERENT_DEFICIT_TOL = 1e-8
_DEGENERACY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class StateFamily:
    """Declarative probe description; field relevance depends on the kind.

    optimal_mu uses mu and rel_phase, noon uses n_photons, coherent uses
    alpha and cutoff, product_balanced needs nothing beyond the procedure it
    is paired with.
    """

    kind: str
    mu: float | None = None
    rel_phase: float = 0.0
    n_photons: int | None = None
    alpha: complex | None = None
    cutoff: int | None = None

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise ValidationError(f"unknown state kind {self.kind!r}; expected one of {STATE_KINDS}")
        if self.kind == "optimal_mu":
            if self.mu is None:
                raise ValidationError("optimal_mu needs mu")
            if not 0.0 <= self.mu <= 1.0:
                raise ValidationError(f"mu must lie in [0, 1], got {self.mu}")
        if self.kind == "noon":
            if self.n_photons is None or self.n_photons < 1:
                raise ValidationError("noon needs n_photons >= 1")
        if self.kind == "coherent":
            if self.alpha is None or self.cutoff is None:
                raise ValidationError("coherent needs alpha and cutoff")
            if self.cutoff < 10 * abs(self.alpha) ** 2:
                raise ValidationError(
                    f"cutoff {self.cutoff} is below 10*|alpha|^2 = {10 * abs(self.alpha) ** 2:g}; "
                    "truncation would be uncontrolled"
                )


def _extreme_columns(spectrum: Spectrum) -> tuple[np.ndarray, np.ndarray]:
    # ties resolved to the smallest column index inside each extreme block,
    # which the stable diagonal sort maps to the smallest basis index
    w = spectrum.eigenvalues
    scale = max(1.0, abs(w[0]), abs(w[-1]))
    vec_min = spectrum.eigenvectors[:, 0]
    top = int(np.argmax(w >= w[-1] - _DEGENERACY_TOL * scale))
    vec_max = spectrum.eigenvectors[:, top]
    return vec_min, vec_max


def optimal_state(gen: JointGenerator, mu: float, rel_phase: float = 0.0) -> PureState:
    """sqrt(mu) |h_max> + sqrt(1-mu) e^{i rel_phase} |h_min>.

    The relative phase never shows up in any moment of the generator; it is
    kept for completeness of the family.
    """
    if not 0.0 <= mu <= 1.0:
        raise ValidationError(f"mu must lie in [0, 1], got {mu}")
    if gen.seminorm < _DEGENERACY_TOL:
        raise DegenerateGeneratorError(
            "generator has a flat spectrum (h_max = h_min); no superposition of distinct "
            "extreme eigenvectors exists"
        )
    vec_min, vec_max = _extreme_columns(hermitian_eigensystem(gen.generator))
    amps = math.sqrt(mu) * vec_max + math.sqrt(1.0 - mu) * np.exp(1j * rel_phase) * vec_min
    return PureState(amps)


def noon_state(n_photons: int) -> PureState:
    """(|N,0> + |0,N>)/sqrt(2) in the fixed-N two-mode sector.

    Basis index m counts photons in mode 1, so the sector has dimension N+1
    and the phase generator is the diagonal mode-1 number operator.
    """
    if n_photons < 1:
        raise ValidationError("n_photons must be >= 1")
    amps = np.zeros(n_photons + 1, dtype=complex)
    amps[0] = 1 / math.sqrt(2)
    amps[n_photons] = 1 / math.sqrt(2)
    labels = tuple(f"{m},{n_photons - m}" for m in range(n_photons + 1))
    return PureState(amps, labels)


def mode_number_generator(n_photons: int) -> JointGenerator:
    """Mode-1 photon number diag(0..N) on the sector; each photon queries the phase once."""
    if n_photons < 1:
        raise ValidationError("n_photons must be >= 1")
    op = HermitianOperator.from_diagonal(np.arange(n_photons + 1, dtype=float))
    return JointGenerator(op, n_photons, 0.0, float(n_photons))


def product_balanced_state(n_systems: int, base_spectrum: Spectrum) -> PureState:
    """N-fold tensor power of the balanced superposition of the extreme eigenvectors."""
    if n_systems < 1:
        raise ValidationError("n_systems must be >= 1")
    vec_min, vec_max = _extreme_columns(base_spectrum)
    site = PureState((vec_min + vec_max) / math.sqrt(2))
    out = site
    for _ in range(n_systems - 1):
        out = tensor_product(out, site)
    return out


def coherent_state(alpha: complex, cutoff: int) -> PureState:
    """Fock expansion of |alpha> truncated at ``cutoff`` and renormalized.

    Amplitudes are assembled in log space so large cutoffs stay finite; the
    truncated weight must not exceed 1e-8.
    """
    if cutoff < 1:
        raise ValidationError("cutoff must be >= 1")
    if cutoff < 10 * abs(alpha) ** 2:
        raise ValidationError(
            f"cutoff {cutoff} is below 10*|alpha|^2 = {10 * abs(alpha) ** 2:g}"
        )
    n = np.arange(cutoff + 1)
    if alpha == 0:
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[0] = 1.0
        return PureState(amps)
    log_mag = -abs(alpha) ** 2 / 2 + n * math.log(abs(alpha)) - 0.5 * np.array(
        [math.lgamma(m + 1) for m in n]
    )
    amps = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    deficit = 1.0 - float(np.sum(np.abs(amps) ** 2))
    if deficit > COHERENT_DEFICIT_TOL:
        raise ValidationError(
            f"truncation deficit {deficit:.3e} exceeds {COHERENT_DEFICIT_TOL:.0e}; raise the cutoff"
        )
    return PureState(amps / math.sqrt(1.0 - deficit))


def number_operator(cutoff: int) -> JointGenerator:
    """Photon-number generator diag(0..cutoff) for coherent probes.

    The query count is left undefined: with a coherent probe the photon
    number is known only on average, so no integer Q exists.
    """
    if cutoff < 1:
        raise ValidationError("cutoff must be >= 1")
    op = HermitianOperator.from_diagonal(np.arange(cutoff + 1, dtype=float))
    return JointGenerator(op, None, 0.0, float(cutoff))
