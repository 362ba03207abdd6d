"""Black-box evolution networks: build U(phi), count queries, extract generators.

A network is an alternating chain of fixed unitaries and black-box slots,
``V_0, O_1, V_1, ..., O_Q, V_Q``, acting on ``n_subsystems`` identical
subsystems.  Each box applies ``exp(-i * phi * H)`` for a positive Hermitian
``H`` on its target subsystems; the fixed unitaries act on the full space.

The generator of the composite evolution is extracted two ways: numerically,
as ``i * dU/dphi * U^dag`` by central differences, and analytically, as the
sum of Q unitary conjugations of the embedded box generators.  The two routes
cross-check each other; the numeric definition is the authoritative sign
convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import StepSizeError, UsageError, ValidationError
from .opalg import HermitianOperator, hermitian_eigensystem

UNITARY_TOL = 1e-10
DEFAULT_FD_STEP = 1e-6
# Residue model for the Hermitized numeric generator: truncation grows with
# eps^2 times the cube of the generator scale, roundoff with eps^-1.
_ROUNDOFF_FLOOR = 32 * np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class BlackBox:
    """One parameter-imprinting slot: exp(-i phi H) on ``target_subsystems``.

    The base generator is forced positive by shifting H -> H - lambda_min I
    when needed; the applied shift is recorded so downstream resource counts
    stay consistent with the operator actually exponentiated.
    """

    base_generator: HermitianOperator
    target_subsystems: tuple[int, ...]
    order: int = 0
    shift: float = field(default=0.0, init=False)

    def __post_init__(self):
        targets = tuple(int(i) for i in self.target_subsystems)
        if len(set(targets)) != len(targets):
            raise ValidationError(f"box targets repeat a subsystem: {targets}")
        order = self.order or len(targets)
        if order != len(targets):
            raise ValidationError(f"order {order} and target count {len(targets)} disagree")
        spec = hermitian_eigensystem(self.base_generator)
        if not np.all(np.isfinite(spec.eigenvalues)):
            raise ValidationError("base generator has non-finite eigenvalues")
        shift = 0.0
        gen = self.base_generator
        if spec.lambda_min < 0:
            shift = -spec.lambda_min
            gen = gen.shifted(shift)
        object.__setattr__(self, "base_generator", gen)
        object.__setattr__(self, "target_subsystems", targets)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "shift", shift)


@dataclass(frozen=True, eq=False)
class QuantumNetwork:
    """Alternating layer list V_0, O_1, V_1, ..., O_Q, V_Q on n identical subsystems."""

    n_subsystems: int
    subsystem_dim: int
    layers: tuple

    def __post_init__(self):
        if self.n_subsystems < 1 or self.subsystem_dim < 1:
            raise ValidationError("need at least one subsystem with dimension >= 1")
        layers = tuple(self.layers)
        if len(layers) % 2 == 0 or not layers:
            raise ValidationError("layer list must be V_0 [, O_1, V_1, ...] with odd length")
        dim = self.dim
        for pos, layer in enumerate(layers):
            if pos % 2 == 0:
                if isinstance(layer, BlackBox):
                    raise ValidationError(f"layer {pos} must be a fixed unitary, got a black box")
                v = np.asarray(layer, dtype=complex)
                if v.shape != (dim, dim):
                    raise ValidationError(f"fixed unitary at layer {pos} has shape {v.shape}, expected {(dim, dim)}")
                defect = np.max(np.abs(v @ v.conj().T - np.eye(dim)))
                if defect > UNITARY_TOL:
                    raise ValidationError(f"layer {pos} is not unitary: defect {defect:.3e}")
            else:
                if not isinstance(layer, BlackBox):
                    raise ValidationError(f"layer {pos} must be a BlackBox")
                if any(not 0 <= t < self.n_subsystems for t in layer.target_subsystems):
                    raise ValidationError(f"box at layer {pos} targets unknown subsystems")
                expected = self.subsystem_dim ** layer.order
                if layer.base_generator.dim != expected:
                    raise ValidationError(
                        f"box at layer {pos} has generator dim {layer.base_generator.dim}, expected {expected}"
                    )
        layers = tuple(
            np.asarray(l, dtype=complex) if pos % 2 == 0 else l for pos, l in enumerate(layers)
        )
        object.__setattr__(self, "layers", layers)

    @property
    def dim(self) -> int:
        return self.subsystem_dim**self.n_subsystems

    @property
    def boxes(self) -> tuple[BlackBox, ...]:
        return self.layers[1::2]

    @property
    def fixed_unitaries(self) -> tuple[np.ndarray, ...]:
        return self.layers[0::2]


def embed_operator(entries: np.ndarray, sites: tuple[int, ...], n: int, d: int) -> np.ndarray:
    """Pad an operator on ``sites`` (in order) with identities on the rest.

    Axis bookkeeping follows the package tensor convention: subsystem 0 is
    the most significant factor.
    """
    k = len(sites)
    rest = [i for i in range(n) if i not in sites]
    full = np.kron(np.asarray(entries, dtype=complex), np.eye(d ** (n - k)))
    perm = list(sites) + rest  # current axis j acts on subsystem perm[j]
    inv = np.argsort(perm)
    t = full.reshape([d] * (2 * n))
    t = t.transpose(list(inv) + [n + i for i in inv])
    return np.ascontiguousarray(t.reshape(d**n, d**n))


def _box_generator_full(net: QuantumNetwork, box: BlackBox) -> np.ndarray:
    return embed_operator(box.base_generator.entries, box.target_subsystems, net.n_subsystems, net.subsystem_dim)


def _box_unitary_full(net: QuantumNetwork, box: BlackBox, phi: float) -> np.ndarray:
    spec = hermitian_eigensystem(box.base_generator)
    small = (spec.eigenvectors * np.exp(-1j * phi * spec.eigenvalues)) @ spec.eigenvectors.conj().T
    return embed_operator(small, box.target_subsystems, net.n_subsystems, net.subsystem_dim)


def query_count(net: QuantumNetwork) -> int:
    """Number of black-box applications in the network."""
    return len(net.boxes)


def network_unitary(net: QuantumNetwork, phi: float) -> np.ndarray:
    """Compose V_Q O(phi) ... V_1 O(phi) V_0 into a dense unitary."""
    u = net.layers[0]
    for pos in range(1, len(net.layers), 2):
        u = _box_unitary_full(net, net.layers[pos], phi) @ u
        u = net.layers[pos + 1] @ u
    return u


def _generator_scale(net: QuantumNetwork) -> float:
    total = 0.0
    for box in net.boxes:
        total += hermitian_eigensystem(box.base_generator).lambda_max
    return max(total, 1.0)


def generator_numeric(
    net: QuantumNetwork, phi: float, eps: float = DEFAULT_FD_STEP, richardson: bool = False
) -> HermitianOperator:
    """Generator i (dU/dphi) U^dag by central differences at the given phi.

    The anti-Hermitian residue must stay within the combined truncation plus
    roundoff model before the result is Hermitized; a violation usually means
    eps is too large for the generator's scale.
    """
    if not 0 < eps <= 1e-3:
        raise UsageError(f"eps must lie in (0, 1e-3], got {eps!r}")
    if richardson:
        d1 = network_unitary(net, phi + eps) - network_unitary(net, phi - eps)
        d2 = network_unitary(net, phi + 2 * eps) - network_unitary(net, phi - 2 * eps)
        du = (8 * d1 - d2) / (12 * eps)
    else:
        du = (network_unitary(net, phi + eps) - network_unitary(net, phi - eps)) / (2 * eps)
    raw = 1j * du @ network_unitary(net, phi).conj().T
    residue = float(np.max(np.abs(raw - raw.conj().T))) / 2
    scale = _generator_scale(net)
    bound = 10.0 * eps**2 * scale**3 + _ROUNDOFF_FLOOR * scale / eps
    if residue > bound:
        raise StepSizeError(
            f"anti-Hermitian residue {residue:.3e} exceeds {bound:.3e}; try eps = {eps / 10:g}"
        )
    return HermitianOperator((raw + raw.conj().T) / 2, hermitian_tol=np.inf)


def generator_analytic(net: QuantumNetwork, phi: float) -> tuple[HermitianOperator, list[HermitianOperator]]:
    """The generator as a sum of Q conjugated box terms, plus the terms themselves.

    Term j is W_j H_j W_j^dag with W_j the partial product of all layers after
    box j (inclusive of V_j); each term therefore carries exactly the spectrum
    of the embedded box generator, whatever the fixed unitaries are.
    """
    dim = net.dim
    terms_rev: list[np.ndarray] = []
    prefix = net.layers[-1]  # V_Q
    for pos in range(len(net.layers) - 2, 0, -2):
        box = net.layers[pos]
        h_full = _box_generator_full(net, box)
        terms_rev.append(prefix @ h_full @ prefix.conj().T)
        prefix = prefix @ _box_unitary_full(net, box, phi) @ net.layers[pos - 1]
    terms = [HermitianOperator(t, hermitian_tol=1e-8) for t in reversed(terms_rev)]
    total = np.zeros((dim, dim), dtype=complex)
    for t in terms:
        total = total + t.entries
    return HermitianOperator(total, hermitian_tol=1e-8), terms
