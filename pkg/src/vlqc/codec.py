"""Build lossless variable-length codebooks from weighted state ensembles.

The construction: sort messages by descending probability, keep a maximal
linearly independent subset, orthonormalize it in order, and map the i-th
basis vector to the register numeral of i-1. More probable directions get
shorter codewords; the empty codeword goes to the most probable message.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .message_space import AMP_TOL, RegisterSpec, VariableLengthState, significant_length

PROBABILITY_SUM_TOL = 1e-9
DECODE_SUPPORT_TOL = 1e-10


@dataclass(frozen=True)
class SourceMessage:
    """One source state: raw (possibly unnormalized) amplitudes plus its probability."""

    id: str
    amps: np.ndarray
    probability: float

    def __post_init__(self):
        amps = linalg.as_state(self.amps)
        if float(np.linalg.norm(amps)) <= linalg.ZERO_TOL:
            raise ValueError(f"message {self.id!r} has a near-zero amplitude vector")
        if not self.probability > 0.0:
            raise ValueError(f"message {self.id!r} must have positive probability")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    def unit_amps(self) -> np.ndarray:
        return linalg.normalize(self.amps)


@dataclass(frozen=True)
class SourceEnsemble:
    """Weighted source messages spanning the space to be encoded."""

    messages: tuple[SourceMessage, ...]
    ambient_dim: int

    def __post_init__(self):
        object.__setattr__(self, "messages", tuple(self.messages))
        if not self.messages:
            raise ValueError("ensemble has no messages")
        for msg in self.messages:
            if msg.amps.shape[0] != self.ambient_dim:
                raise ValueError(
                    f"message {msg.id!r} has dim {msg.amps.shape[0]}, expected {self.ambient_dim}"
                )
        ids = [m.id for m in self.messages]
        if len(set(ids)) != len(ids):
            raise ValueError("message ids are not unique")
        total = float(sum(m.probability for m in self.messages))
        if abs(total - 1.0) > PROBABILITY_SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, expected 1")

    def probabilities(self) -> list[float]:
        return [m.probability for m in self.messages]

    def find(self, message_id: str) -> SourceMessage:
        for msg in self.messages:
            if msg.id == message_id:
                return msg
        raise KeyError(message_id)


def select_independent(
    ensemble: SourceEnsemble, tol: float = linalg.DEPENDENCE_TOL
) -> list[SourceMessage]:
    """Greedy maximal linearly independent subset, most probable first.

    Messages are visited in order of descending probability (input order
    breaks ties); one is kept iff it adds a new direction to the span of
    those already kept.
    """
    ordered = sorted(ensemble.messages, key=lambda m: -m.probability)
    kept: list[SourceMessage] = []
    basis: list[np.ndarray] = []
    for msg in ordered:
        v = msg.unit_amps()
        residual = v.copy()
        for w in basis:
            residual -= np.vdot(w, residual) * w
        rnorm = float(np.linalg.norm(residual))
        if rnorm <= tol:
            continue
        kept.append(msg)
        basis.append(residual / rnorm)
    return kept


@dataclass(frozen=True)
class Codebook:
    """Encoder/decoder pair onto leading-zero-padded k-ary register numerals.

    ``encoder`` is the (k^r, ambient_dim) matrix whose row i-1 is <omega_i|;
    ``decoder`` is its conjugate transpose, the inverse on the code space.
    ``code_lengths[i-1]`` is the significant length of codeword i, i.e.
    ceil(log_k(i)) for the 1-based basis index i.
    """

    spec: RegisterSpec
    ambient_dim: int
    basis: tuple[np.ndarray, ...]
    encoder: np.ndarray
    decoder: np.ndarray
    code_lengths: tuple[int, ...]
    base_lengths: dict[str, int]

    def __post_init__(self):
        basis = tuple(linalg.as_state(w) for w in self.basis)
        d = len(basis)
        if not 1 <= d <= self.spec.dim:
            raise ValueError(f"basis size {d} does not fit register of dim {self.spec.dim}")
        for w in basis:
            if w.shape[0] != self.ambient_dim:
                raise ValueError("basis vector dimension mismatch")
            w.flags.writeable = False
        encoder = np.asarray(self.encoder, dtype=complex)
        decoder = np.asarray(self.decoder, dtype=complex)
        if encoder.shape != (self.spec.dim, self.ambient_dim):
            raise ValueError("encoder has wrong shape")
        if decoder.shape != (self.ambient_dim, self.spec.dim):
            raise ValueError("decoder has wrong shape")
        if len(self.code_lengths) != d:
            raise ValueError("one code length per basis vector required")
        encoder.flags.writeable = False
        decoder.flags.writeable = False
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "encoder", encoder)
        object.__setattr__(self, "decoder", decoder)
        object.__setattr__(self, "code_lengths", tuple(self.code_lengths))

    @property
    def code_dim(self) -> int:
        return len(self.basis)


def _min_register_length(k: int, d: int) -> int:
    r = 0
    while k**r < d:
        r += 1
    return r


def build_codebook(
    ensemble: SourceEnsemble,
    k: int = 2,
    tol: float = linalg.DEPENDENCE_TOL,
    amp_tol: float = AMP_TOL,
) -> Codebook:
    """Construct the code for an ensemble over a minimal k-ary register.

    The register length is the smallest r with k^r >= dim span(messages).
    Base lengths record, per source message, the longest codeword component
    its encoding touches; that is what the sender must announce.
    """
    selected = select_independent(ensemble, tol)
    basis = linalg.gram_schmidt([m.unit_amps() for m in selected], tol)
    d = len(basis)
    spec = RegisterSpec(k=k, r=_min_register_length(k, d))

    encoder = np.zeros((spec.dim, ensemble.ambient_dim), dtype=complex)
    for i, omega in enumerate(basis):
        encoder[i] = omega.conj()
    decoder = encoder.conj().T.copy()
    code_lengths = tuple(significant_length(i, k) for i in range(d))

    base_lengths: dict[str, int] = {}
    for msg in ensemble.messages:
        overlaps = encoder[:d] @ msg.unit_amps()
        supported = [code_lengths[i] for i in range(d) if abs(overlaps[i]) > amp_tol]
        base_lengths[msg.id] = max(supported) if supported else 0

    return Codebook(
        spec=spec,
        ambient_dim=ensemble.ambient_dim,
        basis=tuple(basis),
        encoder=encoder,
        decoder=decoder,
        code_lengths=code_lengths,
        base_lengths=base_lengths,
    )


def encode(codebook: Codebook, x, tol: float = linalg.DEPENDENCE_TOL) -> VariableLengthState:
    """Apply the encoder isometry to a unit vector inside the source span."""
    x = linalg.as_state(x)
    if x.shape[0] != codebook.ambient_dim:
        raise ValueError(f"vector has dim {x.shape[0]}, expected {codebook.ambient_dim}")
    if not linalg.is_unit(x):
        raise ValueError("encode input must be a unit vector")
    if not linalg.in_span(x, codebook.basis, tol):
        raise ValueError("vector lies outside the source space")
    return VariableLengthState(codebook.spec, codebook.encoder @ x)


def decode(
    codebook: Codebook,
    state: VariableLengthState,
    support_tol: float = DECODE_SUPPORT_TOL,
) -> np.ndarray:
    """Invert the encoder. The state must live on the first code_dim indices."""
    if state.spec != codebook.spec:
        raise ValueError("state register does not match the codebook register")
    tail = state.amps[codebook.code_dim :]
    if tail.size and float(np.max(np.abs(tail))) > support_tol:
        raise ValueError("state lies outside the code space")
    return codebook.decoder @ state.amps


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite ensemble matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("expected a square matrix")
        if not np.isfinite(m).all():
            raise ValueError("matrix contains NaN or Inf")
        if float(np.max(np.abs(m - m.conj().T))) > 1e-10:
            raise ValueError("matrix is not Hermitian")
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > 1e-9:
            raise ValueError(f"trace is {trace!r}, expected 1")
        if float(np.linalg.eigvalsh(m)[0]) < -1e-10:
            raise ValueError("matrix is not positive semidefinite")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def density_matrix(ensemble: SourceEnsemble) -> DensityMatrix:
    """sigma = sum_x p(x) |x><x| over the unit-normalized ensemble states."""
    dim = ensemble.ambient_dim
    sigma = np.zeros((dim, dim), dtype=complex)
    for msg in ensemble.messages:
        x = msg.unit_amps()
        sigma += msg.probability * np.outer(x, x.conj())
    return DensityMatrix(sigma)


@dataclass(frozen=True)
class CodeLengthOperator:
    """The codeword-length observable of a codebook, in two coordinate systems."""

    lengths: tuple[int, ...]
    in_code_basis: np.ndarray  # d x d diagonal
    in_ambient: np.ndarray  # sum_i L_i |omega_i><omega_i|


def code_length_operator(codebook: Codebook) -> CodeLengthOperator:
    diag = np.diag(np.asarray(codebook.code_lengths, dtype=float))
    ambient = np.zeros((codebook.ambient_dim, codebook.ambient_dim), dtype=complex)
    for length, omega in zip(codebook.code_lengths, codebook.basis):
        ambient += length * np.outer(omega, omega.conj())
    diag.flags.writeable = False
    ambient.flags.writeable = False
    return CodeLengthOperator(codebook.code_lengths, diag, ambient)
