"""Randomized self-checks: theorems every constructed code must satisfy.

Each check returns a :class:`PropertyResult`; :func:`run_all` drives the whole
suite with per-trial seeds derived deterministically from one master seed, so
a verification run is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import linalg
from .codec import (
    Codebook,
    DensityMatrix,
    SourceEnsemble,
    SourceMessage,
    build_codebook,
    decode,
    encode,
)
from .message_space import significant_length
from .metrics import compile_report, no_go_block_code, no_go_universal, dephasing_entropy_check
from .protocol import run_session, transcript_lines, verify_lossless
from .reference_example import REFERENCE_K, reference_ensemble
from .sidechannel import (
    LengthDistribution,
    build_huffman,
    decode_lengths,
    encode_lengths,
    expected_code_length,
    is_prefix_free,
    kraft_sum,
    shannon_entropy,
)

DEFAULT_SEED = 20260810


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    detail: str


# ---------------------------------------------------------------------------
# deterministic random generators


def random_unit(rng, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(rng, dim: int) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_ensemble(rng, ambient_dim: int, n_messages: int) -> SourceEnsemble:
    probs = rng.random(n_messages) + 0.05
    probs /= probs.sum()
    messages = []
    for i in range(n_messages):
        amps = rng.normal(size=ambient_dim) + 1j * rng.normal(size=ambient_dim)
        messages.append(SourceMessage(id=f"m{i}", amps=amps, probability=float(probs[i])))
    return SourceEnsemble(messages=tuple(messages), ambient_dim=ambient_dim)


def random_density(rng, dim: int) -> DensityMatrix:
    weights = rng.random(dim) + 0.05
    weights /= weights.sum()
    sigma = np.zeros((dim, dim), dtype=complex)
    for w in weights:
        x = random_unit(rng, dim)
        sigma += w * np.outer(x, x.conj())
    return DensityMatrix(sigma)


def random_unit_in_span(rng, basis) -> np.ndarray:
    coeffs = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
    coeffs /= np.linalg.norm(coeffs)
    v = np.zeros_like(basis[0])
    for c, w in zip(coeffs, basis):
        v = v + c * w
    return linalg.normalize(v)


# ---------------------------------------------------------------------------
# exhaustive Huffman oracle on the 0.05 probability grid


@lru_cache(maxsize=None)
def optimal_prefix_mean_twentieths(counts: tuple[int, ...]) -> int:
    """Minimal expected prefix-code length, exhaustively, in integer twentieths.

    ``counts`` are probabilities times 20. Every binary code tree corresponds
    to a sequence of pairwise merges whose accumulated merged mass is the
    expected length, so minimizing over all merge orders is exact.
    """
    if len(counts) <= 1:
        return 0
    best = None
    items = sorted(counts)
    for i, j in combinations(range(len(items)), 2):
        merged = items[i] + items[j]
        rest = tuple(
            sorted([x for pos, x in enumerate(items) if pos not in (i, j)] + [merged])
        )
        cost = merged + optimal_prefix_mean_twentieths(rest)
        if best is None or cost < best:
            best = cost
    return best


def grid_distributions(max_symbols: int = 5) -> list[tuple[int, ...]]:
    """All probability-count tuples on the 0.05 grid with 2..max_symbols symbols."""
    out: list[tuple[int, ...]] = []

    def compose(remaining: int, parts: int, prefix: list[int]):
        if parts == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for first in range(1, remaining - parts + 2):
            compose(remaining - first, parts - 1, prefix + [first])

    for symbols in range(2, max_symbols + 1):
        compose(20, symbols, [])
    return out


# ---------------------------------------------------------------------------
# individual checks


def check_codebook_consistency(ensemble: SourceEnsemble, codebook: Codebook, rng, tol: float):
    """Isometry, losslessness, and base-length soundness on one codebook."""
    k = codebook.spec.k
    for i, length in enumerate(codebook.code_lengths):
        if length != significant_length(i, k):
            return False, f"code length {length} at rank {i + 1} is not the numeral length"
    for _ in range(20):
        x = random_unit_in_span(rng, codebook.basis)
        y = random_unit_in_span(rng, codebook.basis)
        lhs = np.vdot(codebook.encoder @ x, codebook.encoder @ y)
        rhs = np.vdot(x, y)
        if abs(lhs - rhs) > tol:
            return False, f"isometry violated by {abs(lhs - rhs):.3e}"
        decoded = decode(codebook, encode(codebook, x))
        if abs(np.vdot(x, decoded)) ** 2 < 1.0 - 1e-12:
            return False, "round-trip fidelity fell below 1 - 1e-12"
    for msg in ensemble.messages:
        state = encode(codebook, msg.unit_amps())
        base = codebook.base_lengths[msg.id]
        beyond = state.amps[k**base :]
        if beyond.size and float(np.max(np.abs(beyond))) > 1e-12:
            return False, f"message {msg.id!r} has amplitude beyond its base length"
    return True, "ok"


def check_session(ensemble: SourceEnsemble, codebook: Codebook, n: int, seed: int, tol: float):
    transcript = run_session(ensemble, codebook, n=n, seed=seed)
    if not verify_lossless(transcript, ensemble, tol=tol):
        return False, f"lossy record in session with seed {seed}"
    if transcript.total_qubits != sum(r.base_length for r in transcript.records):
        return False, "qubit accounting does not match base lengths"
    if transcript.side_channel_stream() != "".join(r.classical_bits for r in transcript.records):
        return False, "side-channel stream mismatch"
    return True, "ok"


def _fmt(passed_all: bool, failures: list[str], ok_detail: str) -> tuple[bool, str]:
    if passed_all:
        return True, ok_detail
    return False, "; ".join(failures[:3])


def run_all(
    trials: int = 100,
    seed: int = DEFAULT_SEED,
    tol: float = 1e-9,
    ensemble: SourceEnsemble | None = None,
    k: int = 2,
) -> list[PropertyResult]:
    """Run every property suite and return one result per property."""
    results: list[PropertyResult] = []
    master = np.random.SeedSequence(seed)
    child_seeds = [int(s.generate_state(1)[0]) for s in master.spawn(trials + 8)]

    if ensemble is not None:
        subjects = [(ensemble, k)]
    else:
        subjects = [(reference_ensemble(), REFERENCE_K)]
        for t in range(trials):
            rng = np.random.default_rng(child_seeds[t])
            ambient = int(rng.integers(2, 7))
            count = int(rng.integers(3, 13))
            subjects.append((random_ensemble(rng, ambient, count), int(rng.choice([2, 2, 3]))))

    failures: list[str] = []
    lower_failures: list[str] = []
    session_failures: list[str] = []
    for t, (subject, subject_k) in enumerate(subjects):
        rng = np.random.default_rng(child_seeds[t] ^ 0x5EED)
        codebook = build_codebook(subject, k=subject_k)
        try:
            ok, detail = check_codebook_consistency(subject, codebook, rng, tol)
        except ValueError as exc:
            ok, detail = False, f"check aborted: {exc}"
        if not ok:
            failures.append(f"subject {t}: {detail}")
            continue
        if codebook.code_dim > 1:
            report = compile_report(subject, codebook)
            if not report.lower_bound_satisfied:
                lower_failures.append(
                    f"subject {t}: Ic+I' = "
                    f"{report.avg_base_length_bits + report.side_channel_entropy_bits:.6f} "
                    f"< S = {report.von_neumann_entropy_bits:.6f}"
                )
            if not report.upper_bound_satisfied:
                lower_failures.append(f"subject {t}: upper bound violated")
        try:
            ok, detail = check_session(subject, codebook, n=64, seed=child_seeds[t], tol=tol)
        except ValueError as exc:
            ok, detail = False, f"session aborted: {exc}"
        if not ok:
            session_failures.append(f"subject {t}: {detail}")
    results.append(
        PropertyResult(
            "codebook-isometry-and-losslessness",
            *_fmt(not failures, failures, f"{len(subjects)} ensemble(s) checked"),
        )
    )
    results.append(
        PropertyResult(
            "entropy-lower-bound",
            *_fmt(not lower_failures, lower_failures, f"{len(subjects)} ensemble(s) checked"),
        )
    )
    results.append(
        PropertyResult(
            "session-round-trip",
            *_fmt(not session_failures, session_failures, f"{len(subjects)} session(s) checked"),
        )
    )

    # Huffman optimality + Shannon chain + admissibility on the 0.05 grid.
    huffman_failures: list[str] = []
    grid = grid_distributions(5)
    for counts in grid:
        dist = LengthDistribution({i: c / 20 for i, c in enumerate(counts)})
        table = build_huffman(dist)
        mean = expected_code_length(table, dist)
        optimum = optimal_prefix_mean_twentieths(tuple(sorted(counts))) / 20
        if round(mean * 20) != round(optimum * 20):
            huffman_failures.append(f"counts {counts}: mean {mean} vs optimum {optimum}")
            continue
        entropy = shannon_entropy(dist.probs.values())
        if not (entropy - 1e-9 <= mean < entropy + 1.0):
            huffman_failures.append(f"counts {counts}: Shannon chain violated")
        if not is_prefix_free(table.codewords.values()):
            huffman_failures.append(f"counts {counts}: not prefix-free")
        if kraft_sum((len(w) for w in table.codewords.values()), 2) > 1.0 + 1e-12:
            huffman_failures.append(f"counts {counts}: Kraft sum above 1")
    results.append(
        PropertyResult(
            "huffman-optimality-and-admissibility",
            *_fmt(not huffman_failures, huffman_failures, f"{len(grid)} grid distributions"),
        )
    )

    # Length stream round trips on random tables and sequences.
    stream_failures: list[str] = []
    rng = np.random.default_rng(child_seeds[trials])
    for trial in range(32):
        symbols = int(rng.integers(1, 9))
        probs = rng.random(symbols) + 0.05
        probs /= probs.sum()
        dist = LengthDistribution({i: float(p) for i, p in enumerate(probs)})
        table = build_huffman(dist)
        seq = [int(x) for x in rng.integers(0, symbols, size=int(rng.integers(0, 200)))]
        stream = encode_lengths(table, seq)
        if decode_lengths(table, stream, len(seq)) != seq:
            stream_failures.append(f"trial {trial}: round trip mismatch")
    results.append(
        PropertyResult(
            "length-stream-round-trip",
            *_fmt(not stream_failures, stream_failures, "32 random tables"),
        )
    )

    # No-go scans by exact counting.
    nogo_failures: list[str] = []
    for dim_v in range(1, 65):
        for scan_k in range(2, 5):
            for n in range(0, 7):
                verdict = no_go_block_code(dim_v, scan_k, n)
                if verdict.feasible and verdict.compressive:
                    nogo_failures.append(f"block code ({dim_v}, {scan_k}, {n}) compressive")
    for scan_k in range(2, 5):
        for r in range(1, 11):
            for s in range(0, r):
                verdict = no_go_universal(scan_k, r, s)
                if verdict.block_to_variable_feasible or verdict.variable_to_variable_feasible:
                    nogo_failures.append(f"universal ({scan_k}, {r}, {s}) feasible")
    results.append(
        PropertyResult(
            "no-go-scans", *_fmt(not nogo_failures, nogo_failures, "exact integer scans")
        )
    )

    # Dephasing never lowers entropy.
    dephasing_failures: list[str] = []
    rng = np.random.default_rng(child_seeds[trials + 1])
    for trial in range(100):
        dim = int(rng.integers(2, 7))
        sigma = random_density(rng, dim)
        basis = list(random_unitary(rng, dim).T)
        if not dephasing_entropy_check(sigma, basis, tol=tol):
            dephasing_failures.append(f"trial {trial}: entropy decreased")
    results.append(
        PropertyResult(
            "dephasing-entropy-nondecrease",
            *_fmt(not dephasing_failures, dephasing_failures, "100 random pairs"),
        )
    )

    # Identical seeds give byte-identical transcripts.
    det_subject, det_k = subjects[0]
    try:
        det_codebook = build_codebook(det_subject, k=det_k)
        first = transcript_lines(run_session(det_subject, det_codebook, n=200, seed=seed))
        second = transcript_lines(run_session(det_subject, det_codebook, n=200, seed=seed))
        det_ok = first == second
        det_detail = "200-message session replayed identically" if det_ok else "transcripts differ"
    except ValueError as exc:
        det_ok, det_detail = False, f"session aborted: {exc}"
    results.append(PropertyResult("transcript-determinism", det_ok, det_detail))

    return results
