import json
import math

import numpy as np
import pytest

from vlqc.protocol import (
    QuantumPayload,
    alice_send,
    bob_receive,
    read_transcript,
    replay_decode,
    run_session,
    transcript_lines,
    verify_lossless,
    write_transcript,
)
from vlqc.reference_example import reference_codebook, reference_ensemble
from vlqc.sidechannel import build_huffman, length_distribution
from vlqc.verify import random_ensemble
from vlqc.codec import build_codebook


@pytest.fixture(scope="module")
def ensemble():
    return reference_ensemble()


@pytest.fixture(scope="module")
def codebook():
    return reference_codebook()


@pytest.fixture(scope="module")
def table(ensemble, codebook):
    return build_huffman(length_distribution(ensemble, codebook.base_lengths))


def test_alice_send_empty_payload(ensemble, codebook, table):
    bits, payload = alice_send(codebook, table, ensemble.find("a"))
    assert bits == table.codewords[0]
    assert payload.length == 0
    assert payload.amps.shape == (1,)
    np.testing.assert_allclose(payload.amps, [1.0], atol=1e-12)


def test_alice_send_one_digit(ensemble, codebook, table):
    bits, payload = alice_send(codebook, table, ensemble.find("b"))
    assert bits == table.codewords[1]
    assert payload.length == 1
    np.testing.assert_allclose(
        payload.amps.real, [5 / (2 * math.sqrt(7)), 3 / (2 * math.sqrt(21))], atol=1e-12
    )


def test_alice_send_full_length(ensemble, codebook, table):
    bits, payload = alice_send(codebook, table, ensemble.find("e"))
    assert bits == table.codewords[2]
    assert payload.length == 2
    assert payload.amps.shape == (4,)


def test_alice_send_unknown_message(codebook, table):
    from vlqc.codec import SourceMessage

    stranger = SourceMessage("zz", np.array([1, 0, 0, 0], dtype=complex), 1.0)
    with pytest.raises(ValueError, match="unknown"):
        alice_send(codebook, table, stranger)


def test_bob_receive_empty_payload(ensemble, codebook, table):
    decoded = bob_receive(codebook, table, table.codewords[0], QuantumPayload(0, np.array([1.0 + 0j])))
    np.testing.assert_allclose(decoded, ensemble.find("a").unit_amps(), atol=1e-12)


def test_bob_receive_round_trip_every_message(ensemble, codebook, table):
    for msg in ensemble.messages:
        bits, payload = alice_send(codebook, table, msg)
        decoded = bob_receive(codebook, table, bits, payload)
        assert abs(np.vdot(msg.unit_amps(), decoded)) ** 2 >= 1 - 1e-12


def test_bob_receive_header_payload_mismatch(codebook, table):
    payload = QuantumPayload(1, np.array([1, 0], dtype=complex))
    with pytest.raises(ValueError, match="digits"):
        bob_receive(codebook, table, table.codewords[2], payload)


def test_bob_receive_trailing_bits(codebook, table):
    payload = QuantumPayload(0, np.array([1.0 + 0j]))
    with pytest.raises(ValueError, match="trailing"):
        bob_receive(codebook, table, table.codewords[0] + "0", payload)


def test_session_expected_accounting(ensemble, codebook):
    transcript = run_session(ensemble, codebook, n=100, seed=11)
    assert len(transcript.records) == 100
    assert transcript.total_qubits == sum(r.base_length for r in transcript.records)
    assert transcript.total_classical_bits == sum(len(r.classical_bits) for r in transcript.records)
    assert verify_lossless(transcript, ensemble)
    # typical cost near 0.5 digits/message; generous window for n=100
    assert 0.2 <= transcript.total_qubits / 100 <= 0.9


def test_single_message_session_costs_one_bit_no_qubits(ensemble, codebook):
    # seed 1 draws the most probable message, whose codeword is empty
    transcript = run_session(ensemble, codebook, n=1, seed=1)
    record = transcript.records[0]
    assert record.message_id == "a"
    assert transcript.total_qubits == 0
    assert transcript.total_classical_bits == 1
    assert record.fidelity >= 1 - 1e-12


def test_session_deterministic(ensemble, codebook):
    first = run_session(ensemble, codebook, n=500, seed=42)
    second = run_session(ensemble, codebook, n=500, seed=42)
    assert transcript_lines(first) == transcript_lines(second)
    third = run_session(ensemble, codebook, n=500, seed=43)
    assert transcript_lines(first) != transcript_lines(third)


def test_session_statistics_converge(ensemble, codebook):
    n = 10_000
    transcript = run_session(ensemble, codebook, n=n, seed=5)
    qubits_per_message = transcript.total_qubits / n
    bits_per_message = transcript.total_classical_bits / n
    # 3 sigma bands: Var(L) = 0.45, Var(|c|) = 0.24
    assert abs(qubits_per_message - 0.5) <= 3 * math.sqrt(0.45 / n)
    assert abs(bits_per_message - 1.4) <= 3 * math.sqrt(0.24 / n)


def test_session_preserves_order(ensemble, codebook):
    transcript = run_session(ensemble, codebook, n=50, seed=9)
    by_id = {m.id: m.unit_amps() for m in ensemble.messages}
    for i, record in enumerate(transcript.records):
        assert record.index == i
        assert abs(np.vdot(by_id[record.message_id], record.decoded)) ** 2 >= 1 - 1e-12


def test_side_channel_stream_concatenation(ensemble, codebook):
    transcript = run_session(ensemble, codebook, n=64, seed=3)
    stream = transcript.side_channel_stream()
    assert stream == "".join(r.classical_bits for r in transcript.records)
    assert len(stream) == transcript.total_classical_bits


def test_verify_lossless_rejects_corruption(ensemble, codebook, table):
    transcript = run_session(ensemble, codebook, n=30, seed=21)
    assert verify_lossless(transcript, ensemble)
    # corrupt one stored payload (swap a basis amplitude pair) and re-decode
    target = next(r for r in transcript.records if r.base_length == 2)
    doc = {
        "baseLength": target.base_length,
        "classicalBits": target.classical_bits,
        "payloadAmps": [[float(a.real), float(a.imag)] for a in target.payload.amps[::-1]],
    }
    corrupted = replay_decode(codebook, table, doc)
    source = ensemble.find(target.message_id).unit_amps()
    assert abs(np.vdot(source, corrupted)) ** 2 < 1 - 1e-9


def test_transcript_file_round_trip(tmp_path, ensemble, codebook, table):
    transcript = run_session(ensemble, codebook, n=25, seed=8)
    path = tmp_path / "session.jsonl"
    write_transcript(transcript, path)
    header, records = read_transcript(path)
    assert header == {
        "k": 2,
        "r": 2,
        "seed": 8,
        "n": 25,
        "ensembleHash": transcript.ensemble_hash,
    }
    assert len(records) == 25
    for record, original in zip(records, transcript.records):
        assert record["messageId"] == original.message_id
        assert record["classicalBits"] == original.classical_bits
        # amplitudes survive the file bit-exactly (shortest round-trip floats)
        amps = np.array([complex(re, im) for re, im in record["payloadAmps"]])
        assert np.array_equal(amps, original.payload.amps)
    # replay every record from the file alone and check losslessness
    by_id = {m.id: m.unit_amps() for m in ensemble.messages}
    for record in records:
        decoded = replay_decode(codebook, table, record)
        assert abs(np.vdot(by_id[record["messageId"]], decoded)) ** 2 >= 1 - 1e-12


def test_transcript_write_is_byte_identical(tmp_path, ensemble, codebook):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    write_transcript(run_session(ensemble, codebook, n=40, seed=77), a)
    write_transcript(run_session(ensemble, codebook, n=40, seed=77), b)
    assert a.read_bytes() == b.read_bytes()


def test_transcript_header_is_json_line(tmp_path, ensemble, codebook):
    path = tmp_path / "t.jsonl"
    write_transcript(run_session(ensemble, codebook, n=3, seed=1), path)
    first_line = path.read_text().splitlines()[0]
    header = json.loads(first_line)
    assert set(header) == {"k", "r", "seed", "n", "ensembleHash"}


def test_sessions_on_random_ensembles():
    rng = np.random.default_rng(123)
    for trial in range(10):
        ens = random_ensemble(rng, int(rng.integers(2, 6)), int(rng.integers(3, 10)))
        cb = build_codebook(ens, k=2)
        transcript = run_session(ens, cb, n=200, seed=trial)
        assert verify_lossless(transcript, ens)


def test_storage_mode_decodes_later(tmp_path, ensemble, codebook, table):
    # write today, decode tomorrow: only the file and the decoder are needed
    path = tmp_path / "stored.jsonl"
    original = run_session(ensemble, codebook, n=12, seed=2)
    write_transcript(original, path)
    _, records = read_transcript(path)
    decoded_stream = [replay_decode(codebook, table, record) for record in records]
    for record, decoded in zip(original.records, decoded_stream):
        np.testing.assert_allclose(decoded, record.decoded, atol=1e-12)


def test_payload_requires_unit_norm():
    with pytest.raises(ValueError, match="unit"):
        QuantumPayload(1, np.array([1, 1], dtype=complex))
