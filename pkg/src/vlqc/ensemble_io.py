"""Ensemble description files: parsing, canonical serialization, hashing.

The on-disk format is a single JSON document::

    {
      "k": 2,
      "ambientDim": 4,
      "normalize": true,
      "messages": [
        {"id": "a", "p": 0.6, "amps": [[1, 0], [1, 0], [1, 0], [1, 0]]},
        ...
      ]
    }

Amplitudes are always [re, im] pairs, even when purely real. With
``normalize`` (the default) amplitude vectors are scaled to unit norm on
load; probabilities are rescaled to an exact unit sum when they are off by
more than 1e-9 but within the acceptance window of 1e-6.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import linalg
from .codec import SourceEnsemble, SourceMessage

PROBABILITY_FILE_TOL = 1e-6


class EnsembleFormatError(ValueError):
    """Malformed ensemble document; the message carries location context."""


@dataclass(frozen=True)
class EnsembleFile:
    """A parsed ensemble file: the ensemble plus the channel parameters it declared."""

    ensemble: SourceEnsemble
    k: int
    normalize: bool


def _require(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise EnsembleFormatError(f"{where}: missing key {key!r}")
    value = doc[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise EnsembleFormatError(f"{where}.{key}: expected a number")
        return float(value)
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise EnsembleFormatError(f"{where}.{key}: expected an integer")
    if not isinstance(value, kind):
        raise EnsembleFormatError(f"{where}.{key}: expected {kind.__name__}")
    return value


def _parse_amps(raw, ambient_dim: int, where: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != ambient_dim:
        raise EnsembleFormatError(f"{where}: expected {ambient_dim} [re, im] pairs")
    amps = np.empty(ambient_dim, dtype=complex)
    for pos, pair in enumerate(raw):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in pair)
        ):
            raise EnsembleFormatError(f"{where}[{pos}]: expected an [re, im] pair of numbers")
        amps[pos] = complex(pair[0], pair[1])
    return amps


def parse_ensemble(text: str) -> EnsembleFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise EnsembleFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise EnsembleFormatError("top level: expected an object")
    k = _require(doc, "k", int, "top level")
    if k < 2:
        raise EnsembleFormatError("top level.k: must be >= 2")
    ambient_dim = _require(doc, "ambientDim", int, "top level")
    if ambient_dim < 1:
        raise EnsembleFormatError("top level.ambientDim: must be >= 1")
    normalize = bool(doc.get("normalize", True))
    raw_messages = _require(doc, "messages", list, "top level")
    if not raw_messages:
        raise EnsembleFormatError("messages: must be nonempty")

    messages = []
    seen_ids: set[str] = set()
    for pos, raw in enumerate(raw_messages):
        where = f"messages[{pos}]"
        if not isinstance(raw, dict):
            raise EnsembleFormatError(f"{where}: expected an object")
        msg_id = _require(raw, "id", str, where)
        if msg_id in seen_ids:
            raise EnsembleFormatError(f"{where}: duplicate id {msg_id!r}")
        seen_ids.add(msg_id)
        p = _require(raw, "p", float, where)
        if not p > 0.0:
            raise EnsembleFormatError(f"{where}.p: must be positive")
        amps = _parse_amps(raw.get("amps"), ambient_dim, f"{where}.amps")
        if float(np.linalg.norm(amps)) <= linalg.ZERO_TOL:
            raise EnsembleFormatError(f"{where}.amps: near-zero vector")
        if normalize:
            amps = linalg.normalize(amps)
        messages.append((msg_id, amps, p))

    total = sum(p for _, _, p in messages)
    if abs(total - 1.0) > PROBABILITY_FILE_TOL:
        raise EnsembleFormatError(f"probabilities sum to {total!r}, expected 1 within 1e-6")
    if abs(total - 1.0) > 1e-9:
        messages = [(i, a, p / total) for i, a, p in messages]

    ensemble = SourceEnsemble(
        messages=tuple(SourceMessage(id=i, amps=a, probability=p) for i, a, p in messages),
        ambient_dim=ambient_dim,
    )
    return EnsembleFile(ensemble=ensemble, k=k, normalize=normalize)


def load_ensemble(path) -> EnsembleFile:
    return parse_ensemble(Path(path).read_text(encoding="utf-8"))


def ensemble_document(ensemble: SourceEnsemble, k: int, normalize: bool = True) -> dict:
    return {
        "k": k,
        "ambientDim": ensemble.ambient_dim,
        "normalize": normalize,
        "messages": [
            {
                "id": m.id,
                "p": m.probability,
                "amps": [[float(a.real), float(a.imag)] for a in m.amps],
            }
            for m in ensemble.messages
        ],
    }


def dump_ensemble(ensemble: SourceEnsemble, k: int, path, normalize: bool = True) -> None:
    doc = ensemble_document(ensemble, k, normalize)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def canonical_ensemble_bytes(ensemble: SourceEnsemble) -> bytes:
    """Canonical byte serialization of the ensemble content (k-independent)."""
    doc = {
        "ambientDim": ensemble.ambient_dim,
        "messages": [
            {
                "id": m.id,
                "p": m.probability,
                "amps": [[float(a.real), float(a.imag)] for a in m.amps],
            }
            for m in ensemble.messages
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def ensemble_hash(ensemble: SourceEnsemble) -> str:
    """Hex digest identifying the ensemble, stable across runs and formatting."""
    return hashlib.sha256(canonical_ensemble_bytes(ensemble)).hexdigest()
