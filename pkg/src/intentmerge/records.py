"""Line-delimited JSON serialization for samples and datasets.

One sample per line, UTF-8, keys in a fixed order so regeneration under the
same seed is byte-identical.  Record fields: `scene` (objects with id, kind,
features), `truth` (action, bindings), `sentences` (per modality: weight and
words carrying category, options, values, empty flag), and `meta` (dataset
kind, noise level, sample seed).  Floats are written with nine significant
digits, which round-trips the decision-relevant precision while keeping
files diffable.
"""

from __future__ import annotations

import json
from typing import Iterable, Iterator, TextIO

import numpy as np

from .model import Intent, LikelihoodWord, ModalitySentence, ObjectInstance, Scene
from .simgen import GESTURE, LANGUAGE, Sample


class MalformedRecord(ValueError):
    """A dataset line does not follow the record schema."""


def _round(x: float) -> float:
    return float(f"{float(x):.9g}")


def _word_payload(word: LikelihoodWord) -> dict:
    payload: dict = {
        "category": word.category,
        "options": list(word.options),
        "values": None if word.is_empty else [_round(v) for v in word.values],
        "empty": word.is_empty,
    }
    if word.category_likelihoods is not None:
        payload["category_likelihoods"] = {
            k: _round(v) for k, v in sorted(word.category_likelihoods.items())
        }
    return payload


def _sentence_payload(sentence: ModalitySentence) -> dict:
    return {
        "weight": _round(sentence.weight),
        "words": [_word_payload(w) for w in sentence.words],
    }


def sample_to_record(sample: Sample) -> dict:
    meta = {
        "kind": sample.kind,
        "noise": sample.noise,
        "seed": int(sample.seed),
    }
    if sample.decoy_action is not None:
        meta["decoy_action"] = sample.decoy_action
        meta["decoy_modality"] = sample.decoy_modality
    return {
        "scene": {
            "objects": [
                {
                    "id": obj.id,
                    "kind": obj.kind,
                    "features": {k: _round(v) for k, v in sorted(obj.features.items())},
                }
                for obj in sample.scene.objects
            ]
        },
        "truth": {
            "action": sample.truth.action,
            "bindings": dict(sorted(sample.truth.bindings.items())),
        },
        "sentences": {
            GESTURE: _sentence_payload(sample.gesture_sentence),
            LANGUAGE: _sentence_payload(sample.language_sentence),
        },
        "meta": meta,
    }


def _word_from_payload(payload: dict) -> LikelihoodWord:
    values = payload.get("values")
    if payload.get("empty", values is None):
        values = None
    likelihoods = payload.get("category_likelihoods")
    return LikelihoodWord(
        options=tuple(payload["options"]),
        values=None if values is None else np.asarray(values, dtype=np.float64),
        category=payload.get("category"),
        category_likelihoods=None if likelihoods is None else dict(likelihoods),
    )


def _sentence_from_payload(modality: str, payload: dict) -> ModalitySentence:
    return ModalitySentence(
        modality=modality,
        words=tuple(_word_from_payload(w) for w in payload["words"]),
        weight=float(payload.get("weight", 1.0)),
    )


def record_to_sample(record: dict) -> Sample:
    try:
        meta = record.get("meta", {})
        truth = record.get("truth") or {}
        return Sample(
            scene=Scene(
                objects=tuple(
                    ObjectInstance(
                        id=o["id"], kind=o["kind"], features=dict(o["features"])
                    )
                    for o in record["scene"]["objects"]
                )
            ),
            truth=Intent(
                action=truth.get("action", ""),
                bindings=dict(truth.get("bindings", {})),
            ),
            gesture_sentence=_sentence_from_payload(
                GESTURE, record["sentences"][GESTURE]
            ),
            language_sentence=_sentence_from_payload(
                LANGUAGE, record["sentences"][LANGUAGE]
            ),
            kind=meta.get("kind", "aligned"),
            noise=meta.get("noise", "n0"),
            seed=int(meta.get("seed", 0)),
            decoy_action=meta.get("decoy_action"),
            decoy_modality=meta.get("decoy_modality"),
        )
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise MalformedRecord(f"bad sample record: {exc}") from exc


def dump_sample(sample: Sample) -> str:
    return json.dumps(sample_to_record(sample), separators=(",", ":"), sort_keys=False)


def parse_record_line(line: str) -> Sample:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"not valid JSON: {exc}") from exc
    if not isinstance(record, dict):
        raise MalformedRecord("record line must hold a JSON object")
    return record_to_sample(record)


def write_dataset(samples: Iterable[Sample], handle: TextIO) -> int:
    count = 0
    for sample in samples:
        handle.write(dump_sample(sample) + "\n")
        count += 1
    return count


def iter_dataset(handle: TextIO) -> Iterator[Sample]:
    for line in handle:
        line = line.strip()
        if line:
            yield parse_record_line(line)


def read_dataset(handle: TextIO) -> list[Sample]:
    return list(iter_dataset(handle))


def save_dataset(samples: Iterable[Sample], path) -> int:
    with open(path, "w", encoding="utf-8") as handle:
        return write_dataset(samples, handle)


def load_dataset(path) -> list[Sample]:
    with open(path, "r", encoding="utf-8") as handle:
        return read_dataset(handle)
