"""Position-wise merging of modality sentences into one sentence.

Each position is mixed across the channels that expressed it with one of three
operators (weighted max, product, or sum); empty words contribute nothing.
Optional confidence weighting scales every contributing word by its inverse
per-option cross-entropy first, so confident channels carry more mass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .entropy import confidence_weights
from .model import LikelihoodWord, ModalitySentence, normalize_values

MERGE_OPERATORS = ("max", "mul", "add")


class LengthMismatchError(ValueError):
    """Sentences or option lists do not align."""


class CategoryConflictError(ValueError):
    """Two channels expressed different known categories at the same position."""


@dataclass(frozen=True)
class MergeConfig:
    operator: str = "add"
    modality_weights: Mapping[str, float] | None = None
    entropy_penalization: bool = False
    renormalize: bool = True

    def __post_init__(self) -> None:
        if self.operator not in MERGE_OPERATORS:
            raise ValueError(f"unknown merge operator {self.operator!r}")
        if self.modality_weights is not None:
            weights = dict(self.modality_weights)
            for name, w in weights.items():
                if w <= 0:
                    raise ValueError(f"weight for {name!r} must be positive")
            object.__setattr__(self, "modality_weights", weights)

    def weight_for(self, sentence: ModalitySentence) -> float:
        if self.modality_weights is not None and sentence.modality in self.modality_weights:
            return float(self.modality_weights[sentence.modality])
        return float(sentence.weight)


@dataclass(frozen=True)
class MergedSentence:
    """Merged words plus, per position, which modalities contributed."""

    words: tuple[LikelihoodWord, ...]
    sources: tuple[tuple[str, ...], ...]

    def __len__(self) -> int:
        return len(self.words)

    def word_for(self, category: str) -> LikelihoodWord | None:
        for word in self.words:
            if word.category == category and not word.is_empty:
                return word
        return None


def mix_vectors(
    operator: str,
    vectors: Sequence[np.ndarray],
    weights: Sequence[float] | None = None,
) -> np.ndarray:
    """Combine aligned likelihood vectors element-wise under one operator."""
    if operator not in MERGE_OPERATORS:
        raise ValueError(f"unknown merge operator {operator!r}")
    if not vectors:
        raise ValueError("nothing to mix")
    length = len(vectors[0])
    if any(len(v) != length for v in vectors):
        raise LengthMismatchError("vectors must share a length")
    if weights is None:
        weights = [1.0] * len(vectors)
    scaled = [np.asarray(v, dtype=np.float64) * w for v, w in zip(vectors, weights)]
    if operator == "add":
        return np.sum(scaled, axis=0)
    if operator == "max":
        return np.max(scaled, axis=0)
    out = scaled[0].copy()
    for v in scaled[1:]:
        out *= v
    return out


def _aligned_values(word: LikelihoodWord, options: tuple[str, ...]) -> np.ndarray:
    """Word values reordered to `options`; option *sets* must match."""
    if word.options == options:
        return np.asarray(word.values, dtype=np.float64)
    if set(word.options) != set(options):
        raise LengthMismatchError(
            f"option sets differ at a shared position: {word.options} vs {options}"
        )
    index = {opt: i for i, opt in enumerate(word.options)}
    return np.asarray([word.values[index[o]] for o in options], dtype=np.float64)


def _merged_category_likelihoods(words: Sequence[LikelihoodWord]) -> dict[str, float] | None:
    merged: dict[str, float] = {}
    any_soft = False
    for word in words:
        if word.category_likelihoods is None:
            continue
        any_soft = True
        for cat, lik in word.category_likelihoods.items():
            merged[cat] = max(merged.get(cat, 0.0), float(lik))
    return merged if any_soft else None


def merge_sentences(
    sentences: Sequence[ModalitySentence], config: MergeConfig | None = None
) -> MergedSentence:
    """Merge equal-length sentences position-wise into one sentence.

    Non-empty words at a position must agree on the known category; their
    values are normalized, optionally confidence-weighted, aligned by option
    id, then mixed.  The mixed word is renormalized unless configured off.
    """
    config = config or MergeConfig()
    if not sentences:
        raise ValueError("nothing to merge")
    length = len(sentences[0])
    if any(len(s) != length for s in sentences):
        raise LengthMismatchError("sentences must share a length")

    words: list[LikelihoodWord] = []
    sources: list[tuple[str, ...]] = []
    for i in range(length):
        contributions = [
            (s, s.words[i]) for s in sentences if not s.words[i].is_empty
        ]
        if not contributions:
            position_words = [s.words[i] for s in sentences]
            category = next((w.category for w in position_words if w.category), None)
            options = next((w.options for w in position_words if w.options), ())
            words.append(LikelihoodWord.empty(options=options, category=category))
            sources.append(())
            continue

        categories = {w.category for _, w in contributions if w.category is not None}
        if len(categories) > 1:
            raise CategoryConflictError(
                f"conflicting categories at position {i}: {sorted(categories)}"
            )
        category = categories.pop() if categories else None

        options = contributions[0][1].options
        values = []
        weights = []
        for sentence, word in contributions:
            v = normalize_values(_aligned_values(word, options))
            if config.entropy_penalization:
                v = confidence_weights(v) * v
            values.append(v)
            weights.append(config.weight_for(sentence))
        mixed = mix_vectors(config.operator, values, weights)
        if config.renormalize and mixed.sum() > 0:
            mixed = normalize_values(mixed)

        words.append(
            LikelihoodWord(
                options=options,
                values=mixed,
                category=category,
                category_likelihoods=_merged_category_likelihoods([w for _, w in contributions]),
            )
        )
        sources.append(tuple(s.modality for s, _ in contributions))

    return MergedSentence(words=tuple(words), sources=tuple(sources))
