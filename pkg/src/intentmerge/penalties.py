"""Context penalties that score each action against the observed sentence and scene.

The signature penalty compares an action's parameter signature with the
categories actually expressed: each missing compulsory category and each
expressed-but-unexpected category multiplies the action by the penalty base.
The property penalty checks whether plausible candidate objects actually
satisfy the feature requirements of the action.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

import numpy as np

from .fusion import MergedSentence
from .model import (
    ACTION_CATEGORY,
    STORAGE_CATEGORY,
    TARGET_CATEGORY,
    ActionSpec,
    FeatureLiteral,
    LikelihoodWord,
    ObjectInstance,
    Scene,
    normalize_values,
)

DEFAULT_PENALTY_BASE = 0.2
DEFAULT_NOISE_GATE = 0.05

# a clear-candidate gate: either one probability threshold for every word or a
# callable deriving the threshold from the word's normalized values
ClearGate = float | Callable[[np.ndarray], float]


class InvalidPenaltyBase(ValueError):
    """Penalty base must lie in (0, 1]."""


class UnknownFeatureError(ValueError):
    """A requirement references a feature the object does not carry."""


def _category_evidence(word: LikelihoodWord) -> Mapping[str, float]:
    if word.category is not None:
        return {word.category: 1.0}
    return word.category_likelihoods or {}


def category_presence(
    merged: MergedSentence, noise_gate: float = DEFAULT_NOISE_GATE
) -> dict[str, float]:
    """Per-category expression evidence from the merged sentence.

    A word counts as expressed when its strongest normalized option exceeds
    the noise gate; its category evidence (one-hot for known categories) is
    max-combined across words.
    """
    presence: dict[str, float] = {}
    for word in merged.words:
        if word.is_empty:
            continue
        peak = float(np.max(normalize_values(word.values)))
        if peak <= noise_gate:
            continue
        for category, likelihood in _category_evidence(word).items():
            presence[category] = max(presence.get(category, 0.0), float(likelihood))
    return presence


def signature_penalty(
    spec: ActionSpec,
    presence: Mapping[str, float],
    base: float = DEFAULT_PENALTY_BASE,
) -> float:
    """``base ** L`` where L counts missing compulsory and extraneous categories.

    The action category itself never counts as extraneous: an action word is
    present in every sentence and would shift all actions uniformly.
    """
    if not 0.0 < base <= 1.0:
        raise InvalidPenaltyBase(f"penalty base must be in (0, 1], got {base!r}")
    mismatch = 0.0
    for category in spec.compulsory:
        mismatch += 1.0 - float(presence.get(category, 0.0))
    allowed = spec.compulsory | spec.voluntary | {ACTION_CATEGORY}
    for category, evidence in presence.items():
        if category not in allowed:
            mismatch += float(evidence)
    return float(base**mismatch)


def feature_alignment(
    requirements: Iterable[FeatureLiteral], candidate: ObjectInstance
) -> float:
    """``1 - max |feature - desired|`` over the required literals (1.0 if none)."""
    worst = 0.0
    for literal in requirements:
        if literal.feature not in candidate.features:
            raise UnknownFeatureError(
                f"object {candidate.id!r} has no feature {literal.feature!r}"
            )
        desired = 1.0 if literal.desired else 0.0
        worst = max(worst, abs(float(candidate.features[literal.feature]) - desired))
    return 1.0 - worst


def _kind_term(
    requirements: tuple[FeatureLiteral, ...],
    word: LikelihoodWord | None,
    scene: Scene,
    gate: ClearGate,
) -> float:
    if word is None or word.is_empty:
        return 0.0
    values = normalize_values(word.values)
    threshold = gate(values) if callable(gate) else float(gate)
    best = 0.0
    any_candidate = False
    for option, value in zip(word.options, values):
        if value <= threshold:
            continue
        candidate = scene.lookup(option)
        if candidate is None:
            continue
        any_candidate = True
        best = max(best, feature_alignment(requirements, candidate))
    return best if any_candidate else 0.0


def property_penalty(
    spec: ActionSpec,
    merged: MergedSentence,
    scene: Scene,
    clear_gate: ClearGate,
) -> float:
    """Best achievable feature alignment for the action's object parameters.

    Per required kind (target/storage) the candidates are the options of the
    corresponding merged word whose normalized likelihood exceeds the clear
    gate; the term is the best alignment among them, zero when no candidate
    exists.  Terms multiply; an action without object parameters scores 1.
    """
    penalty = 1.0
    if spec.requires_target:
        penalty *= _kind_term(
            spec.target_requirements, merged.word_for(TARGET_CATEGORY), scene, clear_gate
        )
    if spec.requires_storage:
        penalty *= _kind_term(
            spec.storage_requirements, merged.word_for(STORAGE_CATEGORY), scene, clear_gate
        )
    return float(penalty)
