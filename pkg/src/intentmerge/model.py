"""Core data model: likelihood words, modality sentences, scenes and action signatures.

A *word* is a vector of non-negative likelihoods over the option vocabulary of one
category (actions, target objects, ...).  A *sentence* is the ordered list of words
one input channel produced for a single utterance.  Words are stored as emitted,
possibly unnormalized; they are normalized at the point of use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

ACTION_CATEGORY = "action"
TARGET_CATEGORY = "target_object"
STORAGE_CATEGORY = "storage_object"

OBJECT_KIND = "object"
STORAGE_KIND = "storage"


class AllZeroVectorError(ValueError):
    """A likelihood vector with no mass cannot be normalized or ranked."""


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def normalize_values(values: np.ndarray) -> np.ndarray:
    """Scale a non-negative vector to unit sum.  Raises AllZeroVectorError."""
    total = float(values.sum())
    if total <= 0.0:
        raise AllZeroVectorError("cannot normalize a vector with zero total mass")
    return values / total


@dataclass(frozen=True)
class LikelihoodWord:
    """Likelihoods over one category's options; ``values is None`` marks an
    empty word (the channel did not express this position)."""

    options: tuple[str, ...]
    values: np.ndarray | None
    category: str | None = None
    # soft category evidence for the unsegmented path; known-category words
    # are treated as one-hot evidence on `category`
    category_likelihoods: Mapping[str, float] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "options", tuple(self.options))
        if self.values is not None:
            arr = _readonly(self.values)
            if arr.ndim != 1 or len(arr) != len(self.options):
                raise ValueError("values must be a vector aligned with options")
            if np.any(arr < 0):
                raise ValueError("likelihoods must be non-negative")
            object.__setattr__(self, "values", arr)

    @classmethod
    def empty(cls, options: tuple[str, ...] = (), category: str | None = None) -> "LikelihoodWord":
        return cls(options=options, values=None, category=category)

    @property
    def is_empty(self) -> bool:
        return self.values is None

    def value_of(self, option: str) -> float:
        if self.is_empty:
            return 0.0
        try:
            return float(self.values[self.options.index(option)])
        except ValueError:
            return 0.0

    def normalized(self) -> "LikelihoodWord":
        return normalize(self)

    @property
    def argmax_option(self) -> str:
        if self.is_empty:
            raise AllZeroVectorError("empty word has no argmax")
        return self.options[int(np.argmax(self.values))]

    def with_values(self, values: np.ndarray) -> "LikelihoodWord":
        return LikelihoodWord(
            options=self.options,
            values=values,
            category=self.category,
            category_likelihoods=self.category_likelihoods,
        )


def normalize(word: LikelihoodWord) -> LikelihoodWord:
    """Return the word scaled to unit sum.  Idempotent; preserves ranking."""
    if word.is_empty:
        raise ValueError("cannot normalize an empty word")
    return word.with_values(normalize_values(word.values))


@dataclass(frozen=True)
class ModalitySentence:
    """One channel's words for an utterance, with the channel's mixing weight."""

    modality: str
    words: tuple[LikelihoodWord, ...]
    weight: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", tuple(self.words))
        if self.weight <= 0:
            raise ValueError("modality weight must be positive")

    def __len__(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class FeatureLiteral:
    """A required feature value: ``desired=False`` encodes a negated literal."""

    feature: str
    desired: bool = True


@dataclass(frozen=True)
class ActionSpec:
    """Signature of one action: parameter categories and per-kind feature
    requirements for candidate target/storage objects."""

    id: str
    compulsory: frozenset[str] = frozenset()
    voluntary: frozenset[str] = frozenset()
    target_requirements: tuple[FeatureLiteral, ...] = ()
    storage_requirements: tuple[FeatureLiteral, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "compulsory", frozenset(self.compulsory))
        object.__setattr__(self, "voluntary", frozenset(self.voluntary))
        object.__setattr__(self, "target_requirements", tuple(self.target_requirements))
        object.__setattr__(self, "storage_requirements", tuple(self.storage_requirements))

    @property
    def requires_target(self) -> bool:
        return TARGET_CATEGORY in self.compulsory or TARGET_CATEGORY in self.voluntary

    @property
    def requires_storage(self) -> bool:
        return STORAGE_CATEGORY in self.compulsory or STORAGE_CATEGORY in self.voluntary


@dataclass(frozen=True)
class ObjectInstance:
    """A physical object or storage location with feature likelihoods in [0, 1]."""

    id: str
    kind: str
    features: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in (OBJECT_KIND, STORAGE_KIND):
            raise ValueError(f"unknown object kind {self.kind!r}")
        object.__setattr__(self, "features", dict(self.features))
        for name, value in self.features.items():
            if not 0.0 <= float(value) <= 1.0:
                raise ValueError(f"feature {name!r} outside [0, 1]")


@dataclass(frozen=True)
class Scene:
    objects: tuple[ObjectInstance, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        ids = [o.id for o in self.objects]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate object ids in scene")

    def lookup(self, object_id: str) -> ObjectInstance | None:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        return None

    def of_kind(self, kind: str) -> tuple[ObjectInstance, ...]:
        return tuple(o for o in self.objects if o.kind == kind)


@dataclass(frozen=True)
class Intent:
    """A resolved command: the action and one bound option per compulsory category."""

    action: str
    bindings: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "bindings", dict(self.bindings))


@dataclass(frozen=True)
class Domain:
    """Static task knowledge: categories, features, action signatures and the
    option vocabulary of each category."""

    categories: tuple[str, ...]
    features: tuple[str, ...]
    actions: tuple[ActionSpec, ...]
    vocab: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "categories", tuple(self.categories))
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "vocab", {k: tuple(v) for k, v in self.vocab.items()})

    @property
    def action_ids(self) -> tuple[str, ...]:
        return self.vocab.get(ACTION_CATEGORY, tuple(a.id for a in self.actions))

    def spec_for(self, action_id: str) -> ActionSpec:
        for spec in self.actions:
            if spec.id == action_id:
                return spec
        raise KeyError(action_id)


def validate_domain(domain: Domain) -> list[str]:
    """Collect consistency violations as human-readable strings (empty = valid)."""
    problems: list[str] = []

    def dupes(names, label):
        seen = set()
        for n in names:
            if n in seen:
                problems.append(f"duplicate {label} {n!r}")
            seen.add(n)

    dupes(domain.categories, "category")
    dupes(domain.features, "feature")
    dupes([a.id for a in domain.actions], "action")

    categories = set(domain.categories)
    features = set(domain.features)

    if ACTION_CATEGORY not in categories:
        problems.append(f"missing category {ACTION_CATEGORY!r}")

    for cat in domain.vocab:
        if cat not in categories:
            problems.append(f"vocabulary for unknown category {cat!r}")
        dupes(domain.vocab[cat], f"option in vocab {cat!r}")

    for spec in domain.actions:
        for cat in spec.compulsory | spec.voluntary:
            if cat not in categories:
                problems.append(f"action {spec.id!r} references unknown category {cat!r}")
            if cat == ACTION_CATEGORY:
                problems.append(f"action {spec.id!r} lists {ACTION_CATEGORY!r} as a parameter")
        overlap = spec.compulsory & spec.voluntary
        if overlap:
            problems.append(
                f"action {spec.id!r} lists {sorted(overlap)} as both compulsory and voluntary"
            )
        for literal in spec.target_requirements + spec.storage_requirements:
            if literal.feature not in features:
                problems.append(f"action {spec.id!r} requires unknown feature {literal.feature!r}")
        if spec.target_requirements and not spec.requires_target:
            problems.append(f"action {spec.id!r} has target requirements but no target parameter")
        if spec.storage_requirements and not spec.requires_storage:
            problems.append(f"action {spec.id!r} has storage requirements but no storage parameter")

    action_vocab = domain.vocab.get(ACTION_CATEGORY)
    if action_vocab is not None:
        declared = {a.id for a in domain.actions}
        for aid in action_vocab:
            if aid not in declared:
                problems.append(f"vocab action {aid!r} has no action declaration")
        for aid in declared:
            if aid not in action_vocab:
                problems.append(f"declared action {aid!r} missing from action vocabulary")

    return problems
