"""Turning a merged sentence into an executable decision.

Action likelihoods combine the merged action word with the signature and
property penalties.  Each action is then classified clear / unclear / noise,
either against fixed probability thresholds or against an entropy reference,
and the final decision binds one option per compulsory parameter category.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .entropy import (
    DEFAULT_REFERENCE_SEED,
    UNIFORM_NOISE,
    confidence_weights,
    reference_entropy,
)
from .fusion import MergeConfig, MergedSentence, merge_sentences
from .model import (
    ACTION_CATEGORY,
    AllZeroVectorError,
    Domain,
    Intent,
    LikelihoodWord,
    ModalitySentence,
    Scene,
    normalize_values,
)
from .penalties import (
    DEFAULT_NOISE_GATE,
    DEFAULT_PENALTY_BASE,
    category_presence,
    property_penalty,
    signature_penalty,
)

CLEAR = "clear"
UNCLEAR = "unclear"
NOISE = "noise"

FIXED = "fixed"
ENTROPY = "entropy"
NONE = "none"


@dataclass(frozen=True)
class ThresholdScheme:
    """How normalized likelihoods are split into clear / unclear / noise.

    ``fixed`` compares against tuned probability cuts; ``entropy`` calls an
    option clear when its per-option cross-entropy is below a reference
    entropy; ``none`` disables refinement (plain argmax is clear).
    """

    kind: str = FIXED
    t_clear: float = 0.25
    t_unclear: float = 0.11
    t_noise: float = DEFAULT_NOISE_GATE
    reference: str = UNIFORM_NOISE
    seed: int = DEFAULT_REFERENCE_SEED

    def __post_init__(self) -> None:
        if self.kind not in (FIXED, ENTROPY, NONE):
            raise ValueError(f"unknown threshold scheme {self.kind!r}")


def fixed_thresholds(t_clear: float = 0.25, t_unclear: float = 0.11) -> ThresholdScheme:
    return ThresholdScheme(kind=FIXED, t_clear=t_clear, t_unclear=t_unclear)


def entropy_thresholds(
    reference: str = UNIFORM_NOISE,
    t_noise: float = DEFAULT_NOISE_GATE,
    seed: int = DEFAULT_REFERENCE_SEED,
) -> ThresholdScheme:
    return ThresholdScheme(kind=ENTROPY, reference=reference, t_noise=t_noise, seed=seed)


def no_thresholds() -> ThresholdScheme:
    return ThresholdScheme(kind=NONE)


def clear_gate(scheme: ThresholdScheme, values: np.ndarray) -> float:
    """Probability a candidate option must exceed to count as clear."""
    if scheme.kind == FIXED:
        return scheme.t_clear
    if scheme.kind == ENTROPY:
        return float(np.exp(-reference_entropy(scheme.reference, values, scheme.seed)))
    return 0.0


@dataclass(frozen=True)
class ActionLikelihoods:
    """Per-action likelihoods with their factorization for diagnostics."""

    actions: tuple[str, ...]
    values: np.ndarray
    raw: np.ndarray
    signature_penalties: np.ndarray
    property_penalties: np.ndarray

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.actions, self.values.tolist()))


@dataclass(frozen=True)
class Decision:
    mode: str
    intent: Intent | None
    prompt: str
    per_action_modes: Mapping[str, str] = field(default_factory=dict)
    likelihoods: ActionLikelihoods | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_action_modes", dict(self.per_action_modes))


def action_likelihoods(
    merged: MergedSentence,
    scene: Scene,
    domain: Domain,
    scheme: ThresholdScheme,
    penalty_base: float = DEFAULT_PENALTY_BASE,
    use_signature: bool = True,
    use_properties: bool = True,
) -> ActionLikelihoods:
    """Normalized action-word likelihoods scaled by the enabled penalties."""
    actions = domain.action_ids
    word = merged.word_for(ACTION_CATEGORY)
    if word is None:
        zeros = np.zeros(len(actions))
        ones = np.ones(len(actions))
        return ActionLikelihoods(actions, zeros, zeros.copy(), ones, ones.copy())

    values = normalize_values(word.values)
    raw = np.asarray([values[word.options.index(a)] if a in word.options else 0.0 for a in actions])

    alpha = np.ones(len(actions))
    beta = np.ones(len(actions))
    if use_signature or use_properties:
        presence = category_presence(merged, scheme.t_noise)
        gate = None if not use_properties else (lambda v: clear_gate(scheme, v))
        for j, action_id in enumerate(actions):
            spec = domain.spec_for(action_id)
            if use_signature:
                alpha[j] = signature_penalty(spec, presence, penalty_base)
            if use_properties:
                beta[j] = property_penalty(spec, merged, scene, gate)

    return ActionLikelihoods(actions, raw * alpha * beta, raw, alpha, beta)


def select_action(likelihoods: ActionLikelihoods) -> str:
    """Most likely action; first index wins ties."""
    if float(likelihoods.values.max(initial=0.0)) <= 0.0:
        raise AllZeroVectorError("no action carries any likelihood")
    return likelihoods.actions[int(np.argmax(likelihoods.values))]


def select_parameters(
    spec, merged: MergedSentence, scheme: ThresholdScheme
) -> dict[str, str | None]:
    """Bind each compulsory category to its strongest clear option (or None)."""
    bindings: dict[str, str | None] = {}
    for category in sorted(spec.compulsory):
        word = merged.word_for(category)
        if word is None or word.is_empty:
            bindings[category] = None
            continue
        values = normalize_values(word.values)
        threshold = clear_gate(scheme, values)
        eligible = values > threshold
        if not eligible.any():
            bindings[category] = None
            continue
        masked = np.where(eligible, values, -1.0)
        bindings[category] = word.options[int(np.argmax(masked))]
    return bindings


def classify_actions(values: np.ndarray, scheme: ThresholdScheme) -> list[str]:
    """Per-action clear / unclear / noise labels for a likelihood vector."""
    values = np.asarray(values, dtype=np.float64)
    total = float(values.sum())
    if total <= 0.0:
        return [NOISE] * len(values)
    normalized = values / total

    if scheme.kind == NONE:
        modes = [NOISE] * len(values)
        modes[int(np.argmax(normalized))] = CLEAR
        return modes

    if scheme.kind == FIXED:
        modes = []
        for p in normalized:
            if p > scheme.t_clear:
                modes.append(CLEAR)
            elif p > scheme.t_unclear:
                modes.append(UNCLEAR)
            else:
                modes.append(NOISE)
        return modes

    h_ref = reference_entropy(scheme.reference, normalized, scheme.seed)
    gate = float(np.exp(-h_ref))
    modes = []
    for p in normalized:
        if p <= scheme.t_noise:
            modes.append(NOISE)
        elif p > gate:  # equivalently: -ln(p) < h_ref
            modes.append(CLEAR)
        else:
            modes.append(UNCLEAR)
    return modes


def decide(
    merged: MergedSentence,
    scene: Scene,
    domain: Domain,
    scheme: ThresholdScheme,
    penalty_base: float = DEFAULT_PENALTY_BASE,
    use_signature: bool = True,
    use_properties: bool = True,
) -> Decision:
    """Resolve a merged sentence into a clear intent, a clarification, or noise."""
    likelihoods = action_likelihoods(
        merged, scene, domain, scheme, penalty_base, use_signature, use_properties
    )
    modes = classify_actions(likelihoods.values, scheme)
    per_action = dict(zip(likelihoods.actions, modes))
    clear_actions = [a for a, m in zip(likelihoods.actions, modes) if m == CLEAR]

    if len(clear_actions) == 1:
        action_id = clear_actions[0]
        spec = domain.spec_for(action_id)
        bindings = select_parameters(spec, merged, scheme)
        unbound = sorted(c for c, opt in bindings.items() if opt is None)
        if unbound:
            return Decision(
                mode=UNCLEAR,
                intent=None,
                prompt=(
                    f"Action {action_id!r} detected, but {', '.join(unbound)} "
                    "could not be resolved. Please specify."
                ),
                per_action_modes=per_action,
                likelihoods=likelihoods,
            )
        intent = Intent(action=action_id, bindings={c: o for c, o in bindings.items()})
        return Decision(
            mode=CLEAR,
            intent=intent,
            prompt="",
            per_action_modes=per_action,
            likelihoods=likelihoods,
        )

    if len(clear_actions) > 1:
        return Decision(
            mode=UNCLEAR,
            intent=None,
            prompt=(
                "Multiple actions are plausible: "
                + ", ".join(clear_actions)
                + ". Which one did you mean?"
            ),
            per_action_modes=per_action,
            likelihoods=likelihoods,
        )

    if all(m == NOISE for m in modes):
        return Decision(
            mode=NOISE,
            intent=None,
            prompt="Command not recognized. Please repeat.",
            per_action_modes=per_action,
            likelihoods=likelihoods,
        )

    candidates = [a for a, m in per_action.items() if m == UNCLEAR]
    return Decision(
        mode=UNCLEAR,
        intent=None,
        prompt=(
            "No action is clear. Did you mean: " + ", ".join(candidates) + "?"
        ),
        per_action_modes=per_action,
        likelihoods=likelihoods,
    )


@dataclass(frozen=True)
class TensorDecision:
    """Joint word-assignment likelihood tensors, one per action."""

    actions: tuple[str, ...]
    tensors: Mapping[str, np.ndarray]
    best_action: str | None
    best_indices: tuple[int, ...]
    best_value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "tensors", dict(self.tensors))


def _action_category_likelihood(word: LikelihoodWord) -> float:
    if word.category is not None:
        return 1.0 if word.category == ACTION_CATEGORY else 0.0
    if word.category_likelihoods is not None:
        return float(word.category_likelihoods.get(ACTION_CATEGORY, 0.0))
    return 0.0


def likelihood_tensor(
    sentences: Sequence[ModalitySentence],
    scene: Scene,
    domain: Domain,
    config: MergeConfig,
    scheme: ThresholdScheme,
    penalty_base: float = DEFAULT_PENALTY_BASE,
    use_signature: bool = True,
    use_properties: bool = True,
) -> TensorDecision:
    """Exhaustive assignment scoring for sentences without a known alignment.

    Index ``i_m`` picks word ``i_m - 1`` of modality ``m`` as its action word;
    index 0 means the modality did not express the action.  A skipped modality
    contributes nothing under add and max.  Under mul it contributes the
    likelihood that none of its words is the action, so a channel with no
    action word passes through neutrally while a channel that clearly said
    the action cannot be skipped for free.  Every cell is scaled by the
    action's penalties computed from the plainly merged sentence.
    """
    merged = merge_sentences(sentences, config)
    actions = domain.action_ids

    presence = category_presence(merged, scheme.t_noise)
    gate = lambda v: clear_gate(scheme, v)  # noqa: E731
    alpha = {}
    beta = {}
    for action_id in actions:
        spec = domain.spec_for(action_id)
        alpha[action_id] = (
            signature_penalty(spec, presence, penalty_base) if use_signature else 1.0
        )
        beta[action_id] = (
            property_penalty(spec, merged, scene, gate) if use_properties else 1.0
        )

    weights = [config.weight_for(s) for s in sentences]
    normalized_words: list[list[np.ndarray | None]] = []
    skip_likelihoods: list[float] = []
    for sentence in sentences:
        row: list[np.ndarray | None] = []
        skip = 1.0
        for word in sentence.words:
            skip *= 1.0 - min(1.0, _action_category_likelihood(word))
            if word.is_empty:
                row.append(None)
                continue
            v = normalize_values(word.values)
            if config.entropy_penalization:
                v = confidence_weights(v) * v
            row.append(v)
        normalized_words.append(row)
        skip_likelihoods.append(skip)

    shape = tuple(len(s.words) + 1 for s in sentences)
    tensors: dict[str, np.ndarray] = {}
    best_value = 0.0
    best_action: str | None = None
    best_indices: tuple[int, ...] = tuple([0] * len(sentences))

    for action_id in actions:
        tensor = np.zeros(shape)
        for indices in itertools.product(*(range(n) for n in shape)):
            terms = []
            for m, i_m in enumerate(indices):
                if i_m == 0:
                    terms.append(skip_likelihoods[m] if config.operator == "mul" else 0.0)
                    continue
                word = sentences[m].words[i_m - 1]
                values = normalized_words[m][i_m - 1]
                if values is None or action_id not in word.options:
                    terms.append(0.0)
                    continue
                value = float(values[word.options.index(action_id)])
                terms.append(weights[m] * _action_category_likelihood(word) * value)
            if all(i == 0 for i in indices):
                cell = 0.0  # no modality expressed the action at all
            elif config.operator == "add":
                cell = float(np.sum(terms))
            elif config.operator == "max":
                cell = float(np.max(terms))
            else:
                cell = float(np.prod(terms))
            cell *= alpha[action_id] * beta[action_id]
            tensor[indices] = cell
            if cell > best_value:
                best_value = cell
                best_action = action_id
                best_indices = indices
        tensors[action_id] = tensor

    return TensorDecision(
        actions=actions,
        tensors=tensors,
        best_action=best_action,
        best_indices=best_indices,
        best_value=best_value,
    )
