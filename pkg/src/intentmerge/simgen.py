"""Simulated bimodal command datasets.

Every sample is a scene plus a ground-truth intent expressed through two
detector channels (gesture and language).  Detectors are simulated in two
stages: a discrete misdetection that may swap the action for a lookalike
drawn from the similarity table, and a continuous stage that blends the
one-hot truth with the similarity row, adds Gaussian noise, floors, and
normalizes.  Three dataset kinds share the machinery:

aligned   both channels express the truth.
arity     one channel's action word is a decoy whose parameter signature
          conflicts with the expressed parameters.
prop      one channel's action word is a decoy that no object in the scene
          can satisfy; scene features are adjusted so the truth stays the
          only property-feasible reading in its class.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .model import (
    ACTION_CATEGORY,
    ActionSpec,
    Domain,
    Intent,
    LikelihoodWord,
    ModalitySentence,
    ObjectInstance,
    OBJECT_KIND,
    STORAGE_KIND,
    STORAGE_CATEGORY,
    TARGET_CATEGORY,
    Scene,
)
from .similarity import SimilarityTable, gesture_similarity, language_similarity

GESTURE = "gesture"
LANGUAGE = "language"
MODALITIES = (GESTURE, LANGUAGE)

DATASET_KINDS = ("aligned", "arity", "prop")
_KIND_CODES = {kind: i for i, kind in enumerate(DATASET_KINDS)}

ZERO_FLOOR = 0.01
# how sharply misdetections concentrate on the closest lookalikes
CONFUSION_SHARPNESS = 6.0
# chance that a random scene object carries any given binary feature
FEATURE_DENSITY = 0.35

# seed tag per vocab category for the synthetic gesture tables; bump a
# tag revision to re-roll that table alone without touching the others
_GESTURE_TABLE_TAGS = {ACTION_CATEGORY: "action/5"}

_SCENE_RETRIES = 1000
_SAMPLE_RETRIES = 50


class InfeasibleDomain(RuntimeError):
    """No scene draw made any action feasible."""


class GenerationFailed(RuntimeError):
    """A sample could not be constructed within the retry budget."""


@dataclass(frozen=True)
class NoiseLevel:
    """One rung of the detector-degradation ladder.

    sigma is the additive Gaussian spread.  The confusion fields give the
    probability that a channel's action detector reports a lookalike
    instead of the truth; the gesture classifier is the weak link, speech
    transcription misses far less often.  The blend widths control how
    much similarity leakage the emitted vectors carry.  Gesture scores
    smear broadly (shape lookalikes for actions, pointing-ray distance
    for objects) while transcription activations are near one-hot, so
    language gets its own narrow width.
    """

    id: str
    sigma: float
    confusion: float
    confusion_language: float
    blend_action: float
    blend_action_language: float
    blend_param: float
    blend_param_language: float
    source: str = "gaussian"

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        for rate in (self.confusion, self.confusion_language):
            if not 0 <= rate <= 1:
                raise ValueError("confusion must be a probability")

    def confusion_for(self, modality: str) -> float:
        return self.confusion_language if modality == LANGUAGE else self.confusion

    def blend_for(self, modality: str, category: str) -> float:
        if category == ACTION_CATEGORY:
            return self.blend_action_language if modality == LANGUAGE else self.blend_action
        return self.blend_param_language if modality == LANGUAGE else self.blend_param


NOISE_LEVELS: tuple[NoiseLevel, ...] = (
    NoiseLevel("n0", 0.0, 0.00, 0.00, 0.30, 0.30, 0.30, 0.30, source="none"),
    NoiseLevel("n1", 0.2, 0.86, 0.38, 0.95, 0.85, 0.45, 0.45, source="real_model"),
    NoiseLevel("n2", 0.2, 0.86, 0.38, 0.95, 0.85, 0.45, 0.45, source="gaussian"),
    NoiseLevel("n3", 0.4, 0.55, 0.22, 0.70, 0.55, 0.35, 0.35, source="gaussian"),
    NoiseLevel("n4", 0.6, 0.25, 0.26, 0.50, 0.35, 0.15, 0.15, source="gaussian"),
)

_LEVELS_BY_ID = {level.id: level for level in NOISE_LEVELS}


def noise_level(id: str) -> NoiseLevel:
    try:
        return _LEVELS_BY_ID[id]
    except KeyError:
        raise KeyError(f"unknown noise level {id!r}; have {sorted(_LEVELS_BY_ID)}") from None


@dataclass(frozen=True)
class Sample:
    scene: Scene
    truth: Intent
    gesture_sentence: ModalitySentence
    language_sentence: ModalitySentence
    kind: str
    noise: str
    seed: int
    decoy_action: str | None = None
    decoy_modality: str | None = None

    @property
    def sentences(self) -> tuple[ModalitySentence, ModalitySentence]:
        return (self.gesture_sentence, self.language_sentence)


def similarity_tables(domain: Domain) -> dict[str, dict[str, SimilarityTable]]:
    """Per-modality, per-category confusability tables.

    Language tables follow phonetics; gesture tables are synthetic with a
    stable per-category seed so datasets regenerate identically.
    """
    tables: dict[str, dict[str, SimilarityTable]] = {GESTURE: {}, LANGUAGE: {}}
    for category, vocab in domain.vocab.items():
        tables[LANGUAGE][category] = language_similarity(vocab)
        tag = _GESTURE_TABLE_TAGS.get(category, category)
        tables[GESTURE][category] = gesture_similarity(vocab, zlib.crc32(tag.encode("utf-8")))
    return tables


def emit_word(
    true_option: str,
    vocab: Sequence[str],
    sim: SimilarityTable,
    blend: float,
    noise: NoiseLevel,
    rng: np.random.Generator,
    category: str | None = None,
) -> LikelihoodWord:
    """Simulated detector output for one word.

    The vector is a blend of the one-hot truth and the truth's similarity
    row, perturbed by Gaussian noise, clamped at zero, floored so no entry
    is exactly zero, and normalized.
    """
    vocab = tuple(vocab)
    if true_option not in vocab:
        raise ValueError(f"{true_option!r} is not in the vocabulary")
    if not 0 <= blend <= 1:
        raise ValueError("blend must lie in [0, 1]")
    onehot = np.zeros(len(vocab))
    onehot[vocab.index(true_option)] = 1.0
    values = (1.0 - blend) * onehot + blend * sim.row(true_option)
    if noise.sigma > 0:
        values = values + rng.normal(0.0, noise.sigma, size=len(vocab))
    values = np.maximum(values, 0.0) + ZERO_FLOOR
    return LikelihoodWord(
        options=vocab, values=values / values.sum(), category=category
    )


def confuse_option(
    true_option: str,
    sim: SimilarityTable,
    rate: float,
    rng: np.random.Generator,
) -> str:
    """The option the detector reports: usually the truth, else a lookalike."""
    if rate <= 0 or rng.random() >= rate:
        return true_option
    index = sim.vocab.index(true_option)
    weights = sim.matrix[index].copy() ** CONFUSION_SHARPNESS
    weights[index] = 0.0
    total = weights.sum()
    if total <= 0:
        return true_option
    return sim.vocab[rng.choice(len(weights), p=weights / total)]


def _satisfies(obj: ObjectInstance, requirements) -> bool:
    return all(
        abs(obj.features.get(lit.feature, 0.0) - (1.0 if lit.desired else 0.0)) < 0.5
        for lit in requirements
    )


def action_feasible(spec: ActionSpec, scene: Scene) -> bool:
    """Whether some object assignment satisfies the action's requirements."""
    if spec.requires_target:
        if not any(_satisfies(o, spec.target_requirements) for o in scene.of_kind(OBJECT_KIND)):
            return False
    if spec.requires_storage:
        if not any(_satisfies(o, spec.storage_requirements) for o in scene.of_kind(STORAGE_KIND)):
            return False
    return True


def _random_objects(
    rng: np.random.Generator, domain: Domain, n_obj: int, n_store: int
) -> list[ObjectInstance]:
    object_names = domain.vocab.get(TARGET_CATEGORY, ())[:n_obj]
    storage_names = domain.vocab.get(STORAGE_CATEGORY, ())[:n_store]
    if len(object_names) < n_obj or len(storage_names) < n_store:
        raise ValueError("vocabulary too small for the requested scene size")
    objects = []
    for name in object_names:
        features = {f: float(rng.random() < FEATURE_DENSITY) for f in domain.features}
        objects.append(ObjectInstance(id=name, kind=OBJECT_KIND, features=features))
    for name in storage_names:
        features = {f: float(rng.random() < FEATURE_DENSITY) for f in domain.features}
        objects.append(ObjectInstance(id=name, kind=STORAGE_KIND, features=features))
    return objects


def generate_scene(
    rng: np.random.Generator,
    domain: Domain,
    n_obj: int = 5,
    n_store: int = 3,
) -> Scene:
    """Random binary-featured scene in which at least one action is feasible."""
    for _ in range(_SCENE_RETRIES):
        scene = Scene(objects=tuple(_random_objects(rng, domain, n_obj, n_store)))
        if any(action_feasible(spec, scene) for spec in domain.actions):
            return scene
    raise InfeasibleDomain(f"no feasible scene found in {_SCENE_RETRIES} draws")


def _force_features(obj: ObjectInstance, requirements) -> ObjectInstance:
    features = dict(obj.features)
    for lit in requirements:
        features[lit.feature] = 1.0 if lit.desired else 0.0
    return replace(obj, features=features)


def _arity_class(spec: ActionSpec) -> frozenset[str]:
    return spec.compulsory


def _same_class(domain: Domain, spec: ActionSpec) -> list[ActionSpec]:
    return [
        other
        for other in domain.actions
        if other.id != spec.id and _arity_class(other) == _arity_class(spec)
    ]


def _breaking_feature(truth: ActionSpec, rival: ActionSpec) -> tuple[str, str, bool] | None:
    """A (side, feature, desired) the rival needs but the truth leaves free.

    Setting the feature to the opposite of `desired` on every object of that
    side's kind makes the rival property-infeasible scene-wide without
    touching any literal the truth relies on.
    """
    for side, rival_reqs, truth_reqs in (
        ("target", rival.target_requirements, truth.target_requirements),
        ("storage", rival.storage_requirements, truth.storage_requirements),
    ):
        constrained = {lit.feature: lit.desired for lit in truth_reqs}
        for lit in rival_reqs:
            if lit.feature not in constrained:
                return side, lit.feature, lit.desired
            if constrained[lit.feature] != lit.desired:
                # the truth already forces the opposite value on its own
                # object, but other objects may still satisfy the rival
                return side, lit.feature, lit.desired
    return None


def _break_rivals(
    scene: Scene, domain: Domain, truth: ActionSpec
) -> Scene:
    """Make every same-class rival property-infeasible on all objects."""
    objects = list(scene.objects)
    for rival in _same_class(domain, truth):
        if not (rival.target_requirements or rival.storage_requirements):
            # nothing to break: property penalties never touch such actions
            continue
        broken = _breaking_feature(truth, rival)
        if broken is None:
            raise GenerationFailed(
                f"no feature separates {truth.id!r} from {rival.id!r}"
            )
        side, feature, desired = broken
        kind = OBJECT_KIND if side == "target" else STORAGE_KIND
        objects = [
            replace(o, features={**o.features, feature: 0.0 if desired else 1.0})
            if o.kind == kind
            else o
            for o in objects
        ]
    return Scene(objects=tuple(objects))


def _truth_scene(
    rng: np.random.Generator,
    domain: Domain,
    truth: ActionSpec,
    exclusive: bool,
    n_obj: int = 5,
    n_store: int = 3,
) -> tuple[Scene, dict[str, str]]:
    """Scene where the truth is feasible on named objects, plus its bindings.

    With `exclusive`, same-class rivals are made property-infeasible first
    and the truth's objects re-forced afterwards, so the truth stays the
    unique in-class feasible reading.
    """
    scene = generate_scene(rng, domain, n_obj, n_store)
    if exclusive:
        scene = _break_rivals(scene, domain, truth)
    objects = list(scene.objects)
    bindings: dict[str, str] = {}
    if truth.requires_target:
        pool = [i for i, o in enumerate(objects) if o.kind == OBJECT_KIND]
        pick = pool[int(rng.integers(0, len(pool)))]
        objects[pick] = _force_features(objects[pick], truth.target_requirements)
        bindings[TARGET_CATEGORY] = objects[pick].id
    if truth.requires_storage:
        pool = [i for i, o in enumerate(objects) if o.kind == STORAGE_KIND]
        pick = pool[int(rng.integers(0, len(pool)))]
        objects[pick] = _force_features(objects[pick], truth.storage_requirements)
        bindings[STORAGE_CATEGORY] = objects[pick].id
    return Scene(objects=tuple(objects)), bindings


def _emit_sentence(
    modality: str,
    action_option: str,
    bindings: Mapping[str, str],
    domain: Domain,
    tables: Mapping[str, Mapping[str, SimilarityTable]],
    noise: NoiseLevel,
    rng: np.random.Generator,
) -> ModalitySentence:
    words = []
    for category in domain.categories:
        vocab = domain.vocab.get(category, ())
        if category == ACTION_CATEGORY:
            option = action_option
        else:
            option = bindings.get(category)
        blend = noise.blend_for(modality, category)
        if option is None:
            words.append(LikelihoodWord.empty(options=tuple(vocab), category=category))
            continue
        words.append(
            emit_word(
                option, vocab, tables[modality][category], blend, noise, rng, category
            )
        )
    return ModalitySentence(modality=modality, words=tuple(words))


def _compulsory_only(spec: ActionSpec, bindings: Mapping[str, str]) -> dict[str, str]:
    return {c: o for c, o in bindings.items() if c in spec.compulsory}


def generate_sample(
    kind: str,
    noise: NoiseLevel,
    domain: Domain,
    rng: np.random.Generator,
    tables: Mapping[str, Mapping[str, SimilarityTable]] | None = None,
    seed: int = 0,
) -> Sample:
    """One simulated command of the requested dataset kind."""
    if kind not in DATASET_KINDS:
        raise ValueError(f"unknown dataset kind {kind!r}")
    if tables is None:
        tables = similarity_tables(domain)

    specs = list(domain.actions)
    if kind == "prop":
        specs = [s for s in specs if s.compulsory and _same_class(domain, s)]
        if not specs:
            raise GenerationFailed("no action has a same-signature rival to decoy")

    truth_spec = specs[int(rng.integers(0, len(specs)))]
    # scene context must single out the truth within its signature class,
    # otherwise property penalties have no signal to work with
    scene, bindings = _truth_scene(rng, domain, truth_spec, exclusive=True)
    bindings = _compulsory_only(truth_spec, bindings)
    truth = Intent(action=truth_spec.id, bindings=bindings)

    decoy_action: str | None = None
    decoy_modality: str | None = None
    reported = {m: truth_spec.id for m in MODALITIES}

    if kind == "aligned":
        for modality in MODALITIES:
            reported[modality] = confuse_option(
                truth_spec.id,
                tables[modality][ACTION_CATEGORY],
                noise.confusion_for(modality),
                rng,
            )
    else:
        if kind == "arity":
            rivals = [
                s for s in domain.actions if _arity_class(s) != _arity_class(truth_spec)
            ]
        else:
            rivals = _same_class(domain, truth_spec)
        if not rivals:
            raise GenerationFailed(f"no decoy available for {truth_spec.id!r}")
        decoy_action = rivals[int(rng.integers(0, len(rivals)))].id
        decoy_modality = MODALITIES[int(rng.integers(0, len(MODALITIES)))]
        reported[decoy_modality] = decoy_action

    sentences = {
        modality: _emit_sentence(
            modality, reported[modality], bindings, domain, tables, noise, rng
        )
        for modality in MODALITIES
    }
    return Sample(
        scene=scene,
        truth=truth,
        gesture_sentence=sentences[GESTURE],
        language_sentence=sentences[LANGUAGE],
        kind=kind,
        noise=noise.id,
        seed=seed,
        decoy_action=decoy_action,
        decoy_modality=decoy_modality,
    )


def sample_seed(root_seed: int, kind: str, noise_id: str, index: int) -> int:
    """Stable per-sample seed; independent streams across datasets."""
    level_code = int(noise_id[1:]) if noise_id[1:].isdigit() else zlib.crc32(noise_id.encode())
    sequence = np.random.SeedSequence((root_seed, _KIND_CODES[kind], level_code, index))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def generate_dataset(
    kind: str,
    noise: NoiseLevel | str,
    n: int = 1000,
    seed: int = 1,
    domain: Domain | None = None,
    tables: Mapping[str, Mapping[str, SimilarityTable]] | None = None,
) -> list[Sample]:
    """n independent samples, deterministic under (seed, kind, noise)."""
    if kind not in DATASET_KINDS:
        raise ValueError(f"unknown dataset kind {kind!r}")
    if isinstance(noise, str):
        noise = noise_level(noise)
    if domain is None:
        from .dsl import load_default_domain

        domain = load_default_domain()
    if n < 1:
        raise ValueError("need at least one sample")
    if tables is None:
        tables = similarity_tables(domain)
    samples = []
    for index in range(n):
        per_seed = sample_seed(seed, kind, noise.id, index)
        rng = np.random.default_rng(per_seed)
        samples.append(
            generate_sample(kind, noise, domain, rng, tables, seed=per_seed)
        )
    return samples


def generate_unaligned(
    noise: NoiseLevel | str,
    n: int = 1000,
    seed: int = 1,
    domain: Domain | None = None,
    tables: Mapping[str, Mapping[str, SimilarityTable]] | None = None,
) -> list[Sample]:
    """The combined decoy benchmark: arity samples followed by prop samples."""
    return generate_dataset("arity", noise, n, seed, domain, tables) + generate_dataset(
        "prop", noise, n, seed, domain, tables
    )
