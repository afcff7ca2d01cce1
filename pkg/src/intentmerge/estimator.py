"""Estimator-style front door for the fusion pipeline.

IntentResolver packages the merge operator, penalties, and thresholding
scheme behind the familiar fit/predict surface so ablation grids can be
driven with clone() and get_params/set_params.  Fitting validates and
freezes the configuration; no statistics are learned from data.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from sklearn.base import BaseEstimator

from .dsl import load_default_domain, load_domain
from .fusion import MergeConfig, merge_sentences
from .model import Domain, Intent, Scene, ModalitySentence, validate_domain
from .penalties import DEFAULT_NOISE_GATE, DEFAULT_PENALTY_BASE
from .selector import (
    CLEAR,
    Decision,
    ENTROPY,
    FIXED,
    NONE,
    ThresholdScheme,
    decide,
)
from .simgen import Sample

MODELS = ("baseline", "M1", "M2", "M3")


def _normalize_model(name: str) -> str:
    lowered = str(name).lower()
    if lowered == "baseline":
        return "baseline"
    upper = lowered.upper()
    if upper in MODELS:
        return upper
    raise ValueError(f"unknown model {name!r}; choose from {MODELS}")


def check_samples(X) -> list[Sample]:
    """Input validation: X must be an iterable of Sample records."""
    if isinstance(X, Sample):
        return [X]
    if X is None:
        raise ValueError("expected samples, got None")
    samples = list(X)
    for item in samples:
        if not isinstance(item, Sample):
            raise TypeError(f"expected Sample items, found {type(item).__name__}")
    return samples


class IntentResolver(BaseEstimator):
    """Resolves bimodal likelihood sentences into intents.

    model picks the ablation rung: `baseline` is plain argmax over a max
    merge, `M1` adds merge + thresholding, `M2` adds the signature penalty,
    `M3` adds the object-property penalty on top.
    """

    def __init__(
        self,
        model: str = "M3",
        merge: str = "add",
        thresholding: str = FIXED,
        penalty_base: float = DEFAULT_PENALTY_BASE,
        t_clear: float = 0.25,
        t_unclear: float = 0.11,
        t_noise: float = DEFAULT_NOISE_GATE,
        reference: str = "self_entropy",
        seed: int = 42,
        modality_weights: Mapping[str, float] | None = None,
        entropy_penalization: bool = False,
        domain: Domain | str | None = None,
    ):
        self.model = model
        self.merge = merge
        self.thresholding = thresholding
        self.penalty_base = penalty_base
        self.t_clear = t_clear
        self.t_unclear = t_unclear
        self.t_noise = t_noise
        self.reference = reference
        self.seed = seed
        self.modality_weights = modality_weights
        self.entropy_penalization = entropy_penalization
        self.domain = domain

    def fit(self, X=None, y=None):
        """Validate and freeze the configuration; y is ignored."""
        if X is not None:
            check_samples(X)
        model = _normalize_model(self.model)

        if isinstance(self.domain, Domain):
            domain = self.domain
        elif self.domain is None:
            domain = load_default_domain()
        else:
            domain = load_domain(self.domain)
        problems = validate_domain(domain)
        if problems:
            raise ValueError("invalid domain: " + "; ".join(problems))

        if model == "baseline":
            merge_op = "max"
            scheme = ThresholdScheme(kind=NONE, t_noise=self.t_noise)
            use_signature = use_properties = False
            entropy_pen = False
        else:
            merge_op = self.merge
            if self.thresholding not in (FIXED, ENTROPY, NONE):
                raise ValueError(
                    f"unknown thresholding {self.thresholding!r}; "
                    f"choose fixed, entropy, or none"
                )
            scheme = ThresholdScheme(
                kind=self.thresholding,
                t_clear=self.t_clear,
                t_unclear=self.t_unclear,
                t_noise=self.t_noise,
                reference=self.reference,
                seed=self.seed,
            )
            use_signature = model in ("M2", "M3")
            use_properties = model == "M3"
            entropy_pen = bool(self.entropy_penalization)

        self.model_ = model
        self.domain_ = domain
        self.scheme_ = scheme
        self.merge_op_ = merge_op
        self.use_signature_ = use_signature
        self.use_properties_ = use_properties
        self.config_ = MergeConfig(
            operator=merge_op,
            modality_weights=self.modality_weights,
            entropy_penalization=entropy_pen,
        )
        return self

    def _require_fit(self) -> None:
        if not hasattr(self, "config_"):
            raise RuntimeError("call fit() before using the resolver")

    def resolve(self, sentences: Sequence[ModalitySentence], scene: Scene) -> Decision:
        """Decision for one multimodal observation."""
        self._require_fit()
        merged = merge_sentences(sentences, self.config_)
        return decide(
            merged,
            scene,
            self.domain_,
            self.scheme_,
            penalty_base=self.penalty_base,
            use_signature=self.use_signature_,
            use_properties=self.use_properties_,
        )

    def decide_all(self, X) -> list[Decision]:
        self._require_fit()
        return [self.resolve(s.sentences, s.scene) for s in check_samples(X)]

    def predict(self, X) -> list[Intent | None]:
        """Executed intent per sample; None when clarification is needed."""
        return [d.intent for d in self.decide_all(X)]

    def score(self, X, y: Iterable[Intent] | None = None) -> float:
        """Fraction decided clear with exactly the true intent."""
        samples = check_samples(X)
        truths = [s.truth for s in samples] if y is None else list(y)
        if len(truths) != len(samples):
            raise ValueError("y must match X in length")
        if not samples:
            return 0.0
        decisions = self.decide_all(samples)
        hits = sum(
            1
            for decision, truth in zip(decisions, truths)
            if decision.mode == CLEAR and decision.intent == truth
        )
        return hits / len(samples)
