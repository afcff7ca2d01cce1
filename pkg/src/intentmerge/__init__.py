"""Probabilistic fusion of multimodal command likelihoods into intents."""

from .dsl import (
    DomainSemanticError,
    DomainSyntaxError,
    load_default_domain,
    load_domain,
    parse_domain,
    print_domain,
)
from .entropy import (
    confidence_weights,
    diagonal_cross_entropy,
    reference_entropy,
    shannon_entropy,
)
from .estimator import IntentResolver, check_samples
from .evaluation import EvalRow, ablation_models, evaluate, run_matrix
from .fusion import MergeConfig, MergedSentence, merge_sentences
from .model import (
    ActionSpec,
    Domain,
    FeatureLiteral,
    Intent,
    LikelihoodWord,
    ModalitySentence,
    ObjectInstance,
    Scene,
    validate_domain,
)
from .penalties import (
    category_presence,
    feature_alignment,
    property_penalty,
    signature_penalty,
)
from .records import load_dataset, save_dataset
from .selector import (
    Decision,
    ThresholdScheme,
    action_likelihoods,
    classify_actions,
    decide,
    likelihood_tensor,
    select_action,
    select_parameters,
)
from .simgen import (
    NOISE_LEVELS,
    NoiseLevel,
    Sample,
    emit_word,
    generate_dataset,
    generate_sample,
    generate_scene,
    generate_unaligned,
    noise_level,
)
from .similarity import (
    SimilarityTable,
    gesture_similarity,
    language_similarity,
    levenshtein,
    phonetic_encode,
)

__version__ = "0.1.0"

__all__ = [
    "ActionSpec",
    "Decision",
    "Domain",
    "DomainSemanticError",
    "DomainSyntaxError",
    "EvalRow",
    "FeatureLiteral",
    "Intent",
    "IntentResolver",
    "LikelihoodWord",
    "MergeConfig",
    "MergedSentence",
    "ModalitySentence",
    "NOISE_LEVELS",
    "NoiseLevel",
    "ObjectInstance",
    "Sample",
    "Scene",
    "SimilarityTable",
    "ThresholdScheme",
    "ablation_models",
    "action_likelihoods",
    "category_presence",
    "check_samples",
    "classify_actions",
    "confidence_weights",
    "decide",
    "diagonal_cross_entropy",
    "emit_word",
    "evaluate",
    "feature_alignment",
    "generate_dataset",
    "generate_sample",
    "generate_scene",
    "generate_unaligned",
    "gesture_similarity",
    "language_similarity",
    "levenshtein",
    "likelihood_tensor",
    "load_dataset",
    "load_default_domain",
    "load_domain",
    "merge_sentences",
    "noise_level",
    "parse_domain",
    "phonetic_encode",
    "print_domain",
    "property_penalty",
    "reference_entropy",
    "run_matrix",
    "save_dataset",
    "select_action",
    "select_parameters",
    "shannon_entropy",
    "signature_penalty",
    "validate_domain",
]
