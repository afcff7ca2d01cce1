"""Position-wise sentence merging and the mixing operators."""

import numpy as np
import pytest

from intentmerge.fusion import (
    CategoryConflictError,
    LengthMismatchError,
    MergeConfig,
    merge_sentences,
    mix_vectors,
)
from intentmerge.model import LikelihoodWord, ModalitySentence


def word(values, options=None, category=None):
    options = options or tuple(f"o{i}" for i in range(len(values)))
    return LikelihoodWord(options=tuple(options), values=np.array(values), category=category)


def sentence(modality, *words, weight=1.0):
    return ModalitySentence(modality=modality, words=tuple(words), weight=weight)


def test_mix_add_raw():
    out = mix_vectors("add", [np.array([1.0, 0.0]), np.array([0.0, 1.0])])
    assert np.allclose(out, [1.0, 1.0])


def test_mix_mul_raw():
    out = mix_vectors("mul", [np.array([0.8, 0.2]), np.array([0.8, 0.2])])
    assert np.allclose(out, [0.64, 0.04])


def test_mix_max_raw():
    out = mix_vectors("max", [np.array([0.7, 0.3]), np.array([0.2, 0.8])])
    assert np.allclose(out, [0.7, 0.8])


def test_mix_weights_scale_contributions():
    out = mix_vectors("add", [np.array([1.0, 0.0]), np.array([0.0, 1.0])], weights=[2.0, 1.0])
    assert np.allclose(out, [2.0, 1.0])


def test_mix_validation():
    with pytest.raises(ValueError):
        mix_vectors("avg", [np.array([1.0])])
    with pytest.raises(ValueError):
        mix_vectors("add", [])
    with pytest.raises(LengthMismatchError):
        mix_vectors("add", [np.array([1.0]), np.array([1.0, 0.0])])


def merged_single(operator, vectors, weights=None):
    sentences = []
    for i, values in enumerate(vectors):
        w = 1.0 if weights is None else weights[i]
        sentences.append(sentence(f"m{i}", word(values, category="action"), weight=w))
    config = MergeConfig(operator=operator)
    return merge_sentences(sentences, config).words[0].values


def test_merge_add_oracle():
    assert np.allclose(merged_single("add", [[1.0, 0.0], [0.0, 1.0]]), [0.5, 0.5])


def test_merge_mul_oracle():
    out = merged_single("mul", [[0.8, 0.2], [0.8, 0.2]])
    assert np.allclose(out, [0.9411764705882353, 0.058823529411764705])


def test_merge_max_oracle():
    out = merged_single("max", [[0.7, 0.3], [0.2, 0.8]])
    assert np.allclose(out, [0.4666666666666666, 0.5333333333333333])


def test_merge_weighted_add_oracle():
    out = merged_single("add", [[1.0, 0.0], [0.0, 1.0]], weights=[2.0, 1.0])
    assert np.allclose(out, [2 / 3, 1 / 3])


def test_merge_config_weight_override():
    s = sentence("gesture", word([1.0, 0.0], category="action"), weight=1.0)
    config = MergeConfig(operator="add", modality_weights={"gesture": 3.0})
    assert config.weight_for(s) == 3.0
    with pytest.raises(ValueError):
        MergeConfig(operator="add", modality_weights={"gesture": 0.0})


def test_merge_normalizes_contributions_first():
    # unnormalized inputs may not tilt the mix; 2x mass means the same word
    a = sentence("g", word([2.0, 0.0], category="action"))
    b = sentence("l", word([0.0, 1.0], category="action"))
    out = merge_sentences([a, b], MergeConfig(operator="add")).words[0].values
    assert np.allclose(out, [0.5, 0.5])


def test_merge_aligns_option_order():
    a = sentence("g", word([0.9, 0.1], options=("x", "y"), category="action"))
    b = sentence("l", word([0.8, 0.2], options=("y", "x"), category="action"))
    out = merge_sentences([a, b], MergeConfig(operator="add")).words[0]
    assert out.options == ("x", "y")
    assert np.allclose(out.values, np.array([0.9 + 0.2, 0.1 + 0.8]) / 2.0)


def test_merge_rejects_disjoint_option_sets():
    a = sentence("g", word([1.0], options=("x",), category="action"))
    b = sentence("l", word([1.0], options=("z",), category="action"))
    with pytest.raises(LengthMismatchError):
        merge_sentences([a, b], MergeConfig(operator="add"))


def test_merge_rejects_category_conflict():
    a = sentence("g", word([1.0, 0.0], category="action"))
    b = sentence("l", word([1.0, 0.0], category="target_object"))
    with pytest.raises(CategoryConflictError):
        merge_sentences([a, b])


def test_merge_rejects_ragged_sentences():
    a = sentence("g", word([1.0, 0.0]), word([1.0, 0.0]))
    b = sentence("l", word([1.0, 0.0]))
    with pytest.raises(LengthMismatchError):
        merge_sentences([a, b])


def test_merge_empty_position_stays_empty():
    a = sentence("g", LikelihoodWord.empty(options=("x", "y"), category="action"))
    b = sentence("l", LikelihoodWord.empty(options=("x", "y"), category="action"))
    merged = merge_sentences([a, b])
    assert merged.words[0].is_empty
    assert merged.sources[0] == ()
    assert merged.word_for("action") is None


def test_merge_skips_empty_contributions():
    a = sentence("g", LikelihoodWord.empty(options=("x", "y"), category="action"))
    b = sentence("l", word([0.3, 0.7], category="action"))
    merged = merge_sentences([a, b])
    assert merged.sources[0] == ("l",)
    assert np.allclose(merged.words[0].values, [0.3, 0.7])
    assert merged.word_for("action") is merged.words[0]


def test_merge_entropy_penalization_sharpens():
    config = MergeConfig(operator="add", entropy_penalization=True)
    a = sentence("g", word([0.8, 0.2], category="action"))
    b = sentence("l", word([0.8, 0.2], category="action"))
    out = merge_sentences([a, b], config).words[0].values
    plain = merged_single("add", [[0.8, 0.2], [0.8, 0.2]])
    assert out[0] > plain[0]  # confident option gains mass
    assert np.isclose(out.sum(), 1.0)
