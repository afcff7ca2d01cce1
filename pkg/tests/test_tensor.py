"""Exhaustive assignment tensor vs the aligned pipeline."""

import numpy as np
import pytest

from intentmerge.fusion import MergeConfig, merge_sentences
from intentmerge.model import ACTION_CATEGORY, LikelihoodWord, ModalitySentence
from intentmerge.selector import (
    action_likelihoods,
    fixed_thresholds,
    likelihood_tensor,
    select_action,
)
from intentmerge.simgen import generate_dataset

OPERATORS = ("max", "mul", "add")


def pipeline_choice(sentences, scene, domain, config):
    merged = merge_sentences(sentences, config)
    lik = action_likelihoods(merged, scene, domain, fixed_thresholds())
    return select_action(lik)


def random_sentences(domain, rng, n_modalities):
    """Known-category sentences, one action word plus up to two parameter words."""
    categories = [ACTION_CATEGORY]
    for extra in ("target_object", "storage_object"):
        if rng.random() < 0.5:
            categories.append(extra)
    sentences = []
    for m in range(n_modalities):
        words = []
        for category in categories:
            options = domain.vocab[category]
            values = rng.uniform(0.05, 1.0, size=len(options))
            words.append(
                LikelihoodWord(options=options, values=values, category=category)
            )
        sentences.append(
            ModalitySentence(modality=f"m{m}", words=tuple(words), weight=1.0)
        )
    return sentences


@pytest.mark.parametrize("operator", OPERATORS)
def test_tensor_matches_pipeline_on_generated_samples(operator, domain, tables):
    samples = generate_dataset("aligned", "n3", 40, 21, domain, tables)
    config = MergeConfig(operator=operator)
    scheme = fixed_thresholds()
    for sample in samples:
        tensor = likelihood_tensor(sample.sentences, sample.scene, domain, config, scheme)
        assert tensor.best_action == pipeline_choice(
            sample.sentences, sample.scene, domain, config
        )


@pytest.mark.parametrize("operator", OPERATORS)
def test_tensor_matches_pipeline_on_random_instances(operator, domain, tables):
    rng = np.random.default_rng(31)
    scenes = [s.scene for s in generate_dataset("aligned", "n2", 10, 8, domain, tables)]
    config = MergeConfig(operator=operator)
    scheme = fixed_thresholds()
    for i in range(30):
        sentences = random_sentences(domain, rng, n_modalities=2 + i % 2)
        scene = scenes[i % len(scenes)]
        tensor = likelihood_tensor(sentences, scene, domain, config, scheme)
        assert tensor.best_action == pipeline_choice(sentences, scene, domain, config)


def test_tensor_shape_and_best_cell(domain, tables):
    sample = generate_dataset("aligned", "n0", 1, 5, domain, tables)[0]
    config = MergeConfig(operator="add")
    tensor = likelihood_tensor(
        sample.sentences, sample.scene, domain, config, fixed_thresholds()
    )
    n_words = len(sample.sentences[0])
    assert set(tensor.actions) == set(domain.action_ids)
    for grid in tensor.tensors.values():
        assert grid.shape == (n_words + 1, n_words + 1)
    best = tensor.tensors[tensor.best_action][tensor.best_indices]
    assert best == pytest.approx(tensor.best_value)
    assert all(grid.max() <= tensor.best_value for grid in tensor.tensors.values())


def test_tensor_known_categories_best_at_full_assignment(domain, tables):
    # with one-hot category knowledge the action row is word 1 in each modality
    sample = generate_dataset("aligned", "n0", 1, 9, domain, tables)[0]
    for operator in ("add", "mul"):
        tensor = likelihood_tensor(
            sample.sentences,
            sample.scene,
            domain,
            MergeConfig(operator=operator),
            fixed_thresholds(),
        )
        assert tensor.best_indices == (1, 1)
    # max ties partial assignments with the full one; the value still matches it
    tensor = likelihood_tensor(
        sample.sentences,
        sample.scene,
        domain,
        MergeConfig(operator="max"),
        fixed_thresholds(),
    )
    assert tensor.best_value == pytest.approx(
        tensor.tensors[tensor.best_action][1, 1]
    )


def test_tensor_mul_skip_cell_is_zero_for_expressed_action(domain, tables):
    # a modality that plainly said the action cannot be skipped for free
    sample = generate_dataset("aligned", "n0", 1, 14, domain, tables)[0]
    tensor = likelihood_tensor(
        sample.sentences,
        sample.scene,
        domain,
        MergeConfig(operator="mul"),
        fixed_thresholds(),
    )
    grid = tensor.tensors[tensor.best_action]
    assert grid[0, 1] == 0.0 and grid[1, 0] == 0.0 and grid[0, 0] == 0.0


def test_tensor_mul_skips_action_free_modality_neutrally(domain, tables):
    sample = generate_dataset("aligned", "n0", 1, 23, domain, tables)[0]
    gesture = sample.gesture_sentence
    # same layout, but the channel never expressed the action position
    muted = tuple(
        LikelihoodWord.empty(options=w.options) if w.category == ACTION_CATEGORY else w
        for w in gesture.words
    )
    silent = ModalitySentence(modality="silent", words=muted, weight=1.0)
    tensor = likelihood_tensor(
        [gesture, silent],
        sample.scene,
        domain,
        MergeConfig(operator="mul"),
        fixed_thresholds(),
    )
    # the silent channel is skipped (index 0) without zeroing the product
    assert tensor.best_value > 0.0
    assert tensor.best_indices[0] == 1 and tensor.best_indices[1] == 0
