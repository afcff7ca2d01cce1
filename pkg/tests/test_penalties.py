"""Signature and object-property penalties."""

import numpy as np
import pytest

from intentmerge.fusion import MergeConfig, merge_sentences
from intentmerge.model import (
    ActionSpec,
    FeatureLiteral,
    LikelihoodWord,
    ModalitySentence,
    ObjectInstance,
    Scene,
)
from intentmerge.penalties import (
    InvalidPenaltyBase,
    UnknownFeatureError,
    category_presence,
    feature_alignment,
    property_penalty,
    signature_penalty,
)


def merged_from(*words):
    sentences = [ModalitySentence(modality="g", words=tuple(words))]
    return merge_sentences(sentences, MergeConfig(operator="add"))


def word(values, options, category):
    return LikelihoodWord(options=tuple(options), values=np.array(values), category=category)


def obj(id_, features, kind="object"):
    return ObjectInstance(id=id_, kind=kind, features=features)


def test_category_presence_one_hot():
    merged = merged_from(
        word([0.9, 0.1], ("push", "stop"), "action"),
        word([0.5, 0.5], ("cube", "can"), "target_object"),
    )
    presence = category_presence(merged)
    assert presence == {"action": 1.0, "target_object": 1.0}


def test_category_presence_noise_gated():
    # a flat word over many options peaks below the gate and is not "expressed"
    options = tuple(f"o{i}" for i in range(40))
    merged = merged_from(word([1.0] * 40, options, "target_object"))
    assert category_presence(merged, noise_gate=0.05) == {}


def test_signature_penalty_exact_values():
    spec = ActionSpec(id="push", compulsory=frozenset({"target_object"}))
    assert signature_penalty(spec, {"action": 1.0, "target_object": 1.0}, 0.2) == 1.0
    # one missing compulsory category
    assert signature_penalty(spec, {"action": 1.0}, 0.2) == pytest.approx(0.2)
    # missing compulsory plus one extraneous category
    presence = {"action": 1.0, "storage_object": 1.0}
    assert signature_penalty(spec, presence, 0.2) == pytest.approx(0.04)


def test_signature_penalty_action_never_extraneous():
    spec = ActionSpec(id="stop")
    assert signature_penalty(spec, {"action": 1.0}, 0.2) == 1.0


def test_signature_penalty_soft_evidence():
    spec = ActionSpec(id="stop")
    assert signature_penalty(spec, {"target_object": 0.5}, 0.2) == pytest.approx(0.2**0.5)


def test_signature_penalty_voluntary_is_free():
    spec = ActionSpec(id="point", voluntary=frozenset({"target_object"}))
    assert signature_penalty(spec, {"action": 1.0, "target_object": 1.0}, 0.2) == 1.0
    assert signature_penalty(spec, {"action": 1.0}, 0.2) == 1.0


def test_signature_penalty_base_validation():
    spec = ActionSpec(id="stop")
    for bad in (0.0, -0.2, 1.2):
        with pytest.raises(InvalidPenaltyBase):
            signature_penalty(spec, {}, bad)


def test_feature_alignment_worked_example():
    # candidate carries 0.8 of the one required feature: alignment 0.8 exactly
    candidate = obj("cube", {"pickable": 0.8})
    assert feature_alignment((FeatureLiteral("pickable"),), candidate) == pytest.approx(0.8)


def test_feature_alignment_worst_literal_counts():
    candidate = obj("cube", {"pickable": 1.0, "glued": 1.0})
    literals = (FeatureLiteral("pickable"), FeatureLiteral("glued", desired=False))
    assert feature_alignment(literals, candidate) == pytest.approx(0.0)
    assert feature_alignment((), candidate) == 1.0


def test_feature_alignment_unknown_feature():
    with pytest.raises(UnknownFeatureError):
        feature_alignment((FeatureLiteral("haunted"),), obj("cube", {}))


SPEC = ActionSpec(
    id="pick_up",
    compulsory=frozenset({"target_object"}),
    target_requirements=(FeatureLiteral("pickable"), FeatureLiteral("glued", desired=False)),
)


def test_property_penalty_feasible_candidate():
    scene = Scene(objects=(obj("cube", {"pickable": 1.0, "glued": 0.0}),))
    merged = merged_from(word([1.0], ("cube",), "target_object"))
    assert property_penalty(SPEC, merged, scene, 0.25) == 1.0


def test_property_penalty_infeasible_candidate():
    scene = Scene(objects=(obj("cube", {"pickable": 1.0, "glued": 1.0}),))
    merged = merged_from(word([1.0], ("cube",), "target_object"))
    assert property_penalty(SPEC, merged, scene, 0.25) == 0.0


def test_property_penalty_gate_filters_candidates():
    # the feasible object sits below the clear gate, so only the glued one counts
    scene = Scene(
        objects=(
            obj("cube", {"pickable": 1.0, "glued": 0.0}),
            obj("can", {"pickable": 1.0, "glued": 1.0}),
        )
    )
    merged = merged_from(word([0.1, 0.9], ("cube", "can"), "target_object"))
    assert property_penalty(SPEC, merged, scene, 0.25) == 0.0
    # a permissive gate readmits the feasible candidate
    assert property_penalty(SPEC, merged, scene, 0.05) == 1.0


def test_property_penalty_callable_gate():
    scene = Scene(objects=(obj("cube", {"pickable": 1.0, "glued": 0.0}),))
    merged = merged_from(word([1.0], ("cube",), "target_object"))
    assert property_penalty(SPEC, merged, scene, lambda v: 0.5) == 1.0


def test_property_penalty_no_candidate_word():
    scene = Scene(objects=(obj("cube", {"pickable": 1.0, "glued": 0.0}),))
    merged = merged_from(word([1.0, 0.0], ("push", "stop"), "action"))
    assert property_penalty(SPEC, merged, scene, 0.25) == 0.0


def test_property_penalty_without_object_parameters():
    spec = ActionSpec(id="stop")
    merged = merged_from(word([1.0, 0.0], ("push", "stop"), "action"))
    assert property_penalty(spec, merged, Scene(objects=()), 0.25) == 1.0


def test_property_penalty_terms_multiply():
    spec = ActionSpec(
        id="put",
        compulsory=frozenset({"target_object", "storage_object"}),
        target_requirements=(FeatureLiteral("pickable"),),
        storage_requirements=(FeatureLiteral("container"),),
    )
    scene = Scene(
        objects=(
            obj("cube", {"pickable": 1.0}),
            obj("bowl", {"container": 0.0}, kind="storage"),
        )
    )
    merged = merged_from(
        word([1.0], ("cube",), "target_object"),
        word([1.0], ("bowl",), "storage_object"),
    )
    # target term 1.0, storage term 0.0
    assert property_penalty(spec, merged, scene, 0.25) == 0.0
