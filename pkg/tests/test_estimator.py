"""IntentResolver estimator facade."""

import pytest
from sklearn.base import clone

from intentmerge.estimator import IntentResolver, check_samples
from intentmerge.simgen import generate_dataset


@pytest.fixture(scope="module")
def clean_samples(domain, tables):
    return generate_dataset("aligned", "n0", 25, 2, domain, tables)


def test_default_params():
    params = IntentResolver().get_params()
    assert params["model"] == "M3"
    assert params["merge"] == "add"
    assert params["thresholding"] == "fixed"
    assert params["reference"] == "self_entropy"
    assert params["t_clear"] == 0.25
    assert params["t_unclear"] == 0.11
    assert params["penalty_base"] == 0.2


def test_sklearn_clone_round_trip(domain):
    resolver = IntentResolver(domain=domain, model="M2", merge="mul")
    twin = clone(resolver)
    assert twin.get_params() == resolver.get_params()
    twin.set_params(merge="max")
    assert resolver.merge == "mul" and twin.merge == "max"


def test_fit_freezes_model_rungs(domain):
    m3 = IntentResolver(domain=domain).fit()
    assert m3.model_ == "M3"
    assert m3.use_signature_ and m3.use_properties_
    m2 = IntentResolver(domain=domain, model="m2").fit()
    assert m2.model_ == "M2"
    assert m2.use_signature_ and not m2.use_properties_
    m1 = IntentResolver(domain=domain, model="M1", merge="mul").fit()
    assert not m1.use_signature_ and not m1.use_properties_
    assert m1.merge_op_ == "mul"


def test_fit_baseline_overrides(domain):
    # the baseline is plain argmax: max merge, no thresholds, no penalties
    resolver = IntentResolver(
        domain=domain, model="baseline", merge="add", thresholding="entropy"
    ).fit()
    assert resolver.merge_op_ == "max"
    assert resolver.scheme_.kind == "none"
    assert not resolver.use_signature_ and not resolver.use_properties_


def test_fit_validation(domain):
    with pytest.raises(ValueError):
        IntentResolver(domain=domain, model="M7").fit()
    with pytest.raises(ValueError):
        IntentResolver(domain=domain, thresholding="fuzzy").fit()


def test_fit_loads_domain_from_path(tmp_path, domain):
    from intentmerge.dsl import print_domain

    path = tmp_path / "d.domain"
    path.write_text(print_domain(domain), encoding="utf-8")
    resolver = IntentResolver(domain=str(path)).fit()
    assert resolver.domain_ == domain


def test_fit_rejects_invalid_domain():
    from intentmerge.model import ActionSpec, Domain

    broken = Domain(
        categories=("action",),
        features=(),
        actions=(ActionSpec(id="a"), ActionSpec(id="a")),
        vocab={"action": ("a",)},
    )
    with pytest.raises(ValueError):
        IntentResolver(domain=broken).fit()


def test_resolve_requires_fit(domain, clean_samples):
    resolver = IntentResolver(domain=domain)
    with pytest.raises(RuntimeError):
        resolver.resolve(clean_samples[0].sentences, clean_samples[0].scene)


def test_check_samples(clean_samples):
    assert check_samples(clean_samples[0]) == [clean_samples[0]]
    assert check_samples(clean_samples[:3]) == clean_samples[:3]
    with pytest.raises(ValueError):
        check_samples(None)
    with pytest.raises(TypeError):
        check_samples([clean_samples[0], "not a sample"])


def test_predict_and_score_on_clean_data(domain, clean_samples):
    resolver = IntentResolver(domain=domain).fit()
    intents = resolver.predict(clean_samples)
    assert len(intents) == len(clean_samples)
    assert all(
        intent == sample.truth for intent, sample in zip(intents, clean_samples)
    )
    assert resolver.score(clean_samples) == 1.0


def test_score_accepts_explicit_labels(domain, clean_samples):
    resolver = IntentResolver(domain=domain).fit()
    truths = [s.truth for s in clean_samples]
    assert resolver.score(clean_samples, truths) == 1.0
    with pytest.raises(ValueError):
        resolver.score(clean_samples, truths[:-1])
    assert resolver.score([]) == 0.0


def test_decide_all_modes(domain, clean_samples):
    resolver = IntentResolver(domain=domain).fit()
    decisions = resolver.decide_all(clean_samples)
    assert all(d.mode == "clear" for d in decisions)
