"""Property-based invariants across the numeric core."""

import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from intentmerge.entropy import confidence_weights, shannon_entropy
from intentmerge.fusion import mix_vectors
from intentmerge.model import ActionSpec, normalize_values
from intentmerge.penalties import feature_alignment, signature_penalty
from intentmerge.selector import CLEAR, classify_actions, no_thresholds
from intentmerge.similarity import levenshtein, phonetic_encode
from intentmerge.model import FeatureLiteral, ObjectInstance


def vectors(min_size=2, max_size=8):
    return st.lists(
        st.floats(min_value=1e-6, max_value=1.0, allow_nan=False),
        min_size=min_size,
        max_size=max_size,
    ).map(np.array)


@given(vectors())
def test_normalize_is_a_distribution(v):
    out = normalize_values(v)
    assert math.isclose(out.sum(), 1.0, rel_tol=1e-9)
    assert int(np.argmax(out)) == int(np.argmax(v))
    again = normalize_values(out)
    assert np.allclose(again, out)


@given(vectors())
def test_shannon_bounds(v):
    h = shannon_entropy(normalize_values(v))
    assert -1e-12 <= h <= math.log(len(v)) + 1e-12


@given(vectors())
def test_confidence_weights_keep_argmax(v):
    p = normalize_values(v)
    assert int(np.argmax(confidence_weights(p) * p)) == int(np.argmax(p))


@given(st.sampled_from(["add", "mul", "max"]), st.permutations(range(3)), vectors(3, 3), vectors(3, 3), vectors(3, 3))
def test_mix_is_order_invariant(op, order, a, b, c):
    vs = [a, b, c]
    base = mix_vectors(op, vs)
    shuffled = mix_vectors(op, [vs[i] for i in order])
    assert np.allclose(base, shuffled)


@given(vectors(2, 6), st.floats(min_value=0.05, max_value=1.0))
def test_signature_penalty_in_unit_interval(v, base):
    presence = {f"c{i}": float(min(x, 1.0)) for i, x in enumerate(v)}
    spec = ActionSpec(id="a", compulsory=frozenset({"c0"}))
    penalty = signature_penalty(spec, presence, base)
    assert 0.0 < penalty <= 1.0


@given(st.floats(min_value=0.0, max_value=1.0), st.booleans())
def test_feature_alignment_in_unit_interval(value, desired):
    candidate = ObjectInstance(id="x", kind="object", features={"f": value})
    score = feature_alignment((FeatureLiteral("f", desired),), candidate)
    assert 0.0 <= score <= 1.0
    # perfect match scores 1
    exact = ObjectInstance(
        id="y", kind="object", features={"f": 1.0 if desired else 0.0}
    )
    assert feature_alignment((FeatureLiteral("f", desired),), exact) == 1.0


@given(st.text(alphabet="abcdefgh", max_size=8), st.text(alphabet="abcdefgh", max_size=8))
def test_levenshtein_metric_properties(a, b):
    d = levenshtein(a, b)
    assert d == levenshtein(b, a)
    assert (d == 0) == (a == b)
    assert abs(len(a) - len(b)) <= d <= max(len(a), len(b))


@given(
    st.text(alphabet="abcdefgh", max_size=8),
    st.text(alphabet="abcdefgh", max_size=8),
    st.text(alphabet="abcdefgh", max_size=8),
)
def test_levenshtein_triangle_inequality(a, b, c):
    assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=10))
def test_phonetic_code_shape(word):
    code = phonetic_encode(word)
    assert code == phonetic_encode(word)
    # codes are uppercase letters plus the "0" digraph symbol for th
    assert all(ch.isupper() or ch == "0" for ch in code)


@given(vectors(2, 9))
def test_none_scheme_has_exactly_one_clear(v):
    modes = classify_actions(v, no_thresholds())
    assert modes.count(CLEAR) == 1
    assert modes[int(np.argmax(v))] == CLEAR
