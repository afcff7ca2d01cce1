"""Entropy measures used for confidence weighting and adaptive thresholds.

The diagonal cross-entropy of a likelihood vector evaluates, per option, how
much information the measurement carries for that option alone:
``h(j) = -ln(v(j))`` with values clamped away from zero.  Low ``h`` means the
measurement strongly supports option ``j``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# floor when clamping likelihoods inside logs
LIKELIHOOD_EPS = 1e-9
# floor for per-option cross-entropy when inverting it into a weight
WEIGHT_EPS = 1e-3
NORMALIZATION_TOL = 1e-6
DEFAULT_REFERENCE_SEED = 42
_REFERENCE_DRAWS = 1000

SELF_ENTROPY = "self_entropy"
UNIFORM_NOISE = "uniform_noise"


class NotNormalizedError(ValueError):
    """Input vector does not sum to one within tolerance."""


def _check_normalized(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    if abs(float(values.sum()) - 1.0) > NORMALIZATION_TOL:
        raise NotNormalizedError(f"vector sums to {float(values.sum())!r}, expected 1")
    return values

def shannon_entropy(values: np.ndarray) -> float:
    """Shannon entropy in nats of a normalized vector; 0*ln(0) counts as 0."""
    values = _check_normalized(values)
    positive = values[values > 0]
    return float(-(positive * np.log(positive)).sum())


def diagonal_cross_entropy(values: np.ndarray) -> np.ndarray:
    """Per-option information ``-ln(clamp(v, eps, 1))`` of a normalized vector."""
    values = _check_normalized(values)
    clamped = np.clip(values, LIKELIHOOD_EPS, 1.0)
    return -np.log(clamped)


def confidence_weights(values: np.ndarray) -> np.ndarray:
    """Inverse cross-entropy weights ``1 / max(h(j), eps)``.

    Multiplying a word by its weights sharpens confident options and damps
    uncertain ones without ever moving the argmax; the caller renormalizes
    whenever a probability reading is needed.
    """
    h = diagonal_cross_entropy(values)
    return 1.0 / np.maximum(h, WEIGHT_EPS)


@lru_cache(maxsize=None)
def _uniform_reference(length: int, seed: int) -> float:
    # mean entropy of `length`-option vectors with i.i.d. U(0,1) mass, normalized;
    # cached per (length, seed), safe under concurrent first use (same value)
    rng = np.random.default_rng(seed)
    draws = rng.uniform(size=(_REFERENCE_DRAWS, length))
    draws /= draws.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(draws > 0, np.log(draws), 0.0)
    return float(-(draws * logs).sum(axis=1).mean())


def reference_entropy(
    kind: str, values: np.ndarray, seed: int = DEFAULT_REFERENCE_SEED
) -> float:
    """Reference entropy a measurement is compared against.

    ``self_entropy``: the vector's own Shannon entropy.
    ``uniform_noise``: expected entropy of pure-noise vectors of the same length.
    """
    if kind == SELF_ENTROPY:
        return shannon_entropy(values)
    if kind == UNIFORM_NOISE:
        return _uniform_reference(len(values), seed)
    raise ValueError(f"unknown reference kind {kind!r}")
