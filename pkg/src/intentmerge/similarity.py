"""Confusability tables for detector simulation.

The language table scores two words by the Levenshtein distance of their
phonetic codes, so words that sound alike are easy to confuse.  The gesture
table has no acoustic ground truth and is drawn symmetric at random in a
plausible band.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

VOWELS = "aeiou"

# softener: letters that turn a following c/g soft
FRONT = "iey"


class EmptyInput(ValueError):
    """Phonetic code requested for a word with no letters."""


@dataclass(frozen=True)
class SimilarityTable:
    """Square symmetric confusability matrix over a fixed vocabulary."""

    vocab: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        matrix = np.asarray(self.matrix, dtype=np.float64)
        n = len(self.vocab)
        if matrix.shape != (n, n):
            raise ValueError(f"matrix shape {matrix.shape} does not fit {n} words")
        if np.any(matrix < 0) or np.any(matrix > 1):
            raise ValueError("similarities must lie in [0, 1]")
        if not np.allclose(matrix, matrix.T):
            raise ValueError("similarity matrix must be symmetric")
        if not np.allclose(np.diag(matrix), 1.0):
            raise ValueError("self-similarity must be 1")
        matrix = matrix.copy()
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "vocab", tuple(self.vocab))

    def row(self, option: str) -> np.ndarray:
        return self.matrix[self.vocab.index(option)]

    def between(self, a: str, b: str) -> float:
        return float(self.matrix[self.vocab.index(a), self.vocab.index(b)])


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance (insertions, deletions, substitutions)."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (ca != cb),
                )
            )
        previous = current
    return previous[-1]


def phonetic_encode(word: str) -> str:
    """Classic Metaphone-style phonetic code, uppercase.

    Words that sound alike map to the same code; exact codes follow the
    traditional rule set closely enough for similarity scoring.
    """
    w = re.sub(r"[^a-z]", "", word.lower())
    if not w:
        raise EmptyInput(f"no letters to encode in {word!r}")

    # initial-cluster exceptions
    if w[:2] in ("ae", "gn", "kn", "pn", "wr"):
        w = w[1:]
    elif w.startswith("wh"):
        w = "w" + w[2:]
    elif w[0] == "x":
        w = "s" + w[1:]

    out: list[str] = []
    i = 0
    n = len(w)

    def nxt(k: int = 1) -> str:
        return w[i + k] if i + k < n else ""

    def prev(k: int = 1) -> str:
        return w[i - k] if i - k >= 0 else ""

    def in_set(ch: str, letters: str) -> bool:
        return len(ch) == 1 and ch in letters

    while i < n:
        c = w[i]
        if c == prev() and c != "c":
            i += 1  # collapse doubled letters except cc
            continue
        if in_set(c, VOWELS):
            if i == 0:
                out.append(c.upper())
        elif c == "b":
            if not (i == n - 1 and prev() == "m"):
                out.append("B")
        elif c == "c":
            if nxt() == "i" and nxt(2) == "a":
                out.append("X")
            elif nxt() == "h":
                out.append("K" if prev() == "s" else "X")
                i += 1
            elif in_set(nxt(), FRONT):
                if prev() != "s":
                    out.append("S")
            else:
                out.append("K")
        elif c == "d":
            if nxt() == "g" and in_set(nxt(2), FRONT):
                out.append("J")
                i += 1
            else:
                out.append("T")
        elif c == "g":
            if nxt() == "h":
                if i + 2 >= n or w[i + 2] in VOWELS:
                    out.append("K")
                i += 1
            elif nxt() == "n":
                pass  # silent in gn / gned
            elif in_set(nxt(), FRONT):
                out.append("J")
            else:
                out.append("K")
        elif c == "h":
            if in_set(prev(), VOWELS) and not in_set(nxt(), VOWELS):
                pass
            elif in_set(prev(), "csptg"):
                pass  # handled by the preceding consonant
            else:
                out.append("H")
        elif c == "k":
            if prev() != "c":
                out.append("K")
        elif c == "p":
            if nxt() == "h":
                out.append("F")
                i += 1
            else:
                out.append("P")
        elif c == "q":
            out.append("K")
        elif c == "s":
            if nxt() == "h":
                out.append("X")
                i += 1
            elif nxt() == "i" and in_set(nxt(2), "oa"):
                out.append("X")
            else:
                out.append("S")
        elif c == "t":
            if nxt() == "i" and in_set(nxt(2), "oa"):
                out.append("X")
            elif nxt() == "h":
                out.append("0")
                i += 1
            elif nxt() == "c" and nxt(2) == "h":
                pass  # tch: t is silent
            else:
                out.append("T")
        elif c == "v":
            out.append("F")
        elif c in "wy":
            if in_set(nxt(), VOWELS):
                out.append(c.upper())
        elif c == "x":
            out.append("KS")
        elif c == "z":
            out.append("S")
        elif c in "fjlmnr":
            out.append(c.upper())
        i += 1

    return "".join(out)


def _letters(word: str) -> str:
    return re.sub(r"[^A-Za-z]", "", word)


def language_similarity(vocab: list[str] | tuple[str, ...]) -> SimilarityTable:
    """Phonetic similarity: 1 - distance(codes) / longer code length."""
    vocab = tuple(vocab)
    if not vocab:
        raise ValueError("empty vocabulary")
    if len(set(vocab)) != len(vocab):
        raise ValueError("vocabulary entries must be unique")
    codes = [phonetic_encode(_letters(word)) for word in vocab]
    n = len(vocab)
    matrix = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            distance = levenshtein(codes[i], codes[j])
            longest = max(len(codes[i]), len(codes[j]))
            sim = 1.0 - distance / longest if longest else 1.0
            matrix[i, j] = matrix[j, i] = min(1.0, max(0.0, sim))
    return SimilarityTable(vocab=vocab, matrix=matrix)


def gesture_similarity(vocab: list[str] | tuple[str, ...], seed: int) -> SimilarityTable:
    """Synthetic detector confusability, symmetric U(0.05, 0.4) off-diagonal."""
    vocab = tuple(vocab)
    n = len(vocab)
    if n < 1:
        raise ValueError("vocabulary must have at least one entry")
    rng = np.random.default_rng(seed)
    matrix = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            matrix[i, j] = matrix[j, i] = rng.uniform(0.05, 0.4)
    return SimilarityTable(vocab=vocab, matrix=matrix)
