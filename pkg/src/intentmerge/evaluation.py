"""Ablation matrix evaluation and CSV reporting.

A result row records one (model configuration, dataset, noise level) cell:
accuracy plus the three interaction-mode counts.  Accuracy counts a sample
as correct only when the decision is clear and matches the truth exactly,
so clarification requests and rejections score as failures.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from sklearn.base import clone

from .estimator import IntentResolver, check_samples
from .selector import CLEAR, ENTROPY, FIXED, NOISE, UNCLEAR

CSV_COLUMNS = (
    "model",
    "merge_op",
    "thresholding",
    "dataset",
    "noise",
    "n",
    "accuracy",
    "n_clear",
    "n_unclear",
    "n_noise",
)


@dataclass(frozen=True)
class EvalRow:
    model: str
    merge_op: str
    thresholding: str
    dataset: str
    noise: str
    n: int
    accuracy: float
    n_clear: int
    n_unclear: int
    n_noise: int

    def __post_init__(self) -> None:
        if self.n_clear + self.n_unclear + self.n_noise != self.n:
            raise ValueError("mode counts must sum to n")

    def as_csv_row(self) -> list:
        return [getattr(self, column) for column in CSV_COLUMNS]


def evaluate(
    resolver: IntentResolver,
    samples,
    dataset: str | None = None,
    noise: str | None = None,
    threads: int = 1,
) -> EvalRow:
    """Score one fitted resolver on one dataset."""
    samples = check_samples(samples)
    if not samples:
        raise ValueError("nothing to evaluate")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            decisions = list(
                pool.map(lambda s: resolver.resolve(s.sentences, s.scene), samples)
            )
    else:
        decisions = resolver.decide_all(samples)

    counts = {CLEAR: 0, UNCLEAR: 0, NOISE: 0}
    hits = 0
    for sample, decision in zip(samples, decisions):
        counts[decision.mode] += 1
        if decision.mode == CLEAR and decision.intent == sample.truth:
            hits += 1

    return EvalRow(
        model=resolver.model_,
        merge_op=resolver.merge_op_,
        thresholding=resolver.scheme_.kind,
        dataset=dataset if dataset is not None else samples[0].kind,
        noise=noise if noise is not None else samples[0].noise,
        n=len(samples),
        accuracy=hits / len(samples),
        n_clear=counts[CLEAR],
        n_unclear=counts[UNCLEAR],
        n_noise=counts[NOISE],
    )


def ablation_models(base: IntentResolver | None = None) -> list[IntentResolver]:
    """The full model grid: baseline plus M1-M3 x merge ops x thresholdings."""
    base = base if base is not None else IntentResolver()
    grid: list[IntentResolver] = []
    baseline = clone(base)
    baseline.set_params(model="baseline")
    grid.append(baseline)
    for model in ("M1", "M2", "M3"):
        for merge in ("max", "mul", "add"):
            for thresholding in (FIXED, ENTROPY):
                member = clone(base)
                member.set_params(model=model, merge=merge, thresholding=thresholding)
                grid.append(member)
    return grid


def run_matrix(
    datasets: Mapping[tuple[str, str], Sequence],
    models: Iterable[IntentResolver] | None = None,
    threads: int = 1,
) -> list[EvalRow]:
    """Evaluate every model on every dataset; rows in grid order.

    `datasets` maps (dataset label, noise id) to sample lists.
    """
    resolvers = list(models) if models is not None else ablation_models()
    rows: list[EvalRow] = []
    for resolver in resolvers:
        fitted = clone(resolver).fit()
        for (label, noise_id), samples in datasets.items():
            rows.append(
                evaluate(fitted, samples, dataset=label, noise=noise_id, threads=threads)
            )
    return rows


def rows_to_csv(rows: Iterable[EvalRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        values = row.as_csv_row()
        values[CSV_COLUMNS.index("accuracy")] = f"{row.accuracy:.6f}"
        writer.writerow(values)
    return buffer.getvalue()


def save_csv(rows: Iterable[EvalRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(rows_to_csv(rows))
