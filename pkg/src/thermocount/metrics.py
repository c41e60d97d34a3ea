"""Evaluation metrics: per-frame confidence, sequence accuracy, aggregates."""

from __future__ import annotations

import math

from .errors import ParameterError
from .pipeline import EstimateRecord


def round1(value: float) -> float:
    """Round to one decimal, halves away from zero (72.35 -> 72.4)."""
    return math.floor(value * 10.0 + 0.5) / 10.0 if value >= 0 else -round1(-value)


def confidence(estimation: int, real: int) -> float:
    """Confidence score 1 - (estimation - real)/real.

    Deliberately taken at face value: underestimates score above 1 and
    gross overestimates go negative. Undefined for real == 0; callers
    exclude those frames instead of failing.
    """
    if real < 1:
        raise ParameterError("confidence is undefined for real < 1")
    return 1.0 - (estimation - real) / real


def accuracy(records: list[EstimateRecord]) -> float:
    """Exact-match accuracy in percent, one decimal."""
    if not records:
        raise ParameterError("accuracy of an empty record list")
    for rec in records:
        if rec.ground_truth is None:
            raise ParameterError(f"record {rec.frame_index} lacks ground truth")
    matches = sum(1 for rec in records if rec.final_count == rec.ground_truth)
    return round1(100.0 * matches / len(records))


def aggregate(records: list[EstimateRecord]) -> dict:
    """Accuracy over all frames plus mean confidence over frames with real >= 1.

    Frames whose ground truth is zero are excluded from the confidence mean
    (the score divides by the real count) and reported in
    ``excluded_zero_truth``.
    """
    if not records:
        raise ParameterError("aggregate of an empty record list")
    scores = []
    excluded = 0
    for rec in records:
        if rec.ground_truth is None:
            raise ParameterError(f"record {rec.frame_index} lacks ground truth")
        if rec.ground_truth >= 1:
            scores.append(confidence(rec.final_count, rec.ground_truth))
        else:
            excluded += 1
    return {
        "accuracy": accuracy(records),
        "mean_confidence": (sum(scores) / len(scores)) if scores else None,
        "excluded_zero_truth": excluded,
    }


def experiment_average(accuracies: list[float], confidences: list[float]) -> dict:
    """Average the per-experiment accuracy and confidence columns."""
    if not accuracies or not confidences:
        raise ParameterError("experiment_average needs non-empty inputs")
    return {
        "accuracy": sum(accuracies) / len(accuracies),
        "confidence": sum(confidences) / len(confidences),
    }
