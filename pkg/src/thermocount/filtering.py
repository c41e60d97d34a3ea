"""Component-area noise filter: the raw occupancy count for one frame."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError
from .labeling import LabelMap


@dataclass
class ComponentFilterDecision:
    """Which components survived the area band-pass."""

    kept_labels: list[int]
    raw_count: int


def band_kept_labels(sizes: list[int], noise_low: float, noise_high: float) -> list[int]:
    """Labels (1-based) whose area lies in the inclusive band."""
    if noise_low < 0:
        raise ParameterError("noise_low must be >= 0")
    if noise_low > noise_high:
        raise ParameterError("noise_low must not exceed noise_high")
    return [label for label, size in enumerate(sizes, start=1) if noise_low <= size <= noise_high]


def noise_filter(labelmap: LabelMap, noise_low: float, noise_high: float) -> ComponentFilterDecision:
    """Keep components whose pixel area lies in [noise_low, noise_high].

    Small components are thermal noise, oversized ones are lighting
    artifacts; what remains is counted as people. Bounds are inclusive.
    """
    kept = band_kept_labels(labelmap.sizes, noise_low, noise_high)
    return ComponentFilterDecision(kept_labels=kept, raw_count=len(kept))
