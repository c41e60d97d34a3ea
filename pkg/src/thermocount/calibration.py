"""Parameter configuration: per-axis bisection search over labeled frames.

The five tunables are searched one axis at a time, assuming the accuracy
response along an axis is unimodal: probe the third points of the current
bracket, discard the worse third, repeat until the bracket shrinks to the
axis resolution. Axes are visited in a fixed order and passes repeat until
a full pass stops improving (capped at five). Exact-match accuracy on the
calibration sequence is the objective throughout.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, replace
from typing import Callable

from .errors import FormatError, ParameterError
from .filtering import band_kept_labels
from .frames import SequenceManifest, sample_frames
from .labeling import label_components
from .metrics import accuracy
from .params import Params
from .pipeline import EstimateRecord, memory_propagate
from .segmentation import BinaryMap, segment_unmasked

AXIS_ORDER = ("lighting_threshold", "noise_low", "noise_high", "mask_update_frequency", "memory_size")


@dataclass
class AxisSpec:
    min: float
    max: float
    integer: bool = False

    def __post_init__(self):
        if self.min > self.max:
            raise ParameterError("axis min must not exceed max")
        if self.integer and (self.min != int(self.min) or self.max != int(self.max)):
            raise ParameterError("integer axis bounds must be integers")

    @property
    def resolution(self) -> float:
        return 1.0 if self.integer else (self.max - self.min) / 256.0

    def midpoint(self) -> float:
        return (int(self.min) + int(self.max)) // 2 if self.integer else (self.min + self.max) / 2.0


@dataclass
class ParamSpace:
    """Search ranges for the tunables plus fixed values for the constants."""

    axes: dict[str, AxisSpec]
    k: int = 2
    blur_sigma: float = 1.0
    connectivity: int = 8

    def __post_init__(self):
        missing = [a for a in AXIS_ORDER if a not in self.axes]
        if missing:
            raise ParameterError(f"param space lacks axes: {missing}")

    def midpoint_params(self) -> Params:
        values = {axis: self.axes[axis].midpoint() for axis in AXIS_ORDER}
        if values["noise_low"] > values["noise_high"]:
            values["noise_high"] = values["noise_low"]
        return Params(
            mask_update_frequency=int(values["mask_update_frequency"]),
            lighting_threshold=values["lighting_threshold"],
            noise_low=values["noise_low"],
            noise_high=values["noise_high"],
            memory_size=int(values["memory_size"]),
            k=self.k,
            blur_sigma=self.blur_sigma,
            connectivity=self.connectivity,
        )


def default_space() -> ParamSpace:
    """Sane search ranges for 200x100 working frames."""
    return ParamSpace(
        axes={
            "lighting_threshold": AxisSpec(0.05, 0.95),
            "noise_low": AxisSpec(1, 200, integer=True),
            "noise_high": AxisSpec(200, 6000, integer=True),
            "mask_update_frequency": AxisSpec(1, 60, integer=True),
            "memory_size": AxisSpec(1, 15, integer=True),
        }
    )


def load_space(path) -> ParamSpace:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed space file: {exc}") from exc
    try:
        axes = {
            name: AxisSpec(float(spec["min"]), float(spec["max"]), bool(spec.get("integer", False)))
            for name, spec in raw["axes"].items()
        }
        fixed = raw.get("fixed", {})
        return ParamSpace(
            axes=axes,
            k=int(fixed.get("k", 2)),
            blur_sigma=float(fixed.get("blur_sigma", 1.0)),
            connectivity=int(fixed.get("connectivity", 8)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: bad space description: {exc}") from exc


@dataclass
class CalibrationReport:
    best_params: Params
    best_accuracy: float
    trace: list[tuple[Params, float]]
    passes: int

    def to_dict(self) -> dict:
        return {
            "best_params": self.best_params.to_dict(),
            "best_accuracy": self.best_accuracy,
            "passes": self.passes,
            "evaluations": len(self.trace),
            "trace": [{"params": p.to_dict(), "accuracy": a} for p, a in self.trace],
        }


def set_axis(params: Params, axis: str, value: float) -> Params:
    """Return params with one axis updated, clamping the paired noise bound."""
    if axis not in AXIS_ORDER:
        raise ParameterError(f"unknown axis {axis!r}")
    if axis in ("mask_update_frequency", "memory_size"):
        value = int(round(value))
    updated = {axis: value}
    if axis == "noise_low" and value > params.noise_high:
        updated["noise_high"] = value
    if axis == "noise_high" and value < params.noise_low:
        updated["noise_low"] = value
    return replace(params, **updated)


class _CachedObjective:
    """Memoizing wrapper so repeated probes cost one session each."""

    def __init__(self, fn: Callable[[Params], float]):
        self.fn = fn
        self.cache: dict[tuple, float] = {}
        self.trace: list[tuple[Params, float]] = []

    def __call__(self, params: Params) -> float:
        key = (
            params.mask_update_frequency,
            params.lighting_threshold,
            params.noise_low,
            params.noise_high,
            params.memory_size,
            params.k,
            params.blur_sigma,
            params.connectivity,
        )
        if key not in self.cache:
            value = self.fn(params)
            self.cache[key] = value
            self.trace.append((params, value))
        return self.cache[key]


class _SessionEvaluator:
    """Score params on a labeled sequence, staged for probe-heavy search.

    Segmentation depends only on (lighting_threshold, k, blur_sigma) and
    the labeled component areas additionally on (mask_update_frequency,
    connectivity); the noise band and memory size merely post-process the
    per-frame area lists. Caching those two stages makes most probes cost
    microseconds instead of a full session, while producing exactly the
    estimates run_session would.
    """

    def __init__(self, calibration: SequenceManifest):
        if calibration.ground_truth is None:
            raise ParameterError("calibration sequence has no ground truth")
        missing = [i for i in calibration.sampled if i not in calibration.ground_truth]
        if missing:
            raise ParameterError(f"ground truth missing for sampled frames {missing[:5]}")
        self.frames = sample_frames(calibration)
        self.indices = list(calibration.sampled)
        self.truth = dict(calibration.ground_truth)
        self._unmasked: dict[tuple, list] = {}
        self._areas: dict[tuple, list[list[int]]] = {}

    def _unmasked_maps(self, params: Params) -> list:
        key = (params.lighting_threshold, params.k, params.blur_sigma)
        if key not in self._unmasked:
            self._unmasked[key] = [segment_unmasked(f, params) for f in self.frames]
        return self._unmasked[key]

    def _component_areas(self, params: Params) -> list[list[int]]:
        """Per-frame component areas, replaying the session's mask schedule."""
        key = (
            params.lighting_threshold,
            params.k,
            params.blur_sigma,
            params.mask_update_frequency,
            params.connectivity,
        )
        if key not in self._areas:
            unmasked = self._unmasked_maps(params)
            areas = []
            mask = unmasked[0]
            since_update = 0
            prev = None
            for current in unmasked:
                seg = BinaryMap(current.bits & ~mask.bits)
                counted = seg if prev is None else BinaryMap(prev.bits ^ seg.bits)
                areas.append(label_components(counted, params.connectivity).sizes)
                prev = seg
                since_update += 1
                if since_update >= params.mask_update_frequency:
                    mask = current
                    since_update = 0
            self._areas[key] = areas
        return self._areas[key]

    def __call__(self, params: Params) -> float:
        records = []
        memory = deque(maxlen=params.memory_size)
        for idx, areas in zip(self.indices, self._component_areas(params)):
            raw = len(band_kept_labels(areas, params.noise_low, params.noise_high))
            final = memory_propagate(raw, memory)
            records.append(EstimateRecord(idx, raw, final, ground_truth=self.truth[idx]))
        return accuracy(records)


def session_objective(calibration: SequenceManifest) -> Callable[[Params], float]:
    """Build the real objective: exact-match accuracy over the sequence.

    Frames are loaded once up front; the calibration sequence must carry
    ground truth for every sampled frame.
    """
    return _SessionEvaluator(calibration)


def evaluate_params(params: Params, calibration: SequenceManifest) -> float:
    """Accuracy percent of one parameter combination on a labeled sequence."""
    return session_objective(calibration)(params)


def _as_objective(calibration) -> _CachedObjective:
    if isinstance(calibration, _CachedObjective):
        return calibration
    if callable(calibration):
        return _CachedObjective(calibration)
    return _CachedObjective(session_objective(calibration))


def binary_search_axis(axis: str, space: ParamSpace, current: Params, calibration) -> Params:
    """Bisect one axis for its best value, holding the other axes fixed.

    ``calibration`` may be a labeled SequenceManifest or any callable
    mapping Params to an accuracy score. The bracket endpoints and the
    current value are always probed, so a constant response returns the
    axis minimum and a width-one integer axis degenerates to comparing the
    two endpoints. Ties keep the smaller value.
    """
    if axis not in space.axes:
        raise ParameterError(f"axis {axis!r} not in space")
    spec = space.axes[axis]
    objective = _as_objective(calibration)

    best_value = None
    best_acc = -1.0

    def probe(value: float) -> float:
        nonlocal best_value, best_acc
        acc = objective(set_axis(current, axis, value))
        if acc > best_acc or (acc == best_acc and value < best_value):
            best_acc, best_value = acc, value
        return acc

    lo, hi = spec.min, spec.max
    probe(lo)
    if hi != lo:
        probe(hi)
    current_value = getattr(current, axis)
    if spec.min <= current_value <= spec.max:
        probe(current_value)

    if spec.integer:
        lo_i, hi_i = int(lo), int(hi)
        while hi_i - lo_i > 1:
            if hi_i - lo_i <= 3:
                for value in range(lo_i + 1, hi_i):  # endpoints already probed
                    probe(value)
                break
            third = (hi_i - lo_i) // 3
            m1, m2 = lo_i + third, hi_i - third
            if probe(m1) >= probe(m2):
                hi_i = m2
            else:
                lo_i = m1
    else:
        resolution = spec.resolution
        while hi - lo > resolution:
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if probe(m1) >= probe(m2):
                hi = m2
            else:
                lo = m1

    return set_axis(current, axis, best_value)


def configure(space: ParamSpace, calibration, max_passes: int = 5) -> CalibrationReport:
    """Coordinate-descent search over all five axes.

    Starts from the midpoint of every axis and repeats full passes until
    one stops improving the best accuracy (or the pass cap is reached).
    """
    objective = _as_objective(calibration)
    current = space.midpoint_params()
    best_acc = objective(current)
    best_params = current

    passes = 0
    for _ in range(max_passes):
        passes += 1
        acc_before = best_acc
        for axis in AXIS_ORDER:
            current = binary_search_axis(axis, space, current, objective)
            acc = objective(current)
            if acc > best_acc:
                best_acc, best_params = acc, current
        if best_acc <= acc_before:
            break

    return CalibrationReport(
        best_params=best_params,
        best_accuracy=best_acc,
        trace=list(objective.trace),
        passes=passes,
    )
