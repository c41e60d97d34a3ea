"""Estimation sessions over a sampled frame sequence.

A session walks sampled frames in order: the first frame seeds the
initialization mask, every later frame is segmented, differenced against
the previous segmentation, labeled, area-filtered, then smoothed through
the count memory. The mask is rebuilt from the current frame every
``mask_update_frequency`` processed frames. Sessions are strictly
sequential; run separate sessions for separate sequences.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import ParameterError
from .filtering import noise_filter
from .frames import ThermalFrame
from .labeling import label_components
from .motion import difference_catcher
from .params import Params
from .segmentation import BinaryMap, segment, segment_unmasked


@dataclass
class EstimateRecord:
    """One per-frame estimate, optionally scored against ground truth."""

    frame_index: int
    raw_count: int
    final_count: int
    ground_truth: int | None = None
    confidence: float | None = None


@dataclass
class SessionState:
    mask: BinaryMap
    frames_since_mask_update: int = 0
    memory: deque = field(default_factory=deque)
    prev_segmentation: BinaryMap | None = None
    last_difference: BinaryMap | None = None


def init_session(first_frame: ThermalFrame, params: Params) -> SessionState:
    """Build the initialization mask from the first sampled frame."""
    mask = segment_unmasked(first_frame, params)
    return SessionState(mask=mask, memory=deque(maxlen=params.memory_size))


def memory_propagate(raw_count: int, memory: deque) -> int:
    """Smooth a raw count through the history window.

    Returns the median of the remembered raw counts plus the new one
    (even cardinality takes the lower middle value), then pushes the raw
    count into the window. One bad frame cannot produce an outrageous
    jump, while a sustained level change wins out once it fills half the
    window.
    """
    if raw_count < 0:
        raise ParameterError("raw_count must be >= 0")
    window = sorted(list(memory) + [raw_count])
    final = window[(len(window) - 1) // 2]
    memory.append(raw_count)
    return final


def step(state: SessionState, frame: ThermalFrame, params: Params, frame_index: int = 0) -> tuple[SessionState, EstimateRecord]:
    """Process one sampled frame and emit its estimate.

    The first processed frame has no predecessor, so its raw count comes
    from its own segmentation; afterwards counts come from the difference
    against the previous segmentation.
    """
    seg = segment(frame, state.mask, params)
    if state.prev_segmentation is None:
        counted = seg
        state.last_difference = None
    else:
        counted = difference_catcher(state.prev_segmentation, seg)
        state.last_difference = counted
    labelmap = label_components(counted, params.connectivity)
    raw_count = noise_filter(labelmap, params.noise_low, params.noise_high).raw_count
    final_count = memory_propagate(raw_count, state.memory)

    state.prev_segmentation = seg
    state.frames_since_mask_update += 1
    if state.frames_since_mask_update >= params.mask_update_frequency:
        state.mask = segment_unmasked(frame, params)
        state.frames_since_mask_update = 0

    record = EstimateRecord(frame_index=frame_index, raw_count=raw_count, final_count=final_count)
    return state, record


def run_session(
    frames: list[ThermalFrame],
    params: Params,
    ground_truth: dict[int, int] | None = None,
    frame_indices: list[int] | None = None,
) -> list[EstimateRecord]:
    """Run a full session over sampled frames, scoring against ground truth.

    ``frame_indices`` carries the source indices of the sampled frames; it
    defaults to 0, 1, 2, ... and is what records and ground-truth keys are
    matched on.
    """
    from .metrics import confidence  # local import to keep module layering flat

    if not frames:
        raise ParameterError("no frames to process")
    if frame_indices is None:
        frame_indices = list(range(len(frames)))
    if len(frame_indices) != len(frames):
        raise ParameterError("frame_indices length must match frames")

    state = init_session(frames[0], params)
    records = []
    for idx, frame in zip(frame_indices, frames):
        state, record = step(state, frame, params, frame_index=idx)
        if ground_truth is not None and idx in ground_truth:
            record.ground_truth = ground_truth[idx]
            if record.ground_truth >= 1:
                record.confidence = confidence(record.final_count, record.ground_truth)
        records.append(record)
    return records
