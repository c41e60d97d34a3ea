"""Request and response bodies for the HTTP service."""

from __future__ import annotations

import math

from pydantic import BaseModel, Field

from ..params import Params


class ParamsBody(BaseModel):
    """Pipeline parameters as they travel over the wire.

    ``noise_high`` is null for an unbounded upper area limit. Defaults are
    a mild general-purpose setting; calibrate for anything serious.
    """

    mask_update_frequency: int = 10
    lighting_threshold: float = 0.5
    noise_low: float = 30
    noise_high: float | None = None
    memory_size: int = 5
    k: int = 2
    blur_sigma: float = 1.0
    connectivity: int = 8

    def to_params(self) -> Params:
        return Params(
            mask_update_frequency=self.mask_update_frequency,
            lighting_threshold=self.lighting_threshold,
            noise_low=self.noise_low,
            noise_high=math.inf if self.noise_high is None else self.noise_high,
            memory_size=self.memory_size,
            k=self.k,
            blur_sigma=self.blur_sigma,
            connectivity=self.connectivity,
        )

    @classmethod
    def from_params(cls, params: Params) -> "ParamsBody":
        return cls(
            mask_update_frequency=params.mask_update_frequency,
            lighting_threshold=params.lighting_threshold,
            noise_low=params.noise_low,
            noise_high=None if math.isinf(params.noise_high) else params.noise_high,
            memory_size=params.memory_size,
            k=params.k,
            blur_sigma=params.blur_sigma,
            connectivity=params.connectivity,
        )


class SessionCreate(BaseModel):
    params: ParamsBody | None = None


class SessionInfo(BaseModel):
    session_id: str
    frames_seen: int
    params: ParamsBody


class FrameBody(BaseModel):
    """One frame as a row-major grid of intensities in [0, 1]."""

    pixels: list[list[float]]
    timestamp_s: float = 0.0
    ground_truth: int | None = Field(default=None, ge=0)


class FrameEstimate(BaseModel):
    session_id: str
    frame_index: int
    raw_count: int
    final_count: int
    ground_truth: int | None = None
    confidence: float | None = None


class RecordBody(BaseModel):
    frame_index: int
    raw_count: int = 0
    final_count: int
    ground_truth: int = Field(ge=0)


class MetricsRequest(BaseModel):
    records: list[RecordBody]


class MetricsResult(BaseModel):
    accuracy: float
    mean_confidence: float | None
    excluded_zero_truth: int


class Health(BaseModel):
    status: str
    sessions: int
