"""Thermal frame sequences: loading, validation, sampling, cropping.

Frames live on disk as PGM files referenced by a JSON manifest:

    {"frames": ["f0.pgm", ...], "fps": 10.0, "interval_s": 2.0,
     "ground_truth": {"0": 1, "20": 2}}

Paths are relative to the manifest's directory. ``ground_truth`` keys are
source frame indices and must land on sampled frames. Pixel intensities are
normalized into [0, 1] by the file's maxval so absolute thermal levels stay
comparable across frames.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, ParameterError
from .pgm import read_pgm, write_pgm

WORKING_WIDTH = 200
WORKING_HEIGHT = 100


@dataclass
class ThermalFrame:
    """A single-channel thermal image with intensities in [0, 1]."""

    pixels: np.ndarray  # (height, width) float64
    timestamp_s: float = 0.0

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.float64)
        if self.pixels.ndim != 2 or self.pixels.shape[0] < 1 or self.pixels.shape[1] < 1:
            raise ParameterError("frame must be a non-empty 2-D grid")
        lo, hi = float(self.pixels.min()), float(self.pixels.max())
        if lo < 0.0 or hi > 1.0:
            raise ParameterError(f"intensities outside [0,1]: min={lo}, max={hi}")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass
class SequenceManifest:
    """Ordered frame paths plus the timing needed to sample them."""

    frame_paths: list[str]
    source_fps: float
    sample_interval_s: float = 2.0
    ground_truth: dict[int, int] | None = None
    base_dir: str = "."
    sampled: list[int] = field(init=False)

    def __post_init__(self):
        if not self.frame_paths:
            raise FormatError("empty sequence")
        if self.source_fps <= 0:
            raise FormatError(f"fps must be positive, got {self.source_fps}")
        if self.sample_interval_s <= 0:
            raise FormatError(f"interval_s must be positive, got {self.sample_interval_s}")
        self.sampled = sample_indices(len(self.frame_paths), self.source_fps, self.sample_interval_s)
        if self.ground_truth is not None:
            valid = set(self.sampled)
            for idx in self.ground_truth:
                if idx not in valid:
                    raise FormatError(f"ground_truth index {idx} is not a sampled frame")

    def frame_path(self, index: int) -> str:
        return os.path.join(self.base_dir, self.frame_paths[index])


def sample_indices(n_frames: int, fps: float, interval_s: float) -> list[int]:
    """Source frame indices nearest to t = 0, interval, 2*interval, ...

    Halfway points round down; each index is selected at most once.
    """
    indices = []
    k = 0
    while True:
        idx = math.ceil(k * interval_s * fps - 0.5)
        if idx >= n_frames:
            break
        if not indices or idx != indices[-1]:
            indices.append(idx)
        k += 1
    return indices


def load_sequence(manifest_path) -> SequenceManifest:
    """Load and validate a sequence manifest file."""
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{manifest_path}: malformed manifest: {exc}") from exc

    if not isinstance(raw, dict) or "frames" not in raw or "fps" not in raw:
        raise FormatError(f"{manifest_path}: manifest needs 'frames' and 'fps'")
    frames = raw["frames"]
    if not isinstance(frames, list) or not all(isinstance(p, str) for p in frames):
        raise FormatError(f"{manifest_path}: 'frames' must be a list of paths")

    ground_truth = None
    if raw.get("ground_truth") is not None:
        try:
            ground_truth = {int(k): int(v) for k, v in raw["ground_truth"].items()}
        except (TypeError, ValueError, AttributeError) as exc:
            raise FormatError(f"{manifest_path}: bad ground_truth map") from exc
        if any(v < 0 for v in ground_truth.values()):
            raise FormatError(f"{manifest_path}: negative ground_truth count")

    manifest = SequenceManifest(
        frame_paths=list(frames),
        source_fps=float(raw["fps"]),
        sample_interval_s=float(raw.get("interval_s", 2.0)),
        ground_truth=ground_truth,
        base_dir=os.path.dirname(os.path.abspath(manifest_path)),
    )
    for i in range(len(manifest.frame_paths)):
        path = manifest.frame_path(i)
        if not os.path.isfile(path):
            raise FileNotFoundError(f"{manifest_path}: missing frame file {path}")
    return manifest


def read_frame(path) -> ThermalFrame:
    """Read one PGM frame and normalize by its maxval."""
    samples, maxval = read_pgm(path)
    return ThermalFrame(pixels=samples.astype(np.float64) / maxval)


def write_frame(path, frame: ThermalFrame, bit_depth: int = 16) -> None:
    """Quantize a frame to 8- or 16-bit samples and write it as binary PGM."""
    if bit_depth not in (8, 16):
        raise ParameterError(f"bit_depth must be 8 or 16, got {bit_depth}")
    maxval = 255 if bit_depth == 8 else 65535
    samples = np.rint(frame.pixels * maxval).astype(np.uint16)
    write_pgm(path, samples, maxval)


def sample_frames(manifest: SequenceManifest) -> list[ThermalFrame]:
    """Read the frames selected by the manifest's sampling interval.

    Timestamps are set from the source index and fps.
    """
    out = []
    for idx in manifest.sampled:
        frame = read_frame(manifest.frame_path(idx))
        frame.timestamp_s = idx / manifest.source_fps
        out.append(frame)
    return out


def _overlap_weights(src: int, dst: int) -> np.ndarray:
    """(dst, src) row-stochastic matrix of box-filter overlaps for area averaging."""
    weights = np.zeros((dst, src))
    scale = src / dst
    for j in range(dst):
        start = j * scale
        end = (j + 1) * scale
        i0 = int(math.floor(start))
        i1 = min(src, int(math.ceil(end)))
        for i in range(i0, i1):
            weights[j, i] = min(end, i + 1) - max(start, i)
    weights /= weights.sum(axis=1, keepdims=True)
    return weights


def crop_resize(frame: ThermalFrame, target_w: int = WORKING_WIDTH, target_h: int = WORKING_HEIGHT) -> ThermalFrame:
    """Center-crop to the target aspect ratio, then area-average down to target size.

    The source must be at least as large as the target in both dimensions.
    """
    if target_w < 1 or target_h < 1:
        raise ParameterError("target dimensions must be positive")
    w, h = frame.width, frame.height
    if w < target_w or h < target_h:
        raise FormatError(
            f"below minimum resolution: {w}x{h} < {target_w}x{target_h}"
        )
    if (w, h) == (target_w, target_h):
        return ThermalFrame(pixels=frame.pixels.copy(), timestamp_s=frame.timestamp_s)

    aspect = target_w / target_h
    if w / h > aspect:
        crop_h = h
        crop_w = max(target_w, round(h * aspect))
    else:
        crop_w = w
        crop_h = max(target_h, round(w / aspect))
    x0 = (w - crop_w) // 2
    y0 = (h - crop_h) // 2
    cropped = frame.pixels[y0 : y0 + crop_h, x0 : x0 + crop_w]

    if (crop_w, crop_h) == (target_w, target_h):
        resized = cropped.copy()
    else:
        row_w = _overlap_weights(crop_h, target_h)
        col_w = _overlap_weights(crop_w, target_w)
        resized = row_w @ cropped @ col_w.T
        np.clip(resized, 0.0, 1.0, out=resized)
    return ThermalFrame(pixels=resized, timestamp_s=frame.timestamp_s)
