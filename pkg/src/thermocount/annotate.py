"""Render review frames: source and detection views side by side.

Each annotated frame doubles the working resolution (200x100 in, 400x200
out): the left panel is the source frame with rows doubled, the right
panel shows the segmentation in gray with the frame-difference pixels in
white. Counts are stamped top-left with a tiny built-in bitmap font so
the output stays a plain PGM with no image-library dependency.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .frames import ThermalFrame
from .pipeline import EstimateRecord
from .segmentation import BinaryMap

# 5x7 glyphs; '#' marks lit pixels.
_GLYPHS = {
    "0": (".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."),
    "1": ("..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."),
    "2": (".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"),
    "3": (".###.", "#...#", "....#", "..##.", "....#", "#...#", ".###."),
    "4": ("...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."),
    "5": ("#####", "#....", "####.", "....#", "....#", "#...#", ".###."),
    "6": ("..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."),
    "7": ("#####", "....#", "...#.", "..#..", "..#..", "..#..", "..#.."),
    "8": (".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."),
    "9": (".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."),
    "P": ("####.", "#...#", "#...#", "####.", "#....", "#....", "#...."),
    "A": (".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"),
    "C": (".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."),
    ".": (".....", ".....", ".....", ".....", ".....", "..##.", "..##."),
    "-": (".....", ".....", ".....", ".###.", ".....", ".....", "....."),
    ":": (".....", "..##.", "..##.", ".....", "..##.", "..##.", "....."),
    " ": (".....", ".....", ".....", ".....", ".....", ".....", "....."),
}

GLYPH_WIDTH = 5
GLYPH_HEIGHT = 7


def draw_text(canvas: np.ndarray, text: str, top: int, left: int, scale: int = 2,
              value: float = 1.0, backing: float = 0.0) -> None:
    """Stamp ``text`` onto ``canvas`` in place over a solid backing box."""
    if scale < 1:
        raise ParameterError("text scale must be at least 1")
    unknown = [c for c in text if c not in _GLYPHS]
    if unknown:
        raise ParameterError(f"no glyph for {unknown[0]!r}")
    advance = (GLYPH_WIDTH + 1) * scale
    width = len(text) * advance - scale if text else 0
    height = GLYPH_HEIGHT * scale

    h, w = canvas.shape
    if not text or top >= h or left >= w:
        return
    canvas[max(top, 0):min(top + height, h), max(left, 0):min(left + width, w)] = backing
    for i, char in enumerate(text):
        glyph = _GLYPHS[char]
        x0 = left + i * advance
        for r, row in enumerate(glyph):
            for c, cell in enumerate(row):
                if cell != "#":
                    continue
                y = top + r * scale
                x = x0 + c * scale
                y1, x1 = min(y + scale, h), min(x + scale, w)
                if y < h and x < w and y1 > 0 and x1 > 0:
                    canvas[max(y, 0):y1, max(x, 0):x1] = value


def annotate_frame(frame: ThermalFrame, segmentation: BinaryMap, difference: BinaryMap,
                   record: EstimateRecord) -> ThermalFrame:
    """Compose the double-size review frame for one estimate.

    Left: the source frame. Right: segmentation at 0.4 gray overlaid with
    difference pixels at full white. Rows are doubled so each panel keeps
    the source aspect. The predicted count is stamped first; the true
    count and confidence follow when ground truth is attached.
    """
    h, w = frame.pixels.shape
    if segmentation.bits.shape != (h, w) or difference.bits.shape != (h, w):
        raise ParameterError("segmentation/difference size does not match frame")

    left = np.repeat(frame.pixels, 2, axis=0)
    overlay = np.zeros((h, w), dtype=np.float64)
    overlay[segmentation.bits] = 0.4
    overlay[difference.bits] = 1.0
    right = np.repeat(overlay, 2, axis=0)
    canvas = np.concatenate([left, right], axis=1)

    margin, line = 4, GLYPH_HEIGHT * 2 + 2
    draw_text(canvas, f"P:{record.final_count}", margin, margin)
    row = margin + line
    if record.ground_truth is not None:
        draw_text(canvas, f"A:{record.ground_truth}", row, margin)
        row += line
    if record.confidence is not None:
        draw_text(canvas, f"C:{record.confidence:.2f}", row, margin)
    return ThermalFrame(canvas, timestamp_s=frame.timestamp_s)
