"""Connected component labeling of binary maps.

`label_components` is the production two-pass algorithm: a first pass hands
out provisional labels (one per horizontal run) and records equivalences in
a union-find, a second pass resolves roots and renumbers components in
raster-scan order of first touch. Working on runs instead of single pixels
keeps the Python side small and the hot work in numpy.

`flood_fill_oracle` is an intentionally naive stack-based flood fill kept
only to cross-check `label_components` in tests. Do not "optimize" it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .segmentation import BinaryMap


@dataclass
class LabelMap:
    """Component labels (0 = background, 1..n = components) plus accounting."""

    labels: np.ndarray  # (height, width) int32
    sizes: list[int]  # sizes[i-1] = pixel area of component i
    bounding_boxes: list[tuple[int, int, int, int]]  # (min_row, min_col, max_row, max_col)

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def n_components(self) -> int:
        return len(self.sizes)


class UnionFind:
    """Array-backed union-find; union keeps the smaller root."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:  # path compression
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri < rj:
            self.parent[rj] = ri
        elif rj < ri:
            self.parent[ri] = rj


def _check_connectivity(connectivity: int) -> None:
    if connectivity not in (4, 8):
        raise ParameterError(f"connectivity must be 4 or 8, got {connectivity}")


def _row_runs(bits: np.ndarray) -> np.ndarray:
    """Provisional label per pixel: consecutive ids for horizontal runs, 0 = background."""
    h, w = bits.shape
    starts = bits.copy()
    starts[:, 1:] &= ~bits[:, :-1]
    run_ids = np.cumsum(starts.ravel()).reshape(h, w)
    return np.where(bits, run_ids, 0)


def label_components(bmap: BinaryMap, connectivity: int = 8) -> LabelMap:
    """Two-pass connected component labeling with union-find merging.

    Components are numbered 1..n in raster-scan order of their first pixel,
    so output is reproducible byte for byte.
    """
    _check_connectivity(connectivity)
    bits = bmap.bits
    runs = _row_runs(bits)
    n_runs = int(runs.max())
    if n_runs == 0:
        return LabelMap(labels=np.zeros(bits.shape, dtype=np.int32), sizes=[], bounding_boxes=[])

    uf = UnionFind(n_runs + 1)
    # vertical (and for 8-connectivity diagonal) adjacencies between rows
    shifts = [0] if connectivity == 4 else [-1, 0, 1]
    upper = runs[:-1, :]
    lower = runs[1:, :]
    for dc in shifts:
        if dc == 0:
            a, b = upper, lower
        elif dc == -1:
            a, b = upper[:, 1:], lower[:, :-1]
        else:
            a, b = upper[:, :-1], lower[:, 1:]
        touching = (a > 0) & (b > 0)
        if not touching.any():
            continue
        pairs = np.unique(np.stack([a[touching], b[touching]], axis=1), axis=0)
        for run_a, run_b in pairs:
            uf.union(int(run_a), int(run_b))

    roots = np.array([uf.find(i) for i in range(n_runs + 1)], dtype=np.int64)
    # renumber roots in raster order: runs were created in raster order, so a
    # component's smallest member run id identifies its first touch
    order = np.full(n_runs + 1, -1, dtype=np.int64)
    next_label = 0
    for run in range(1, n_runs + 1):
        root = roots[run]
        if order[root] < 0:
            next_label += 1
            order[root] = next_label
    labels = order[roots[runs]].astype(np.int32)
    labels[~bits] = 0

    sizes_arr = np.bincount(labels.ravel(), minlength=next_label + 1)[1:]
    boxes = _bounding_boxes(labels, next_label)
    return LabelMap(labels=labels, sizes=[int(s) for s in sizes_arr], bounding_boxes=boxes)


def _bounding_boxes(labels: np.ndarray, n: int) -> list[tuple[int, int, int, int]]:
    h, w = labels.shape
    rows, cols = np.nonzero(labels)
    ids = labels[rows, cols] - 1
    min_r = np.full(n, h, dtype=np.int64)
    max_r = np.full(n, -1, dtype=np.int64)
    min_c = np.full(n, w, dtype=np.int64)
    max_c = np.full(n, -1, dtype=np.int64)
    np.minimum.at(min_r, ids, rows)
    np.maximum.at(max_r, ids, rows)
    np.minimum.at(min_c, ids, cols)
    np.maximum.at(max_c, ids, cols)
    return [
        (int(min_r[i]), int(min_c[i]), int(max_r[i]), int(max_c[i]))
        for i in range(n)
    ]


def flood_fill_oracle(bmap: BinaryMap, connectivity: int = 8) -> LabelMap:
    """Reference labeling via explicit-stack flood fill (test oracle)."""
    _check_connectivity(connectivity)
    bits = bmap.bits
    h, w = bits.shape
    labels = np.zeros((h, w), dtype=np.int32)
    if connectivity == 4:
        neighborhood = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    else:
        neighborhood = [(dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1) if (dr, dc) != (0, 0)]

    sizes: list[int] = []
    boxes: list[tuple[int, int, int, int]] = []
    current = 0
    for r in range(h):
        for c in range(w):
            if not bits[r, c] or labels[r, c] != 0:
                continue
            current += 1
            area = 0
            min_r = max_r = r
            min_c = max_c = c
            stack = [(r, c)]
            labels[r, c] = current
            while stack:
                pr, pc = stack.pop()
                area += 1
                min_r = min(min_r, pr)
                max_r = max(max_r, pr)
                min_c = min(min_c, pc)
                max_c = max(max_c, pc)
                for dr, dc in neighborhood:
                    nr, nc = pr + dr, pc + dc
                    if 0 <= nr < h and 0 <= nc < w and bits[nr, nc] and labels[nr, nc] == 0:
                        labels[nr, nc] = current
                        stack.append((nr, nc))
            sizes.append(area)
            boxes.append((min_r, min_c, max_r, max_c))
    return LabelMap(labels=labels, sizes=sizes, bounding_boxes=boxes)
