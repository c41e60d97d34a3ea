"""Per-frame human-candidate segmentation.

The stage chain is: intensity k-means, keep the hottest cluster, drop cold
and isolated pixels via the lighting threshold, soften with a Gaussian blur,
then subtract the initialization mask. Everything is deterministic so a
frame always segments the same way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .frames import ThermalFrame
from .params import Params


@dataclass
class BinaryMap:
    """Boolean foreground grid matching the frame that produced it."""

    bits: np.ndarray  # (height, width) bool

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=bool)
        if self.bits.ndim != 2:
            raise ParameterError("binary map must be 2-D")

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    def popcount(self) -> int:
        return int(self.bits.sum())

    @classmethod
    def empty(cls, width: int, height: int) -> "BinaryMap":
        return cls(bits=np.zeros((height, width), dtype=bool))


@dataclass
class KMeansResult:
    """Outcome of clustering a frame's intensity distribution."""

    assignments: np.ndarray  # (height, width) int, cluster ids 0..k-1
    centroids: list[float]  # ascending
    iterations: int
    inertia: float
    collapsed: bool = False  # True when fewer distinct intensities than requested k
    requested_k: int = field(default=0)


def _best_two_split(sorted_x: np.ndarray) -> tuple[float, float]:
    """Centroids of the minimum-inertia contiguous split of sorted 1-D data.

    For two clusters on a line the optimal partition is a contiguous split,
    so scanning all n-1 split points finds the global optimum directly.
    """
    n = sorted_x.size
    csum = np.cumsum(sorted_x)
    csq = np.cumsum(sorted_x * sorted_x)
    left_n = np.arange(1, n, dtype=np.float64)
    right_n = n - left_n
    left_sum = csum[:-1]
    right_sum = csum[-1] - left_sum
    left_q = csq[:-1]
    right_q = csq[-1] - left_q
    inertia = (left_q - left_sum**2 / left_n) + (right_q - right_sum**2 / right_n)
    i = int(np.argmin(inertia))
    return float(left_sum[i] / left_n[i]), float(right_sum[i] / right_n[i])


def _initial_centroids(sorted_x: np.ndarray, k: int) -> np.ndarray:
    """Deterministic starting centroids.

    k=2 starts from the globally optimal contiguous split (cheap to compute
    exactly and keeps Lloyd out of the local optima a plain quantile start
    falls into). Other k start at the (i+0.5)/k quantiles of the sorted
    multiset, deduplicated against the distinct values.
    """
    n = sorted_x.size
    if k == 2:
        lo, hi = _best_two_split(sorted_x)
        if lo != hi:
            return np.array([lo, hi])
    picks: list[float] = []
    for i in range(k):
        v = float(sorted_x[min(n - 1, int((i + 0.5) * n / k))])
        if v not in picks:
            picks.append(v)
    if len(picks) < k:
        for v in np.unique(sorted_x):
            if len(picks) == k:
                break
            if float(v) not in picks:
                picks.append(float(v))
    return np.sort(np.array(picks, dtype=np.float64))


def kmeans_intensity(frame: ThermalFrame, k: int = 2, max_iter: int = 100, tol: float = 1e-6) -> KMeansResult:
    """Cluster a frame's intensities with Lloyd iterations.

    Initialization is deterministic (see _initial_centroids). If the frame
    has fewer distinct intensities than k, the cluster count collapses to
    the number of distinct values and the result is flagged.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if max_iter < 0 or tol < 0:
        raise ParameterError("max_iter and tol must be non-negative")

    x = frame.pixels.ravel()
    sorted_x = np.sort(x)
    n_distinct = np.unique(sorted_x).size
    k_eff = min(k, n_distinct)
    collapsed = k_eff < k

    centroids = _initial_centroids(sorted_x, k_eff)
    k_eff = centroids.size

    iterations = 0
    for _ in range(max_iter):
        dist = np.abs(x[:, None] - centroids[None, :])
        assign = np.argmin(dist, axis=1)  # ties go to the lower cluster id
        new_centroids = centroids.copy()
        counts = np.bincount(assign, minlength=k_eff)
        sums = np.bincount(assign, weights=x, minlength=k_eff)
        nonempty = counts > 0
        new_centroids[nonempty] = sums[nonempty] / counts[nonempty]
        new_centroids = np.sort(new_centroids)
        iterations += 1
        movement = float(np.max(np.abs(new_centroids - centroids)))
        centroids = new_centroids
        if movement <= tol:
            break

    dist = np.abs(x[:, None] - centroids[None, :])
    assign = np.argmin(dist, axis=1)
    inertia = float(np.sum((x - centroids[assign]) ** 2))
    return KMeansResult(
        assignments=assign.reshape(frame.pixels.shape).astype(np.int32),
        centroids=[float(c) for c in centroids],
        iterations=iterations,
        inertia=inertia,
        collapsed=collapsed,
        requested_k=k,
    )


def hot_cluster_map(result: KMeansResult) -> BinaryMap:
    """Foreground = pixels in the cluster with the highest centroid."""
    hottest = len(result.centroids) - 1
    return BinaryMap(bits=result.assignments == hottest)


def _neighbor_counts(bits: np.ndarray) -> np.ndarray:
    """Number of foreground 8-neighbors per pixel."""
    padded = np.pad(bits.astype(np.int32), 1)
    total = np.zeros_like(bits, dtype=np.int32)
    h, w = bits.shape
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr == 0 and dc == 0:
                continue
            total += padded[1 + dr : 1 + dr + h, 1 + dc : 1 + dc + w]
    return total


def apply_lighting_threshold(bmap: BinaryMap, frame: ThermalFrame, lighting_threshold: float) -> BinaryMap:
    """Clear foreground pixels that are colder than the threshold or isolated.

    Isolated means zero foreground 8-neighbors in the input map. Both rules
    are evaluated against the input simultaneously; bits are only cleared.
    """
    if not 0.0 <= lighting_threshold <= 1.0:
        raise ParameterError("lighting_threshold must be in [0,1]")
    if bmap.bits.shape != frame.pixels.shape:
        raise ParameterError("map and frame dimensions differ")
    keep = bmap.bits & (frame.pixels >= lighting_threshold) & (_neighbor_counts(bmap.bits) > 0)
    return BinaryMap(bits=keep)


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Truncated sampled Gaussian, radius ceil(3*sigma), normalized to sum 1."""
    if sigma <= 0:
        raise ParameterError("sigma must be positive")
    radius = math.ceil(3.0 * sigma)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(offsets**2) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def _convolve_axis(values: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    radius = (kernel.size - 1) // 2
    size = values.shape[axis]
    if size == 1:
        return values.copy()  # mirror of a single sample is itself
    pad = [(0, 0), (0, 0)]
    pad[axis] = (radius, radius)
    padded = np.pad(values, pad, mode="reflect")
    out = np.zeros_like(values)
    for t, weight in enumerate(kernel):
        if axis == 0:
            out += weight * padded[t : t + values.shape[0], :]
        else:
            out += weight * padded[:, t : t + values.shape[1]]
    return out


def gaussian_blur_binary(bmap: BinaryMap, sigma: float, rebinarize_at: float = 0.5) -> BinaryMap:
    """Blur the 0/1 field with a separable Gaussian and re-threshold.

    Edges are handled by mirror reflection; the normalized kernel keeps
    constant fields constant, so all-true and all-false maps pass through.
    """
    if not 0.0 < rebinarize_at < 1.0:
        raise ParameterError("rebinarize_at must be in (0,1)")
    kernel = gaussian_kernel(sigma)
    blurred = bmap.bits.astype(np.float64)
    blurred = _convolve_axis(blurred, kernel, axis=0)
    blurred = _convolve_axis(blurred, kernel, axis=1)
    return BinaryMap(bits=blurred >= rebinarize_at)


def apply_mask(bmap: BinaryMap, mask: BinaryMap) -> BinaryMap:
    """Suppress regions that were hot at mask-capture time (map AND NOT mask)."""
    if bmap.bits.shape != mask.bits.shape:
        raise ParameterError("map and mask dimensions differ")
    return BinaryMap(bits=bmap.bits & ~mask.bits)


def segment_unmasked(frame: ThermalFrame, params: Params) -> BinaryMap:
    """Segmentation without mask subtraction; also how the mask itself is built."""
    result = kmeans_intensity(frame, k=params.k)
    bmap = hot_cluster_map(result)
    bmap = apply_lighting_threshold(bmap, frame, params.lighting_threshold)
    return gaussian_blur_binary(bmap, params.blur_sigma)


def segment(frame: ThermalFrame, mask: BinaryMap, params: Params) -> BinaryMap:
    """Full per-frame segmentation: cluster, threshold, blur, subtract mask."""
    return apply_mask(segment_unmasked(frame, params), mask)
