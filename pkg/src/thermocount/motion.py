"""Difference catcher: inter-frame change from two consecutive segmentations."""

from __future__ import annotations

from .errors import ParameterError
from .segmentation import BinaryMap

# A difference map is just a binary map whose bits mark disagreement.
DifferenceMap = BinaryMap


def difference_catcher(prev: BinaryMap, curr: BinaryMap) -> DifferenceMap:
    """Pixel-wise symmetric difference (XOR) of two segmentation maps.

    True bits mark where the maps disagree, which for human-shaped
    foreground corresponds to the leading and trailing edges of movement.
    """
    if prev.bits.shape != curr.bits.shape:
        raise ParameterError("difference inputs have different dimensions")
    return BinaryMap(bits=prev.bits ^ curr.bits)
