"""Area band-pass over labeled components."""

import numpy as np
import pytest

from thermocount.errors import ParameterError
from thermocount.filtering import band_kept_labels, noise_filter
from thermocount.labeling import label_components
from thermocount.segmentation import BinaryMap


def _labeled(rows):
    bits = np.array([[c == "#" for c in row] for row in rows])
    return label_components(BinaryMap(bits), 4)


def test_band_is_inclusive_both_ends():
    # components of sizes 1, 2, 3 left to right
    lm = _labeled(["#.##.###"])
    assert lm.sizes == [1, 2, 3]
    decision = noise_filter(lm, 1, 3)
    assert decision.kept_labels == [1, 2, 3]
    assert noise_filter(lm, 2, 2).kept_labels == [2]
    assert noise_filter(lm, 2, 3).raw_count == 2
    assert noise_filter(lm, 4, 10).raw_count == 0


def test_band_kept_labels_shares_the_rule():
    assert band_kept_labels([5, 1, 9], 2, 8) == [1]
    assert band_kept_labels([], 0, 10) == []


def test_invalid_bounds():
    lm = _labeled(["#"])
    with pytest.raises(ParameterError):
        noise_filter(lm, -1, 5)
    with pytest.raises(ParameterError):
        noise_filter(lm, 7, 3)
