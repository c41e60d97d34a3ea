"""Frame differencing."""

import numpy as np
import pytest

from thermocount.errors import ParameterError
from thermocount.motion import difference_catcher
from thermocount.segmentation import BinaryMap


def test_difference_is_symmetric_difference():
    prev = BinaryMap(np.array([[True, True, False, False]]))
    curr = BinaryMap(np.array([[True, False, True, False]]))
    diff = difference_catcher(prev, curr)
    assert diff.bits.tolist() == [[False, True, True, False]]


def test_identical_maps_give_empty_difference():
    rng = np.random.default_rng(0)
    bits = rng.random((6, 7)) < 0.5
    diff = difference_catcher(BinaryMap(bits), BinaryMap(bits.copy()))
    assert not diff.bits.any()


def test_difference_order_independent():
    rng = np.random.default_rng(1)
    a = BinaryMap(rng.random((5, 5)) < 0.5)
    b = BinaryMap(rng.random((5, 5)) < 0.5)
    assert np.array_equal(difference_catcher(a, b).bits, difference_catcher(b, a).bits)


def test_dimension_mismatch_rejected():
    with pytest.raises(ParameterError):
        difference_catcher(BinaryMap(np.zeros((2, 2), dtype=bool)),
                           BinaryMap(np.zeros((2, 3), dtype=bool)))
