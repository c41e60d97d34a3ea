"""Connected component labeling against hand-drawn cases and the naive oracle."""

import numpy as np
import pytest

from thermocount.errors import ParameterError
from thermocount.labeling import flood_fill_oracle, label_components
from thermocount.segmentation import BinaryMap


def _grid(rows):
    return BinaryMap(np.array([[c == "#" for c in row] for row in rows]))


def test_empty_and_full():
    empty = label_components(_grid(["....", "...."]), 8)
    assert empty.n_components == 0
    assert not empty.labels.any()

    full = label_components(_grid(["##", "##"]), 4)
    assert full.n_components == 1
    assert full.sizes == [4]
    assert full.bounding_boxes == [(0, 0, 1, 1)]


def test_diagonal_touch_depends_on_connectivity():
    grid = _grid(["#.",
                  ".#"])
    assert label_components(grid, 4).n_components == 2
    assert label_components(grid, 8).n_components == 1


def test_two_blobs_with_sizes_and_boxes():
    grid = _grid(["##..#",
                  "##..#",
                  "....."])
    lm = label_components(grid, 4)
    assert lm.n_components == 2
    assert lm.sizes == [4, 2]
    assert lm.bounding_boxes == [(0, 0, 1, 1), (0, 4, 1, 4)]
    # raster first-touch numbering: left blob is label 1
    assert lm.labels[0, 0] == 1 and lm.labels[0, 4] == 2


def test_u_shape_merges_into_one_component():
    # the two arms only join at the bottom row; second pass must merge them
    grid = _grid(["#.#",
                  "#.#",
                  "###"])
    lm = label_components(grid, 4)
    assert lm.n_components == 1
    assert lm.sizes == [7]


def test_single_pixel_grid():
    lm = label_components(_grid(["#"]), 8)
    assert lm.n_components == 1
    assert lm.sizes == [1]
    assert lm.bounding_boxes == [(0, 0, 0, 0)]


def test_labels_match_oracle_exactly_on_random_grids():
    rng = np.random.default_rng(11)
    for _ in range(300):
        h = int(rng.integers(1, 16))
        w = int(rng.integers(1, 16))
        bits = rng.random((h, w)) < rng.uniform(0.2, 0.8)
        for connectivity in (4, 8):
            ours = label_components(BinaryMap(bits), connectivity)
            ref = flood_fill_oracle(BinaryMap(bits), connectivity)
            assert ours.n_components == ref.n_components
            assert np.array_equal(ours.labels, ref.labels)
            assert ours.sizes == ref.sizes
            assert ours.bounding_boxes == ref.bounding_boxes


def test_rejects_bad_connectivity():
    with pytest.raises(ParameterError):
        label_components(_grid(["#"]), 6)
