import numpy as np
import pytest

from arcgrid import OP_CODES, OP_IDS, apply_operation, grid_digest, op_code
from arcgrid.errors import IllegalOp
from arcgrid.ops import (
    OpCategory,
    color,
    copy_input,
    copy_selection,
    crop_grid,
    flood_fill,
    paste,
    reset_grid,
    resize_grid,
    submit,
)
from arcgrid.state import initial_state

from conftest import mk, mkmask, random_grid, random_mask


def st(grid, answer=None):
    return initial_state(mk(grid), mk(answer if answer is not None else [[0]]))


ANS = [[0]]


# -- registry mapping -----------------------------------------------------------

def test_o2arc_operation_indices():
    names = [c.name for c in OP_CODES]
    assert names[:10] == [f"Color{i}" for i in range(10)]
    assert names[10:20] == [f"FloodFill{i}" for i in range(10)]
    assert names[20:24] == ["MoveU", "MoveD", "MoveR", "MoveL"]
    assert names[24:26] == ["Rotate90", "Rotate270"]  # ccw, cw
    assert names[26:28] == ["FlipH", "FlipV"]
    assert names[28:31] == ["CopyI", "CopyO", "Paste"]
    assert names[31:35] == ["CopyInput", "ResetGrid", "ResizeGrid", "Submit"]
    assert set(names[35:]) == {"Rotate180", "FlipD0", "FlipD1", "CropGrid"}


def test_categories():
    assert op_code(OP_IDS["Color3"]).category == OpCategory.COLORING
    assert op_code(OP_IDS["FloodFill0"]).category == OpCategory.FLOOD_FILL
    assert op_code(OP_IDS["MoveU"]).category == OpCategory.OBJECT
    assert op_code(OP_IDS["Rotate270"]).category == OpCategory.OBJECT
    assert op_code(OP_IDS["Paste"]).category == OpCategory.CLIPBOARD
    assert op_code(OP_IDS["CropGrid"]).category == OpCategory.CRITICAL
    with pytest.raises(IllegalOp):
        op_code(99)
    with pytest.raises(IllegalOp):
        apply_operation(st([[1]]), 99, None)


# -- coloring -------------------------------------------------------------------

def test_color_single_cell():
    out = color(st([[1, 2], [3, 4]]), mkmask([[1, 0], [0, 0]]), 0)
    assert out.grid.tolist() == [[0, 2], [3, 4]]


def test_color_all_set():
    out = color(st([[1, 2], [3, 4]]), np.ones((2, 2), bool), 7)
    assert out.grid.tolist() == [[7, 7], [7, 7]]


def test_color_empty_selection_is_noop():
    s = st([[1, 2], [3, 4]])
    out = color(s, np.zeros((2, 2), bool), 5)
    assert out.grid.tolist() == [[1, 2], [3, 4]]
    out = color(s, None, 5)
    assert out.grid.tolist() == [[1, 2], [3, 4]]


def test_color_does_not_mutate_input_state():
    s = st([[1, 2], [3, 4]])
    before = grid_digest(s.grid)
    color(s, np.ones((2, 2), bool), 9)
    assert grid_digest(s.grid) == before


# -- flood fill -------------------------------------------------------------------

def flood_oracle(grid, seeds, value):
    """Independent oracle: scipy connected-component labeling, 4-connectivity."""
    from scipy import ndimage

    structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    out = grid.copy()
    for r, c in seeds:
        labels, _ = ndimage.label(grid == grid[r, c], structure=structure)
        out[labels == labels[r, c]] = value
    return out


def test_flood_fill_component():
    out = flood_fill(st([[1, 1], [1, 2]]), mkmask([[1, 0], [0, 0]]), 3)
    assert out.grid.tolist() == [[3, 3], [3, 2]]


def test_flood_fill_same_color_unchanged():
    out = flood_fill(st([[5, 5], [5, 0]]), mkmask([[1, 0], [0, 0]]), 5)
    assert out.grid.tolist() == [[5, 5], [5, 0]]


def test_flood_fill_diagonal_not_connected():
    out = flood_fill(st([[1, 0], [0, 1]]), mkmask([[1, 0], [0, 0]]), 2)
    assert out.grid.tolist() == [[2, 0], [0, 1]]


def test_flood_fill_matches_scipy_oracle(rng):
    for _ in range(200):
        h, w = int(rng.integers(1, 10)), int(rng.integers(1, 10))
        g = random_grid(rng, h, w, colors=4)
        m = random_mask(rng, h, w, p=0.2)
        value = int(rng.integers(10))
        out = flood_fill(st(g.tolist()), m, value)
        assert out.grid.tolist() == flood_oracle(g, np.argwhere(m), value).tolist()


def test_flood_fill_seed_order_independent(rng):
    g = random_grid(rng, 6, 6, colors=3)
    m = random_mask(rng, 6, 6, p=0.4)
    base = flood_fill(st(g.tolist()), m, 7).grid
    # feeding seeds one at a time against the same pre-image must agree
    out = g.copy()
    order = np.argwhere(m)
    rng.shuffle(order)
    oracle = flood_oracle(g, order, 7)
    assert base.tolist() == oracle.tolist()


# -- clipboard ---------------------------------------------------------------------

def test_copy_grid_column():
    out = copy_selection(st([[1, 2], [3, 4]]), mkmask([[0, 1], [0, 1]]), "grid")
    assert out.clip.tolist() == [[2], [4]]
    assert out.clip_dim == (2, 1)


def test_copy_input_all_set():
    s = st([[1, 2], [3, 4]])
    s = color(s, np.ones((2, 2), bool), 9)  # edit the grid first
    out = copy_selection(s, np.ones((2, 2), bool), "input")
    assert out.clip.tolist() == [[1, 2], [3, 4]]


def test_copy_input_reads_the_input_frame_after_crop():
    s = st([[1, 2], [3, 4]])
    s = crop_grid(s, mkmask([[1, 0], [0, 0]]))  # grid is now 1x1
    out = copy_selection(s, np.ones((2, 2), bool), "input")
    assert out.clip.tolist() == [[1, 2], [3, 4]]
    # a grid-dims selection still works, restricted to the overlap
    out = copy_selection(s, np.ones((1, 1), bool), "input")
    assert out.clip.tolist() == [[1]]


def test_copy_empty_selection_keeps_clip():
    s = copy_selection(st([[1, 2], [3, 4]]), mkmask([[0, 1], [0, 1]]), "grid")
    out = copy_selection(s, np.zeros((2, 2), bool), "grid")
    assert out.clip.tolist() == s.clip.tolist()


def test_copy_unselected_cells_in_bbox_are_zero():
    out = copy_selection(st([[1, 2], [3, 4]]), mkmask([[1, 0], [0, 1]]), "grid")
    assert out.clip.tolist() == [[1, 0], [0, 4]]


def test_paste_at_bbox_top_left():
    s = st([[1, 2], [3, 4]])
    s = copy_selection(s, mkmask([[0, 0], [0, 1]]), "grid")  # clip = [[4]]
    out = paste(s, mkmask([[1, 0], [0, 0]]))
    assert out.grid.tolist() == [[4, 2], [3, 4]]


def test_paste_clips_beyond_grid():
    s = st([[5, 5], [0, 0]])
    s = copy_selection(s, mkmask([[1, 1], [0, 0]]), "grid")  # clip = [[5, 5]]
    s = reset_grid(s)
    out = paste(s, mkmask([[0, 1], [0, 0]]))  # bbox top-left (0, 1), (0, 2) clipped
    assert out.grid.tolist() == [[0, 5], [0, 0]]


def test_paste_zero_clip_is_transparent():
    s = st([[0, 3], [3, 3]])
    s = copy_selection(s, mkmask([[1, 0], [0, 0]]), "grid")  # clip = [[0]]
    out = paste(s, mkmask([[0, 0], [0, 1]]))
    assert out.grid.tolist() == [[0, 3], [3, 3]]


def test_paste_without_clip_is_noop():
    out = paste(st([[1, 2], [3, 4]]), np.ones((2, 2), bool))
    assert out.grid.tolist() == [[1, 2], [3, 4]]


# -- critical -----------------------------------------------------------------------

def test_copy_input_restores_and_resizes():
    s = st([[1, 2, 3], [4, 5, 6]])
    s = crop_grid(s, mkmask([[1, 0, 0], [0, 0, 0]]))
    assert s.grid_dim == (1, 1)
    out = copy_input(s)
    assert out.grid.tolist() == s.input.tolist()
    assert out.grid_dim == (2, 3)
    again = copy_input(out)
    assert again.grid.tolist() == out.grid.tolist()


def test_reset_grid_zeroes_keeps_dims():
    s = st([[1, 2], [3, 4]])
    out = reset_grid(s)
    assert out.grid.tolist() == [[0, 0], [0, 0]]
    assert reset_grid(out).grid.tolist() == out.grid.tolist()


def test_resize_from_selection_bottom_right():
    s = st([[1] * 5] * 5)
    m = np.zeros((5, 5), bool)
    m[2, 3] = True
    out = resize_grid(s, m)
    assert out.grid_dim == (3, 4)
    assert out.grid.tolist() == [[1, 1, 1, 1]] * 3


def test_resize_shrink_preserves_top_left():
    s = st([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    m = np.zeros((3, 3), bool)
    m[1, 1] = True
    out = resize_grid(s, m)
    assert out.grid.tolist() == [[1, 2], [4, 5]]


def test_resize_grow_fills_black():
    s = st([[1, 2], [3, 4]])
    m = np.zeros((4, 4), bool)  # mask frame larger than the grid
    m[3, 3] = True
    out = resize_grid(s, m)
    assert out.grid.tolist() == [
        [1, 2, 0, 0],
        [3, 4, 0, 0],
        [0, 0, 0, 0],
        [0, 0, 0, 0],
    ]


def test_resize_to_same_dims_is_identity():
    s = st([[1, 2], [3, 4]])
    m = np.zeros((2, 2), bool)
    m[1, 1] = True
    assert resize_grid(s, m).grid.tolist() == [[1, 2], [3, 4]]


def test_resize_empty_selection_is_noop():
    s = st([[1, 2], [3, 4]])
    assert resize_grid(s, np.zeros((2, 2), bool)).grid.tolist() == [[1, 2], [3, 4]]


def test_crop_grid():
    s = st([[1, 2], [3, 4]])
    out = crop_grid(s, mkmask([[0, 0], [1, 1]]))
    assert out.grid.tolist() == [[3, 4]]
    assert out.grid_dim == (1, 2)


def test_crop_all_set_is_identity():
    s = st([[1, 2], [3, 4]])
    assert crop_grid(s, np.ones((2, 2), bool)).grid.tolist() == [[1, 2], [3, 4]]


def test_crop_single_cell():
    s = st([[1, 2], [3, 4]])
    assert crop_grid(s, mkmask([[0, 0], [0, 1]])).grid.tolist() == [[4]]


def test_submit_marks_terminated_only():
    s = st([[1, 2], [3, 4]])
    out = submit(s)
    assert out.terminated
    assert out.grid.tolist() == s.grid.tolist()
    assert not s.terminated


# -- whole-catalogue properties -------------------------------------------------------

def test_every_non_object_op_deactivates_the_object(rng):
    from arcgrid.ops import OP_CODES, OpCategory, move

    active = move(st([[1, 2], [3, 4]]), mkmask([[1, 0], [0, 0]]), "R")
    assert active.object_states.active
    sel = mkmask([[1, 0], [0, 1]])
    for code in OP_CODES:
        out = apply_operation(active, code.id, sel)
        if code.category == OpCategory.OBJECT:
            assert out.object_states.active, code.name
        else:
            assert not out.object_states.active, code.name


def test_every_op_preserves_bounds(rng):
    from arcgrid.ops import OP_CODES

    for _ in range(30):
        h, w = int(rng.integers(1, 11)), int(rng.integers(1, 11))
        s = initial_state(random_grid(rng, h, w), mk([[0]]))
        sel = random_mask(rng, h, w, p=0.3)
        for code in OP_CODES:
            out = apply_operation(s, code.id, sel)
            gh, gw = out.grid.shape
            assert 1 <= gh <= 30 and 1 <= gw <= 30, code.name
            assert out.grid.min() >= 0 and out.grid.max() <= 9, code.name
