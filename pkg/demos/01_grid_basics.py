"""
Grids, selections, and the comparison primitives
================================================

Grids are small numpy int8 arrays of color codes 0..9; their shape is the
active (height, width). Selections are boolean arrays. Everything else in
the package is built from the four primitives shown here.
"""

import numpy as np

from arcgrid import as_grid, bounding_box, compare_exact, mismatch_ratio, overlay

grid = as_grid([
    [0, 0, 3, 0],
    [0, 3, 3, 0],
    [0, 0, 0, 7],
])
print("grid:\n", grid)

# The minimal bounding box of a selection (None when nothing is selected).
sel = grid == 3
print("bbox of the 3s:", bounding_box(sel))
print("bbox of nothing:", bounding_box(np.zeros_like(sel)))

# Compositing: zero-valued patch cells are transparent, out-of-bounds cells
# are clipped, and the base is never modified.
patch = as_grid([[5, 0], [5, 5]])
stamped = overlay(grid, patch, at=(1, 2), patch_mask=None)
print("after overlay at (1, 2):\n", stamped)

# Exact comparison is all-or-nothing; the mismatch ratio counts incorrect
# cells over the max-dims frame, so differing dims are penalized too.
print("exact match:", compare_exact(grid, stamped))
print("mismatch ratio:", mismatch_ratio(grid, stamped))
print("mismatch vs a 2x2 crop:", mismatch_ratio(grid, grid[:2, :2]))
