"""
A tour of the operation catalogue
=================================

Operations are pure functions (state, selection) -> state. The registry
maps the interactive ids 0..34 (plus the extended 35..38 entries); here we
call a few by name through the dispatch table.
"""

import numpy as np

from arcgrid import OP_CODES, OP_IDS, apply_operation, as_grid
from arcgrid.state import initial_state

state = initial_state(
    as_grid([
        [1, 1, 0, 2],
        [1, 0, 0, 2],
        [0, 0, 2, 2],
    ]),
    as_grid([[0]]),  # answer (unused in this demo)
)

for code in OP_CODES[:3] + OP_CODES[-4:]:
    print(f"op {code.id:>2}  {code.name:<10} [{code.category.value}]")
print(f"... {len(OP_CODES)} operations total\n")

sel = np.zeros((3, 4), dtype=bool)
sel[0, 0] = True

# FloodFill4 recolors the whole 4-connected component under the seed.
filled = apply_operation(state, OP_IDS["FloodFill4"], sel)
print("flood fill 4 from (0,0):\n", filled.grid)

# CopyO lifts the selected bbox into the clipboard; Paste drops it at the
# top-left of the next selection's bbox, zeros staying transparent.
sel_right = np.zeros((3, 4), dtype=bool)
sel_right[:, 3] = True
copied = apply_operation(filled, OP_IDS["CopyO"], sel_right)
print("clipboard:\n", copied.clip)

target = np.zeros((3, 4), dtype=bool)
target[1, 0] = True
pasted = apply_operation(copied, OP_IDS["Paste"], target)
print("after paste at (1,0):\n", pasted.grid)

# CropGrid makes the selection bbox the whole grid.
cropped = apply_operation(pasted, OP_IDS["CropGrid"], pasted.grid == 2)
print("cropped to the 2s:\n", cropped.grid)
