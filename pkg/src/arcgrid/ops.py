"""The grid-editing operation catalogue.

Every operation is a pure function ``(state, selection) -> new state``:
inputs are never mutated, and unchanged arrays are shared between the old
and new state. Selections may carry any dims up to 30x30; each operation
intersects the mask with the frame it reads (the editable grid for most,
the task input for CopyI), except ResizeGrid, which reads the raw mask
bbox so a selection larger than the grid can grow it.

Object-oriented operations (Move, Rotate, Flip) run through a two-layer
mechanism: on activation the selected pixels are lifted into an object
layer over a zeroed background, later geometric steps with an empty
selection keep editing that object, and any non-object operation commits
the composited grid and clears the layer. Zero-valued object pixels are
transparent, so overlapped background pixels reappear when an object
moves off them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import IllegalOp
from .grid import GRID_DTYPE, Grid, Mask, bounding_box, overlay
from .state import INACTIVE_OBJECT, EnvState, ObjectState


class OpCategory(str, Enum):
    COLORING = "Coloring"
    FLOOD_FILL = "FloodFill"
    OBJECT = "ObjectOriented"
    CLIPBOARD = "Clipboard"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class OpCode:
    id: int
    name: str
    category: OpCategory


def _mask_on(sel: Mask | None, shape: tuple[int, int]) -> Mask | None:
    """Restrict a selection to a target frame; None stands for empty."""
    if sel is None:
        return None
    if sel.shape == shape:
        return sel
    out = np.zeros(shape, dtype=bool)
    mh = min(sel.shape[0], shape[0])
    mw = min(sel.shape[1], shape[1])
    out[:mh, :mw] = sel[:mh, :mw]
    return out


def _shell(state: EnvState) -> EnvState:
    """Fresh state object with identical content (safe to tag a step on)."""
    return EnvState(
        state.input, state.grid, state.clip, state.object_states,
        state.answer, state.terminated, state.step_count,
    )


def _committed(state: EnvState, *, grid: Grid | None = None, clip: Grid | None = None) -> EnvState:
    """Successor state after a non-object operation: object layer cleared."""
    return EnvState(
        state.input,
        state.grid if grid is None else grid,
        state.clip if clip is None else clip,
        INACTIVE_OBJECT,
        state.answer,
        state.terminated,
        state.step_count,
    )


# -- Coloring / flood fill ---------------------------------------------------

def _make_color(value: int):
    # The hottest operation: one flat closure, no helper calls.
    def apply_color(state: EnvState, sel: Mask | None) -> EnvState:
        grid = state.grid
        if sel is not None:
            if sel.shape != grid.shape:
                m = np.zeros(grid.shape, dtype=bool)
                mh = min(sel.shape[0], grid.shape[0])
                mw = min(sel.shape[1], grid.shape[1])
                m[:mh, :mw] = sel[:mh, :mw]
                sel = m
            grid = grid.copy()
            np.putmask(grid, sel, value)
        return EnvState(
            state.input, grid, state.clip, INACTIVE_OBJECT,
            state.answer, state.terminated, state.step_count,
        )

    return apply_color


_COLOR_FNS = tuple(_make_color(v) for v in range(10))


def color(state: EnvState, sel: Mask | None, value: int) -> EnvState:
    """Set every selected grid cell to ``value``; empty selection is a no-op."""
    return _COLOR_FNS[value](state, sel)


def flood_fill(state: EnvState, sel: Mask | None, value: int) -> EnvState:
    """Recolor, for each selected seed, its 4-connected same-color region.

    Regions are found on the pre-operation grid and written jointly, so
    the result does not depend on seed order.
    """
    m = _mask_on(sel, state.grid.shape)
    if m is None:
        return _committed(state)
    seeds = np.argwhere(m)
    if seeds.size == 0:
        return _committed(state)
    orig = state.grid
    out = orig.copy()
    h, w = orig.shape
    visited = np.zeros((h, w), dtype=bool)
    for r0, c0 in seeds:
        if visited[r0, c0]:
            continue
        target = orig[r0, c0]
        stack = [(int(r0), int(c0))]
        visited[r0, c0] = True
        while stack:
            r, c = stack.pop()
            out[r, c] = value
            if r > 0 and not visited[r - 1, c] and orig[r - 1, c] == target:
                visited[r - 1, c] = True
                stack.append((r - 1, c))
            if r + 1 < h and not visited[r + 1, c] and orig[r + 1, c] == target:
                visited[r + 1, c] = True
                stack.append((r + 1, c))
            if c > 0 and not visited[r, c - 1] and orig[r, c - 1] == target:
                visited[r, c - 1] = True
                stack.append((r, c - 1))
            if c + 1 < w and not visited[r, c + 1] and orig[r, c + 1] == target:
                visited[r, c + 1] = True
                stack.append((r, c + 1))
    return _committed(state, grid=out)


# -- Two-layer object mechanism ----------------------------------------------

def _activate(state: EnvState, sel: Mask | None) -> ObjectState | None:
    """Begin or continue an object edit.

    A non-empty selection always lifts a fresh object from the current
    grid; an empty one continues the active object, or yields None (the
    caller no-ops) when nothing is active.
    """
    m = _mask_on(sel, state.grid.shape)
    if m is None or not m.any():
        return state.object_states if state.object_states.active else None
    bb = bounding_box(m)
    grid = state.grid
    patch = grid[bb.top : bb.bottom + 1, bb.left : bb.right + 1].copy()
    osel = m[bb.top : bb.bottom + 1, bb.left : bb.right + 1].copy()
    patch[~osel] = 0
    background = grid.copy()
    background[m] = 0
    return ObjectState(
        selected=m.copy(),
        active=True,
        object=patch,
        object_sel=osel,
        object_pos=(bb.top, bb.left),
        rotation_parity=0,
        background=background,
    )


def _render(state: EnvState, obj: ObjectState) -> EnvState:
    grid = overlay(obj.background, obj.object, obj.object_pos, obj.object_sel)
    return EnvState(
        state.input, grid, state.clip, obj,
        state.answer, state.terminated, state.step_count,
    )


def _swapped_pos(pos: tuple[int, int], shape: tuple[int, int], parity: int):
    """Top-left after a height/width swap that keeps the bbox center fixed.

    With odd height+width the center lands between cells; the parity bit
    alternates floor/ceil rounding so two 90-degree turns compose into an
    exact 180-degree turn.
    """
    r, c = pos
    h, w = shape
    dr = h - w
    num_r = 2 * r + dr
    num_c = 2 * c - dr
    if dr % 2 == 0:
        return (num_r // 2, num_c // 2), parity
    if parity == 0:
        return (num_r // 2, num_c // 2), 1
    return ((num_r + 1) // 2, (num_c + 1) // 2), 0


_DIRECTIONS = {"U": (-1, 0), "D": (1, 0), "R": (0, 1), "L": (0, -1)}


def move(state: EnvState, sel: Mask | None, direction: str) -> EnvState:
    """Shift the selected object one cell; only object_pos changes."""
    obj = _activate(state, sel)
    if obj is None:
        return _shell(state)
    dr, dc = _DIRECTIONS[direction]
    moved = ObjectState(
        obj.selected, True, obj.object, obj.object_sel,
        (obj.object_pos[0] + dr, obj.object_pos[1] + dc),
        obj.rotation_parity, obj.background,
    )
    return _render(state, moved)


def rotate(state: EnvState, sel: Mask | None, angle: int) -> EnvState:
    """Rotate the selected object counterclockwise by 90, 180, or 270."""
    k = {90: 1, 180: 2, 270: 3}[angle]
    obj = _activate(state, sel)
    if obj is None:
        return _shell(state)
    patch = np.ascontiguousarray(np.rot90(obj.object, k))
    osel = np.ascontiguousarray(np.rot90(obj.object_sel, k))
    if k == 2:
        pos, parity = obj.object_pos, obj.rotation_parity
    else:
        pos, parity = _swapped_pos(obj.object_pos, obj.object.shape, obj.rotation_parity)
    turned = ObjectState(obj.selected, True, patch, osel, pos, parity, obj.background)
    return _render(state, turned)


def flip(state: EnvState, sel: Mask | None, axis: str) -> EnvState:
    """Mirror the selected object: H left-right, V up-down, D0/D1 diagonals."""
    obj = _activate(state, sel)
    if obj is None:
        return _shell(state)
    pos, parity = obj.object_pos, obj.rotation_parity
    if axis == "H":
        patch = np.ascontiguousarray(np.fliplr(obj.object))
        osel = np.ascontiguousarray(np.fliplr(obj.object_sel))
    elif axis == "V":
        patch = np.ascontiguousarray(np.flipud(obj.object))
        osel = np.ascontiguousarray(np.flipud(obj.object_sel))
    elif axis == "D0":
        patch = np.ascontiguousarray(obj.object.T)
        osel = np.ascontiguousarray(obj.object_sel.T)
        pos, parity = _swapped_pos(pos, obj.object.shape, parity)
    elif axis == "D1":
        patch = np.ascontiguousarray(np.rot90(obj.object, 2).T)
        osel = np.ascontiguousarray(np.rot90(obj.object_sel, 2).T)
        pos, parity = _swapped_pos(pos, obj.object.shape, parity)
    else:
        raise ValueError(f"unknown flip axis {axis!r}")
    mirrored = ObjectState(obj.selected, True, patch, osel, pos, parity, obj.background)
    return _render(state, mirrored)


# -- Clipboard ----------------------------------------------------------------

def copy_selection(state: EnvState, sel: Mask | None, source: str) -> EnvState:
    """Copy the selected bbox patch of the input ('input') or grid ('grid')."""
    src = state.input if source == "input" else state.grid
    m = _mask_on(sel, src.shape)
    bb = bounding_box(m) if m is not None else None
    if bb is None:
        return _committed(state)
    patch = src[bb.top : bb.bottom + 1, bb.left : bb.right + 1].copy()
    patch[~m[bb.top : bb.bottom + 1, bb.left : bb.right + 1]] = 0
    return _committed(state, clip=patch)


def paste(state: EnvState, sel: Mask | None) -> EnvState:
    """Overlay the clipboard at the selection bbox top-left; zeros transparent."""
    if state.clip.size == 0:
        return _committed(state)
    m = _mask_on(sel, state.grid.shape)
    bb = bounding_box(m) if m is not None else None
    if bb is None:
        return _committed(state)
    grid = overlay(state.grid, state.clip, (bb.top, bb.left))
    return _committed(state, grid=grid)


# -- Critical -----------------------------------------------------------------

def copy_input(state: EnvState, sel: Mask | None = None) -> EnvState:
    """Replace the grid (and its dims) with the task input."""
    return _committed(state, grid=state.input.copy())


def reset_grid(state: EnvState, sel: Mask | None = None) -> EnvState:
    """Clear every grid cell to black; dims unchanged."""
    return _committed(state, grid=np.zeros_like(state.grid))


def resize_grid(state: EnvState, sel: Mask | None) -> EnvState:
    """Set grid dims from the selection bbox bottom-right (inclusive).

    Uses the raw mask frame, so a mask larger than the grid can grow it;
    exposed cells are filled with 0 and truncated cells are dropped.
    """
    bb = bounding_box(sel) if sel is not None else None
    if bb is None:
        return _committed(state)
    nh, nw = bb.bottom + 1, bb.right + 1
    old = state.grid
    if (nh, nw) == old.shape:
        return _committed(state, grid=old.copy())
    new = np.zeros((nh, nw), dtype=GRID_DTYPE)
    mh = min(old.shape[0], nh)
    mw = min(old.shape[1], nw)
    new[:mh, :mw] = old[:mh, :mw]
    return _committed(state, grid=new)


def crop_grid(state: EnvState, sel: Mask | None) -> EnvState:
    """Make the selection bbox the whole grid; unselected cells become 0."""
    m = _mask_on(sel, state.grid.shape)
    bb = bounding_box(m) if m is not None else None
    if bb is None:
        return _committed(state)
    patch = state.grid[bb.top : bb.bottom + 1, bb.left : bb.right + 1].copy()
    patch[~m[bb.top : bb.bottom + 1, bb.left : bb.right + 1]] = 0
    return _committed(state, grid=patch)


def submit(state: EnvState, sel: Mask | None = None) -> EnvState:
    """Mark the episode terminated; reward evaluation is the runtime's job."""
    return EnvState(
        state.input, state.grid, state.clip, INACTIVE_OBJECT,
        state.answer, True, state.step_count,
    )


# -- Registry -----------------------------------------------------------------
#
# Ids 0..34 are the standard interactive mapping: 0-9 Color, 10-19
# FloodFill, 20-23 Move U/D/R/L, 24 Rotate90 (ccw), 25 Rotate270 (one
# clockwise turn), 26-27 FlipH/FlipV, 28-30 CopyI/CopyO/Paste, 31-34
# CopyInput/ResetGrid/ResizeGrid/Submit. The remaining catalogue entries
# (Rotate180, FlipD0, FlipD1, CropGrid) take stable ids 35-38.

def _build_registry():
    codes: list[OpCode] = []
    funcs: list = []

    def add(name, category, fn):
        codes.append(OpCode(len(codes), name, category))
        funcs.append(fn)

    def fill_fn(value):
        return lambda state, sel: flood_fill(state, sel, value)

    for v in range(10):
        add(f"Color{v}", OpCategory.COLORING, _COLOR_FNS[v])
    for v in range(10):
        add(f"FloodFill{v}", OpCategory.FLOOD_FILL, fill_fn(v))
    for d in "UDRL":
        add(f"Move{d}", OpCategory.OBJECT, (lambda dd: lambda state, sel: move(state, sel, dd))(d))
    add("Rotate90", OpCategory.OBJECT, lambda state, sel: rotate(state, sel, 90))
    add("Rotate270", OpCategory.OBJECT, lambda state, sel: rotate(state, sel, 270))
    add("FlipH", OpCategory.OBJECT, lambda state, sel: flip(state, sel, "H"))
    add("FlipV", OpCategory.OBJECT, lambda state, sel: flip(state, sel, "V"))
    add("CopyI", OpCategory.CLIPBOARD, lambda state, sel: copy_selection(state, sel, "input"))
    add("CopyO", OpCategory.CLIPBOARD, lambda state, sel: copy_selection(state, sel, "grid"))
    add("Paste", OpCategory.CLIPBOARD, paste)
    add("CopyInput", OpCategory.CRITICAL, copy_input)
    add("ResetGrid", OpCategory.CRITICAL, reset_grid)
    add("ResizeGrid", OpCategory.CRITICAL, resize_grid)
    add("Submit", OpCategory.CRITICAL, submit)
    add("Rotate180", OpCategory.OBJECT, lambda state, sel: rotate(state, sel, 180))
    add("FlipD0", OpCategory.OBJECT, lambda state, sel: flip(state, sel, "D0"))
    add("FlipD1", OpCategory.OBJECT, lambda state, sel: flip(state, sel, "D1"))
    add("CropGrid", OpCategory.CRITICAL, crop_grid)
    return tuple(codes), tuple(funcs)


OP_CODES, _APPLY = _build_registry()
OP_IDS = {code.name: code.id for code in OP_CODES}
NUM_OPS = len(OP_CODES)

SUBMIT = OP_IDS["Submit"]


def op_code(op_id: int) -> OpCode:
    if not 0 <= op_id < NUM_OPS:
        raise IllegalOp(f"unknown operation id {op_id}")
    return OP_CODES[op_id]


def apply_operation(state: EnvState, op_id: int, sel: Mask | None) -> EnvState:
    """Dispatch an operation by id; raises IllegalOp for unknown ids."""
    if not 0 <= op_id < NUM_OPS:
        raise IllegalOp(f"unknown operation id {op_id}")
    return _APPLY[op_id](state, sel)
