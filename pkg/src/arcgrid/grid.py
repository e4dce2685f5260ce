"""Core grid, selection, and geometry primitives.

A grid is a 2-D ``numpy`` array of color codes 0..9 whose shape is its
active dimension (height, width), both within 1..30. A selection is a
boolean array of the same rank. Color 0 is black and doubles as the
blank/transparent value when patches are composited.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

Grid = np.ndarray  # 2-D int8, values 0..9
Mask = np.ndarray  # 2-D bool

MAX_SIDE = 30
NUM_COLORS = 10

GRID_DTYPE = np.int8

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF


class BBox(NamedTuple):
    """Inclusive 0-based bounding box (top, left, bottom, right)."""

    top: int
    left: int
    bottom: int
    right: int

    @property
    def height(self) -> int:
        return self.bottom - self.top + 1

    @property
    def width(self) -> int:
        return self.right - self.left + 1


def as_grid(cells, *, max_side: int = MAX_SIDE) -> Grid:
    """Build a validated grid from nested lists or an array.

    Raises ValueError on ragged rows, out-of-range colors, or dims
    outside 1..max_side.
    """
    arr = np.asarray(cells)
    if arr.ndim != 2 or arr.dtype == object:
        raise ValueError(f"grid must be a rectangular 2-D array, got shape {arr.shape}")
    h, w = arr.shape
    if not (1 <= h <= max_side and 1 <= w <= max_side):
        raise ValueError(f"grid dims {h}x{w} outside 1..{max_side}")
    if not np.issubdtype(arr.dtype, np.integer):
        if np.issubdtype(arr.dtype, np.floating) and np.all(arr == arr.astype(np.int64)):
            arr = arr.astype(np.int64)
        else:
            raise ValueError(f"grid cells must be integers, got dtype {arr.dtype}")
    if arr.size and (arr.min() < 0 or arr.max() >= NUM_COLORS):
        raise ValueError("grid cells must be colors 0..9")
    return arr.astype(GRID_DTYPE)


def as_mask(mask) -> Mask:
    """Coerce nested lists / 0-1 arrays to a boolean selection mask."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"selection mask must be 2-D, got shape {arr.shape}")
    h, w = arr.shape
    if h > MAX_SIDE or w > MAX_SIDE:
        raise ValueError(f"selection mask dims {h}x{w} exceed {MAX_SIDE}")
    return arr.astype(bool)


def empty_grid() -> Grid:
    """The distinguished 0x0 grid used for an unset clipboard or object."""
    return np.zeros((0, 0), dtype=GRID_DTYPE)


def bounding_box(sel: Mask) -> BBox | None:
    """Minimal bbox covering all set cells, or None for an empty selection."""
    rows = np.flatnonzero(sel.any(axis=1))
    if rows.size == 0:
        return None
    cols = np.flatnonzero(sel.any(axis=0))
    return BBox(int(rows[0]), int(cols[0]), int(rows[-1]), int(cols[-1]))


def overlay(base: Grid, patch: Grid, at: tuple[int, int], patch_mask: Mask | None = None) -> Grid:
    """Composite ``patch`` onto a copy of ``base`` with its top-left at ``at``.

    A patch cell is written only where the mask is set and the cell is
    non-zero (zero is transparent). Patch cells falling outside the base
    are skipped; ``at`` may be negative. ``patch_mask=None`` means all-set.
    """
    out = base.copy()
    ph, pw = patch.shape
    bh, bw = base.shape
    r0, c0 = at
    rs, cs = max(r0, 0), max(c0, 0)
    re, ce = min(r0 + ph, bh), min(c0 + pw, bw)
    if re <= rs or ce <= cs:
        return out
    sub = patch[rs - r0 : re - r0, cs - c0 : ce - c0]
    write = sub != 0
    if patch_mask is not None:
        write &= patch_mask[rs - r0 : re - r0, cs - c0 : ce - c0]
    region = out[rs:re, cs:ce]
    region[write] = sub[write]
    return out


def compare_exact(a: Grid, b: Grid) -> bool:
    """True iff dims and every cell match."""
    return a.shape == b.shape and bool(np.array_equal(a, b))


def mismatch_ratio(g: Grid, ans: Grid) -> float:
    """Fraction of incorrect cells over the max-dims comparison frame.

    A frame cell is incorrect when it lies outside either grid or the two
    values differ, so the ratio is 0 exactly when the grids match.
    """
    gh, gw = g.shape
    ah, aw = ans.shape
    frame = max(gh, ah) * max(gw, aw)
    mh, mw = min(gh, ah), min(gw, aw)
    correct = int(np.count_nonzero(g[:mh, :mw] == ans[:mh, :mw]))
    return (frame - correct) / frame


def grid_digest(g: Grid) -> int:
    """64-bit FNV-1a over (height, width) then row-major cell bytes."""
    h, w = g.shape
    data = bytes((h, w)) + np.ascontiguousarray(g, dtype=np.uint8).tobytes()
    acc = _FNV_OFFSET
    for byte in data:
        acc = ((acc ^ byte) * _FNV_PRIME) & _U64
    return acc


def rect_mask(dims: tuple[int, int], r0: int, c0: int, r1: int, c1: int) -> Mask:
    """Boolean mask over ``dims`` for an inclusive rectangle.

    Corners may be given in any order and may lie outside the grid; the
    rectangle is clipped, and one fully outside yields an empty mask.
    """
    h, w = dims
    rlo, rhi = (r0, r1) if r0 <= r1 else (r1, r0)
    clo, chi = (c0, c1) if c0 <= c1 else (c1, c0)
    mask = np.zeros((h, w), dtype=bool)
    if rlo < 0:
        rlo = 0
    if clo < 0:
        clo = 0
    if rlo <= rhi and clo <= chi and rlo < h and clo < w:
        mask[rlo : rhi + 1, clo : chi + 1] = True
    return mask


def encode_mask_rle(mask: Mask) -> dict:
    """Run-length encode a mask: alternating 0/1 run lengths, zeros first.

    Runs cover the row-major flattening; the first run may be length 0 so
    a mask starting with a set cell round-trips.
    """
    h, w = mask.shape
    flat = mask.ravel().astype(np.int8)
    if flat.size == 0:
        return {"dims": [h, w], "runs": []}
    boundaries = np.flatnonzero(np.diff(flat)) + 1
    runs = np.diff(np.concatenate(([0], boundaries, [flat.size])))
    runs = runs.tolist()
    if flat[0] == 1:
        runs = [0] + runs
    return {"dims": [h, w], "runs": runs}


def decode_mask_rle(doc: dict) -> Mask:
    """Inverse of :func:`encode_mask_rle`; raises ValueError on bad runs."""
    try:
        h, w = (int(v) for v in doc["dims"])
        runs = [int(v) for v in doc["runs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed RLE mask document: {exc}") from exc
    if h < 1 or w < 1 or h > MAX_SIDE or w > MAX_SIDE:
        raise ValueError(f"RLE mask dims {h}x{w} outside 1..{MAX_SIDE}")
    if any(r < 0 for r in runs) or sum(runs) != h * w:
        raise ValueError("RLE runs must be non-negative and sum to height*width")
    flat = np.zeros(h * w, dtype=bool)
    pos = 0
    value = False
    for run in runs:
        if value:
            flat[pos : pos + run] = True
        pos += run
        value = not value
    return flat.reshape(h, w)
