"""Episode state: the editable grid, clipboard, and two-layer object record.

EnvState instances are treated as immutable once published: operations
build a new state that shares every array they did not change. Callers
must not write into the arrays they receive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, Mask, empty_grid


@dataclass(slots=True)
class ObjectState:
    """Two-layer record for object-oriented operations.

    While ``active``, the visible grid equals ``background`` with
    ``object`` composited at ``object_pos`` through ``object_sel``; the
    parity bit keeps serial 90-degree rotations of odd-perimeter objects
    consistent. When inactive the layer fields are cleared.
    """

    selected: Mask | None
    active: bool
    object: Grid | None
    object_sel: Mask | None
    object_pos: tuple[int, int]
    rotation_parity: int
    background: Grid | None

    def object_dim(self) -> tuple[int, int]:
        if self.object is None:
            return (0, 0)
        return self.object.shape


# Shared cleared record: non-object operations leave the object layer in
# exactly this state, so they can reuse one instance.
INACTIVE_OBJECT = ObjectState(
    selected=None,
    active=False,
    object=None,
    object_sel=None,
    object_pos=(0, 0),
    rotation_parity=0,
    background=None,
)


@dataclass(slots=True)
class EnvState:
    """Full observable episode state plus the hidden answer.

    Dims are carried by the array shapes; ``clip`` is 0x0 until a copy
    operation populates it. ``answer`` is hidden: it never appears in
    serialized observations unless a session exposes it explicitly.
    """

    input: Grid
    grid: Grid
    clip: Grid
    object_states: ObjectState
    answer: Grid
    terminated: bool
    step_count: int

    @property
    def input_dim(self) -> tuple[int, int]:
        return self.input.shape

    @property
    def grid_dim(self) -> tuple[int, int]:
        return self.grid.shape

    @property
    def clip_dim(self) -> tuple[int, int]:
        return self.clip.shape

    @property
    def answer_dim(self) -> tuple[int, int]:
        return self.answer.shape

    def to_document(self, *, expose_answer: bool = False) -> dict:
        """JSON-safe observation document (hidden fields omitted, not nulled)."""
        obj = self.object_states
        oh, ow = obj.object_dim()
        doc = {
            "input": self.input.tolist(),
            "input_dim": list(self.input_dim),
            "grid": self.grid.tolist(),
            "grid_dim": list(self.grid_dim),
            "clip": self.clip.tolist(),
            "clip_dim": list(self.clip_dim),
            "object_states": {
                "selected": _mask_doc(obj.selected, self.grid_dim),
                "active": obj.active,
                "object": obj.object.tolist() if obj.object is not None else [],
                "object_sel": _mask_doc(obj.object_sel, (oh, ow)) if obj.object_sel is not None else [],
                "object_dim": [oh, ow],
                "object_pos": list(obj.object_pos),
                "rotation_parity": obj.rotation_parity,
                "background": obj.background.tolist() if obj.background is not None else [],
            },
            "terminated": self.terminated,
            "step_count": self.step_count,
        }
        if expose_answer:
            doc["answer"] = self.answer.tolist()
            doc["answer_dim"] = list(self.answer_dim)
        return doc


def _mask_doc(mask: Mask | None, dims: tuple[int, int]) -> list:
    if mask is None:
        return np.zeros(dims, dtype=np.int8).tolist()
    return mask.astype(np.int8).tolist()


def initial_state(input_grid: Grid, answer_grid: Grid) -> EnvState:
    """Fresh episode state: grid starts as a copy of the input."""
    return EnvState(
        input=input_grid,
        grid=input_grid.copy(),
        clip=empty_grid(),
        object_states=INACTIVE_OBJECT,
        answer=answer_grid,
        terminated=False,
        step_count=0,
    )
