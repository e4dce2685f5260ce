"""Episode runtime: reset/step loop, rewards, presets, and action wrappers.

The environment is a single-writer state machine over the pure operation
catalogue. Rewards follow two modes: sparse grants 1 only on a Submit
whose grid matches the answer exactly, dense additionally penalizes every
non-submit step by the fraction of incorrect pixels of the next state.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyTask, EpisodeOver, IllegalOp
from .grid import Mask, compare_exact, mismatch_ratio
from .ops import NUM_OPS, OP_IDS, SUBMIT, _APPLY
from .state import EnvState, initial_state


@dataclass(slots=True)
class Action:
    """One step: an operation id plus a selection mask (None = empty)."""

    operation: int
    selection: Optional[Mask] = None


@dataclass(slots=True)
class StepResult:
    observation: EnvState
    reward: float
    terminated: bool
    truncated: bool
    info: dict


@dataclass(frozen=True)
class EnvPreset:
    """Named environment configuration: allowed ops, horizon, reward mode."""

    name: str
    allowed_ops: tuple[int, ...]
    max_steps: int = 100
    reward_mode: str = "sparse"  # "sparse" | "dense"
    expose_answer: bool = False

    def with_overrides(self, **kw) -> "EnvPreset":
        return replace(self, **kw)


_PRESET_OPS = {
    # The full interactive mapping, ids 0..34.
    "o2arc": tuple(range(35)),
    # Testing-interface style: coloring, flood fill, and the critical ops.
    "arc": tuple(range(20)) + (
        OP_IDS["CopyInput"], OP_IDS["ResetGrid"], OP_IDS["ResizeGrid"],
        OP_IDS["Submit"], OP_IDS["CropGrid"],
    ),
    # Minimal: every coloring op plus ResizeGrid and Submit.
    "raw": tuple(range(10)) + (OP_IDS["ResizeGrid"], OP_IDS["Submit"]),
    # Whole catalogue, including the ops outside the 0..34 block.
    "full": tuple(range(NUM_OPS)),
}


def get_preset(name: str, **overrides) -> EnvPreset:
    """Look up a named preset; keyword overrides customize it."""
    try:
        ops = _PRESET_OPS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(_PRESET_OPS)}") from None
    return EnvPreset(name=name, allowed_ops=ops).with_overrides(**overrides)


PRESET_NAMES = tuple(sorted(_PRESET_OPS))


class Environment:
    """Single-episode-at-a-time environment over a task.

    reset() starts an episode from the task's test pair, or from a
    demonstration pair in adaptation mode; step() applies one action and
    returns the successor observation with reward and episode flags.
    ``state`` and ``truncated`` are read-only by convention.
    """

    def __init__(self, preset: EnvPreset | None = None, task=None):
        self.preset = preset if preset is not None else get_preset("o2arc")
        self._allowed = frozenset(self.preset.allowed_ops)
        self._dense = self.preset.reward_mode == "dense"
        self._max_steps = self.preset.max_steps
        self.task = task
        self.state: EnvState | None = None
        self.truncated = False

    def reset(self, task=None, *, adaptation: bool = False,
              pair_index: int | None = None, seed: int | None = None) -> EnvState:
        """Start a new episode; returns the initial state.

        adaptation picks a demonstration pair (by pair_index, else
        uniformly under seed); otherwise the test pair is used. The grid
        starts as a copy of the chosen input.
        """
        if task is not None:
            self.task = task
        task = self.task
        if task is None:
            raise EmptyTask("no task assigned to the environment")
        if not task.test_pairs:
            raise EmptyTask(f"task {task.id!r} has no test pairs")
        if adaptation:
            pairs = task.demo_pairs
            if not pairs:
                raise EmptyTask(f"task {task.id!r} has no demonstration pairs")
        else:
            pairs = task.test_pairs
        if pair_index is None:
            if adaptation and len(pairs) > 1:
                pair_index = int(np.random.default_rng(seed).integers(len(pairs)))
            else:
                pair_index = 0
        if not 0 <= pair_index < len(pairs):
            raise ValueError(
                f"pair_index {pair_index} out of range for {len(pairs)} "
                f"{'demonstration' if adaptation else 'test'} pairs"
            )
        inp, out = pairs[pair_index]
        self.state = initial_state(inp, out)
        self.truncated = False
        return self.state

    def step(self, action: Action) -> StepResult:
        return self.step_op(action.operation, action.selection)

    def step_op(self, op: int, sel: Mask | None) -> StepResult:
        """step() without the Action envelope; the envelope adds nothing here."""
        state = self.state
        if state is None:
            raise EpisodeOver("reset() must be called before step()")
        if state.terminated or self.truncated:
            raise EpisodeOver("episode is over; call reset()")
        if op not in self._allowed:
            if isinstance(op, int) and 0 <= op < NUM_OPS:
                raise IllegalOp(f"operation {op} not allowed by preset {self.preset.name!r}")
            raise IllegalOp(f"unknown operation id {op}")
        if sel is not None:
            if sel.dtype != np.bool_:
                sel = sel.astype(bool)
            if sel.shape[0] > 30 or sel.shape[1] > 30:
                raise ValueError(f"selection mask dims {sel.shape} exceed 30x30")
        new = _APPLY[op](state, sel)
        new.step_count = state.step_count + 1
        truncated = new.step_count >= self._max_steps
        if op == SUBMIT:
            exact = compare_exact(new.grid, new.answer)
            reward = 1.0 if exact else 0.0
            info = {"exact_match": exact}
        elif self._dense:
            reward = -mismatch_ratio(new.grid, new.answer)
            info = {}
        else:
            reward = 0.0
            info = {}
        self.state = new
        self.truncated = truncated
        return StepResult(new, reward, new.terminated, truncated, info)


BBoxAction = tuple[int, int, int, int, int]  # (r0, c0, r1, c1, operation)


def sample_bbox_action(rng: np.random.Generator, dims: tuple[int, int],
                       allowed_ops: Sequence[int]) -> BBoxAction:
    """Uniform random 5-tuple action over a grid of the given dims."""
    h, w = dims
    r0, r1 = (int(v) for v in rng.integers(0, h, size=2))
    c0, c1 = (int(v) for v in rng.integers(0, w, size=2))
    op = allowed_ops[int(rng.integers(len(allowed_ops)))]
    return (r0, c0, r1, c1, op)


class BBoxWrapper:
    """Accepts (r0, c0, r1, c1, op) tuples instead of raw mask actions.

    The rectangle is corner-normalized and clipped to the current grid
    dims; one fully outside materializes an empty selection. Mask actions
    pass through untouched, so wrapped and raw usage can be mixed.
    """

    def __init__(self, env):
        self.env = env
        # Environment exposes the fast no-envelope entry; other wrappers may not.
        self._step_op = getattr(env, "step_op", None)

    @property
    def preset(self):
        return self.env.preset

    @property
    def state(self):
        return self.env.state

    @property
    def truncated(self):
        return self.env.truncated

    @property
    def task(self):
        return self.env.task

    def reset(self, *args, **kwargs):
        return self.env.reset(*args, **kwargs)

    def step(self, action) -> StepResult:
        if isinstance(action, Action):
            return self.env.step(action)
        r0, c0, r1, c1, op = action
        state = self.env.state
        if state is None:
            raise EpisodeOver("reset() must be called before step()")
        h, w = state.grid.shape
        if r0 > r1:
            r0, r1 = r1, r0
        if c0 > c1:
            c0, c1 = c1, c0
        mask = np.zeros((h, w), dtype=bool)
        if r0 < 0:
            r0 = 0
        if c0 < 0:
            c0 = 0
        if r0 <= r1 and c0 <= c1 and r0 < h and c0 < w:
            mask[r0 : r1 + 1, c0 : c1 + 1] = True
        if self._step_op is not None:
            return self._step_op(op, mask)
        return self.env.step(Action(int(op), mask))


class OpSubsetWrapper:
    """Rejects (IllegalOp) any operation outside an allowed subset."""

    def __init__(self, env, allowed: Sequence[int]):
        self.env = env
        self.allowed = frozenset(int(v) for v in allowed)

    @property
    def preset(self):
        return self.env.preset

    @property
    def state(self):
        return self.env.state

    @property
    def truncated(self):
        return self.env.truncated

    @property
    def task(self):
        return self.env.task

    def reset(self, *args, **kwargs):
        return self.env.reset(*args, **kwargs)

    def step(self, action) -> StepResult:
        op = action.operation if isinstance(action, Action) else action[4]
        if int(op) not in self.allowed:
            raise IllegalOp(f"operation {op} rejected by subset wrapper")
        return self.env.step(action)
