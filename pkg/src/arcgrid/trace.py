"""Trace records: persistence, the recording wrapper, and replay checks.

A trace is a JSONL stream of reset/step records for one or more sessions.
Records carry a 64-bit FNV-1a digest of the post-event grid (serialized
as 16 hex chars so JavaScript readers keep full precision), which lets a
replay re-run the actions and verify every intermediate grid bit-exactly.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, IO, Iterable, Sequence

from .env import Action, Environment, get_preset
from .errors import MalformedRecord, ReplayDivergence
from .grid import decode_mask_rle, encode_mask_rle, grid_digest, rect_mask

logger = logging.getLogger(__name__)

TRACE_FIELDS = (
    "session_id", "task_id", "kind", "index", "operation", "selection",
    "reward", "terminated", "truncated", "grid_digest", "ts",
)


@dataclass
class TraceRecord:
    """One reset or step event of a solving episode."""

    session_id: str
    task_id: str
    kind: str  # "reset" | "step"
    index: int
    operation: int | None
    selection: dict | None  # {"bbox": [r0,c0,r1,c1]} | {"mask": {"dims", "runs"}}
    reward: float
    terminated: bool
    truncated: bool
    grid_digest: int
    ts: str

    def to_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "task_id": self.task_id,
            "kind": self.kind,
            "index": self.index,
            "operation": self.operation,
            "selection": self.selection,
            "reward": self.reward,
            "terminated": self.terminated,
            "truncated": self.truncated,
            "grid_digest": format(self.grid_digest, "016x"),
            "ts": self.ts,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TraceRecord":
        if not isinstance(doc, dict):
            raise ValueError("record must be a JSON object")
        missing = [f for f in TRACE_FIELDS if f not in doc]
        if missing:
            raise ValueError(f"missing fields: {', '.join(missing)}")
        kind = doc["kind"]
        if kind not in ("reset", "step"):
            raise ValueError(f"bad kind {kind!r}")
        return cls(
            session_id=str(doc["session_id"]),
            task_id=str(doc["task_id"]),
            kind=kind,
            index=int(doc["index"]),
            operation=None if doc["operation"] is None else int(doc["operation"]),
            selection=doc["selection"],
            reward=float(doc["reward"]),
            terminated=bool(doc["terminated"]),
            truncated=bool(doc["truncated"]),
            grid_digest=int(doc["grid_digest"], 16),
            ts=str(doc["ts"]),
        )


def write_trace(records: Iterable[TraceRecord], dest: str | Path | IO[str]) -> None:
    """Write records as UTF-8 JSONL, one document per line."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8") as fp:
            write_trace(records, fp)
        return
    for record in records:
        dest.write(json.dumps(record.to_json()) + "\n")


def read_trace(src: str | Path | IO[str]) -> list[TraceRecord]:
    """Parse a JSONL trace; MalformedRecord carries the 1-based line number."""
    if isinstance(src, (str, Path)):
        with open(src, "r", encoding="utf-8") as fp:
            return read_trace(fp)
    records = []
    for lineno, line in enumerate(src, start=1):
        if not line.strip():
            continue
        try:
            records.append(TraceRecord.from_json(json.loads(line)))
        except (json.JSONDecodeError, ValueError, TypeError) as exc:
            raise MalformedRecord(str(exc), line=lineno) from exc
    return records


class JsonlTraceWriter:
    """File sink flushing after every record (write-ahead style)."""

    def __init__(self, path: str | Path, mode: str = "a"):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fp = open(self.path, mode, encoding="utf-8")

    def append(self, record: TraceRecord) -> None:
        self._fp.write(json.dumps(record.to_json()) + "\n")
        self._fp.flush()

    def close(self) -> None:
        self._fp.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


class TraceRecorder:
    """Env wrapper appending a TraceRecord to a sink per reset/step.

    Actions given as 5-tuples are stored in bbox form, mask actions as
    run-length masks. Sink failures are non-fatal: they are logged and
    counted, and the episode continues.
    """

    def __init__(self, env, sink=None, *, session_id: str = "local",
                 clock: Callable[[], str] = _utc_now_iso):
        self.env = env
        self.records: list[TraceRecord] = []
        self.sink = sink
        self.session_id = session_id
        self.sink_errors = 0
        self._clock = clock
        self._index = 0

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

    def _task_id(self) -> str:
        task = self.env.task
        return task.id if task is not None else ""

    def _emit(self, record: TraceRecord) -> None:
        self.records.append(record)
        self._index += 1
        if self.sink is None:
            return
        try:
            self.sink.append(record)
        except Exception:
            self.sink_errors += 1
            logger.warning("trace sink write failed (record %d)", record.index, exc_info=True)

    def reset(self, *args, **kwargs):
        state = self.env.reset(*args, **kwargs)
        self._emit(TraceRecord(
            session_id=self.session_id, task_id=self._task_id(), kind="reset",
            index=self._index, operation=None, selection=None, reward=0.0,
            terminated=False, truncated=False,
            grid_digest=grid_digest(state.grid), ts=self._clock(),
        ))
        return state

    def step(self, action):
        if isinstance(action, Action):
            op = int(action.operation)
            selection = None
            if action.selection is not None:
                selection = {"mask": encode_mask_rle(action.selection)}
        else:
            r0, c0, r1, c1, op = (int(v) for v in action)
            selection = {"bbox": [r0, c0, r1, c1]}
        result = self.env.step(action)
        self._emit(TraceRecord(
            session_id=self.session_id, task_id=self._task_id(), kind="step",
            index=self._index, operation=op, selection=selection,
            reward=float(result.reward), terminated=result.terminated,
            truncated=result.truncated,
            grid_digest=grid_digest(result.observation.grid), ts=self._clock(),
        ))
        return result


@dataclass
class ReplayReport:
    sessions: int
    records: int


def _reset_candidates(task):
    for i in range(len(task.test_pairs)):
        yield False, i
    for i in range(len(task.demo_pairs)):
        yield True, i


def decode_selection(doc: dict | None, dims: tuple[int, int]):
    """Materialize a recorded selection against the current grid dims."""
    if doc is None:
        return None
    if "bbox" in doc:
        r0, c0, r1, c1 = (int(v) for v in doc["bbox"])
        return rect_mask(dims, r0, c0, r1, c1)
    if "mask" in doc:
        return decode_mask_rle(doc["mask"])
    raise ValueError(f"selection document needs 'bbox' or 'mask': {doc}")


def verify_trace(records: Sequence[TraceRecord], task_resolver) -> ReplayReport:
    """Re-run recorded sessions and check every grid digest.

    task_resolver maps a task_id to a Task. The initializing pair of each
    reset is recovered by matching the reset digest against the task's
    test and demonstration pairs. Raises ReplayDivergence on the first
    mismatch.
    """
    sessions: dict[str, list[TraceRecord]] = {}
    for record in records:
        sessions.setdefault(record.session_id, []).append(record)

    # Replay must never truncate on its own; episode ends come from the trace.
    preset = get_preset("full", max_steps=2**62)
    for session_id, session in sessions.items():
        env = Environment(preset)
        started = False
        for record in session:
            if record.kind == "reset":
                task = task_resolver(record.task_id)
                for adaptation, pair_index in _reset_candidates(task):
                    state = env.reset(task, adaptation=adaptation, pair_index=pair_index)
                    if grid_digest(state.grid) == record.grid_digest:
                        break
                else:
                    raise ReplayDivergence(
                        f"session {session_id!r} record {record.index}: no pair of task "
                        f"{record.task_id!r} matches the reset digest",
                        index=record.index,
                    )
                started = True
                continue
            if not started:
                raise ReplayDivergence(
                    f"session {session_id!r} record {record.index}: step before any reset",
                    index=record.index,
                )
            sel = decode_selection(record.selection, env.state.grid.shape)
            result = env.step(Action(record.operation, sel))
            digest = grid_digest(result.observation.grid)
            if digest != record.grid_digest:
                raise ReplayDivergence(
                    f"session {session_id!r} record {record.index}: grid digest "
                    f"{digest:016x} != recorded {record.grid_digest:016x}",
                    index=record.index,
                )
            if result.terminated != record.terminated:
                raise ReplayDivergence(
                    f"session {session_id!r} record {record.index}: terminated flag differs",
                    index=record.index,
                )
    return ReplayReport(sessions=len(sessions), records=len(records))
