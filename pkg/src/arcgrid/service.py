"""Session-based HTTP facade over the environment runtime.

Each session owns one environment (with bbox and trace-recording
wrappers) created from a dataset task or a generated task id. All
mutations of a session are serialized by a per-session lock, and every
reset/step is appended write-ahead to the session's trace file when a
trace directory is configured.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .env import Action, BBoxWrapper, Environment, PRESET_NAMES, get_preset
from .errors import EmptyTask, EpisodeOver, IllegalOp, MalformedTask
from .grid import decode_mask_rle
from .state import EnvState
from .tasks import (
    Task,
    gen_random_task,
    load_dataset,
    parse_generated_id,
    sample_task,
)
from .trace import JsonlTraceWriter, TraceRecorder

GENERATED_DATASET = "generated"


@dataclass
class ServiceConfig:
    data_roots: dict[str, Path] = dc_field(default_factory=dict)  # dataset name -> root
    trace_dir: Path | None = None
    session_ttl: float = 3600.0
    cors_origins: tuple[str, ...] = ("*",)


class TaskRegistry:
    """Lazy, cached access to the configured dataset roots."""

    def __init__(self, config: ServiceConfig):
        self._config = config
        self._splits: dict[tuple[str, str], list[Task]] = {}
        self._lock = threading.Lock()

    def datasets(self) -> list[str]:
        names = sorted(self._config.data_roots)
        return names + [GENERATED_DATASET]

    def split(self, dataset: str, split: str) -> list[Task]:
        if dataset not in self._config.data_roots:
            raise HTTPException(404, f"unknown dataset {dataset!r}")
        key = (dataset, split)
        with self._lock:
            if key not in self._splits:
                root = self._config.data_roots[dataset]
                try:
                    loaded = load_dataset(root, miniarc=dataset.startswith("mini"))
                except MalformedTask as exc:
                    raise HTTPException(500, f"dataset {dataset!r} failed to load: {exc}")
                for name, tasks in loaded.items():
                    self._splits[(dataset, name)] = tasks
                if key not in self._splits:
                    raise HTTPException(404, f"unknown split {split!r}")
            return self._splits[key]

    def resolve(self, dataset: str, split: str, task_id: str | None,
                seed: int | None) -> Task:
        if dataset == GENERATED_DATASET:
            if task_id is None:
                raise HTTPException(422, "generated dataset requires a task_id like gen-5x5-c4-s42")
            spec = parse_generated_id(task_id)
            if spec is None:
                raise HTTPException(404, f"unknown generated task id {task_id!r}")
            return gen_random_task(spec)
        tasks = self.split(dataset, split)
        if task_id is None:
            if not tasks:
                raise HTTPException(404, f"dataset {dataset!r}/{split!r} is empty")
            return sample_task(tasks, seed)
        for task in tasks:
            if task.id == task_id:
                return task
        raise HTTPException(404, f"unknown task {task_id!r} in {dataset!r}/{split!r}")


@dataclass
class Session:
    id: str
    env: TraceRecorder
    task: Task
    dataset: str
    split: str
    preset_name: str
    expose_answer: bool
    writer: JsonlTraceWriter | None
    created_at: float
    last_active: float
    lock: threading.Lock = dc_field(default_factory=threading.Lock)

    def touch(self):
        self.last_active = time.monotonic()


class CreateSessionRequest(BaseModel):
    dataset: str = "arc"
    split: str = "training"
    task_id: str | None = None
    preset: str = "o2arc"
    adaptation: bool = False
    pair_index: int | None = None
    seed: int | None = None
    expose_answer: bool = False
    reward_mode: str | None = None
    max_steps: int | None = None


class ResetRequest(BaseModel):
    adaptation: bool = False
    pair_index: int | None = None
    seed: int | None = None


class StepRequest(BaseModel):
    operation: int
    selection: dict | None = None


def observation_document(state: EnvState, session: Session) -> dict:
    doc = state.to_document(expose_answer=session.expose_answer)
    doc["task_id"] = session.task.id
    doc["preset"] = session.preset_name
    doc["demo_pairs"] = [
        {"input": i.tolist(), "output": o.tolist()} for i, o in session.task.demo_pairs
    ]
    return doc


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    registry = TaskRegistry(config)
    sessions: dict[str, Session] = {}
    sessions_lock = threading.Lock()

    app = FastAPI(title="arcgrid service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.config = config

    def _expired(session: Session) -> bool:
        return time.monotonic() - session.last_active > config.session_ttl

    def _sweep():
        with sessions_lock:
            for sid in [sid for sid, s in sessions.items() if _expired(s)]:
                stale = sessions.pop(sid)
                if stale.writer is not None:
                    stale.writer.close()

    def _get_session(sid: str) -> Session:
        with sessions_lock:
            session = sessions.get(sid)
            if session is not None and _expired(session):
                sessions.pop(sid)
                if session.writer is not None:
                    session.writer.close()
                session = None
        if session is None:
            raise HTTPException(404, f"unknown session {sid!r}")
        return session

    def _reset(session: Session, adaptation: bool, pair_index: int | None, seed: int | None):
        try:
            return session.env.reset(
                adaptation=adaptation, pair_index=pair_index, seed=seed
            )
        except (EmptyTask, ValueError) as exc:
            raise HTTPException(422, str(exc))

    @app.post("/v1/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        _sweep()
        task = registry.resolve(req.dataset, req.split, req.task_id, req.seed)
        overrides = {}
        if req.reward_mode is not None:
            if req.reward_mode not in ("sparse", "dense"):
                raise HTTPException(422, f"reward_mode must be sparse or dense, got {req.reward_mode!r}")
            overrides["reward_mode"] = req.reward_mode
        if req.max_steps is not None:
            if req.max_steps < 1:
                raise HTTPException(422, "max_steps must be >= 1")
            overrides["max_steps"] = req.max_steps
        if req.expose_answer:
            overrides["expose_answer"] = True
        try:
            preset = get_preset(req.preset, **overrides)
        except KeyError as exc:
            raise HTTPException(422, str(exc))
        sid = uuid.uuid4().hex
        writer = None
        if config.trace_dir is not None:
            writer = JsonlTraceWriter(Path(config.trace_dir) / f"{sid}.jsonl")
        recorder = TraceRecorder(
            BBoxWrapper(Environment(preset, task)), sink=writer, session_id=sid
        )
        now = time.monotonic()
        session = Session(
            id=sid, env=recorder, task=task, dataset=req.dataset, split=req.split,
            preset_name=req.preset, expose_answer=req.expose_answer,
            writer=writer, created_at=now, last_active=now,
        )
        state = _reset(session, req.adaptation, req.pair_index, req.seed)
        with sessions_lock:
            sessions[sid] = session
        return {"session_id": sid, "observation": observation_document(state, session)}

    @app.post("/v1/sessions/{sid}/reset")
    def reset_session(sid: str, req: ResetRequest):
        session = _get_session(sid)
        with session.lock:
            state = _reset(session, req.adaptation, req.pair_index, req.seed)
            session.touch()
            return {"session_id": sid, "observation": observation_document(state, session)}

    @app.post("/v1/sessions/{sid}/step")
    def step_session(sid: str, req: StepRequest):
        session = _get_session(sid)
        sel_doc = req.selection
        if sel_doc is None:
            action = Action(req.operation, None)
        elif "bbox" in sel_doc:
            bbox = sel_doc["bbox"]
            if not (isinstance(bbox, list) and len(bbox) == 4):
                raise HTTPException(422, "selection.bbox must be [r0, c0, r1, c1]")
            try:
                r0, c0, r1, c1 = (int(v) for v in bbox)
            except (TypeError, ValueError):
                raise HTTPException(422, "selection.bbox must hold integers")
            action = (r0, c0, r1, c1, req.operation)
        elif "mask" in sel_doc:
            try:
                action = Action(req.operation, decode_mask_rle(sel_doc["mask"]))
            except ValueError as exc:
                raise HTTPException(422, str(exc))
        else:
            raise HTTPException(422, "selection must carry 'bbox' or 'mask'")
        with session.lock:
            try:
                result = session.env.step(action)
            except EpisodeOver as exc:
                raise HTTPException(409, str(exc))
            except IllegalOp as exc:
                raise HTTPException(422, str(exc))
            session.touch()
            return {
                "observation": observation_document(result.observation, session),
                "reward": result.reward,
                "terminated": result.terminated,
                "truncated": result.truncated,
                "info": result.info,
            }

    @app.get("/v1/sessions/{sid}/state")
    def session_state(sid: str):
        session = _get_session(sid)
        with session.lock:
            session.touch()
            return observation_document(session.env.state, session)

    @app.get("/v1/sessions/{sid}/trace")
    def session_trace(sid: str):
        session = _get_session(sid)
        with session.lock:
            session.touch()
            return [record.to_json() for record in session.env.records]

    @app.get("/v1/tasks")
    def list_tasks(
        dataset: str = Query("arc"),
        split: str = Query("training"),
        max_dim: int | None = Query(None, ge=1, le=30),
    ):
        if dataset == GENERATED_DATASET:
            return []
        tasks = registry.split(dataset, split)
        if max_dim is not None:
            tasks = [t for t in tasks if t.fits((max_dim, max_dim))]
        return [
            {
                "id": t.id,
                "source": t.source,
                "num_demo": len(t.demo_pairs),
                "num_test": len(t.test_pairs),
                "max_dim": list(t.max_dims()),
            }
            for t in tasks
        ]

    @app.get("/v1/presets")
    def list_presets():
        return {
            name: {"allowed_ops": list(get_preset(name).allowed_ops)}
            for name in PRESET_NAMES
        }

    @app.get("/v1/datasets")
    def list_datasets():
        return registry.datasets()

    return app
