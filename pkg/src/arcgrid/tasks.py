"""Task ingestion, sampling, and procedural generators.

Dataset tasks are JSON files with "train" and "test" arrays of
{"input": grid, "output": grid}; a dataset root holds them under
training/ and evaluation/ subdirectories. Generated tasks embed their
full recipe (dims, colors, seed) in the task id so they can be rebuilt
from the id alone.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidSchedule, MalformedTask, NoMatchingTask
from .grid import Grid, as_grid

Pair = tuple[Grid, Grid]

SOURCE_ARC_TRAIN = "ARC-train"
SOURCE_ARC_EVAL = "ARC-eval"
SOURCE_MINIARC = "MiniARC"
SOURCE_GENERATED = "Generated"

TRAIN_DIR = "training"
EVAL_DIR = "evaluation"

_GENERATED_ID = re.compile(r"^gen-(\d+)x(\d+)-c(\d+)-s(\d+)$")


@dataclass
class Task:
    """One puzzle: demonstration pairs plus test pairs, with provenance."""

    id: str
    source: str
    demo_pairs: list[Pair]
    test_pairs: list[Pair]

    def all_grids(self) -> Iterator[Grid]:
        for pairs in (self.demo_pairs, self.test_pairs):
            for inp, out in pairs:
                yield inp
                yield out

    def max_dims(self) -> tuple[int, int]:
        h = max(g.shape[0] for g in self.all_grids())
        w = max(g.shape[1] for g in self.all_grids())
        return h, w

    def fits(self, max_dims: tuple[int, int]) -> bool:
        mh, mw = max_dims
        return all(g.shape[0] <= mh and g.shape[1] <= mw for g in self.all_grids())


def _parse_pair(doc, *, what: str, max_side: int) -> Pair:
    if not isinstance(doc, dict) or "input" not in doc or "output" not in doc:
        raise ValueError(f"{what} must be an object with 'input' and 'output'")
    try:
        inp = as_grid(doc["input"], max_side=max_side)
        out = as_grid(doc["output"], max_side=max_side)
    except ValueError as exc:
        raise ValueError(f"{what}: {exc}") from exc
    return inp, out


def task_from_document(doc, *, task_id: str, source: str) -> Task:
    """Parse one task JSON document, validating bounds.

    Mini-ARC tasks must stay within 5x5; extra metadata fields in the
    document are tolerated and ignored.
    """
    max_side = 5 if source == SOURCE_MINIARC else 30
    if not isinstance(doc, dict):
        raise MalformedTask(f"task {task_id!r}: document must be a JSON object")
    try:
        train = doc["train"]
        test = doc["test"]
        if not isinstance(train, list) or not isinstance(test, list):
            raise ValueError("'train' and 'test' must be arrays")
        demo = [_parse_pair(p, what=f"train[{i}]", max_side=max_side) for i, p in enumerate(train)]
        tests = [_parse_pair(p, what=f"test[{i}]", max_side=max_side) for i, p in enumerate(test)]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedTask(f"task {task_id!r}: {exc}") from exc
    if not demo:
        raise MalformedTask(f"task {task_id!r}: at least one train pair required")
    if not tests:
        raise MalformedTask(f"task {task_id!r}: at least one test pair required")
    return Task(id=task_id, source=source, demo_pairs=demo, test_pairs=tests)


def task_to_document(task: Task) -> dict:
    """Canonical JSON form; load(serialize(t)) is a fixed point."""
    return {
        "train": [{"input": i.tolist(), "output": o.tolist()} for i, o in task.demo_pairs],
        "test": [{"input": i.tolist(), "output": o.tolist()} for i, o in task.test_pairs],
    }


def load_task_file(path: str | Path, *, source: str) -> Task:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedTask(f"cannot parse: {exc}", path=str(path)) from exc
    try:
        return task_from_document(doc, task_id=path.stem, source=source)
    except MalformedTask as exc:
        raise MalformedTask(str(exc), path=str(path)) from exc


def save_task(task: Task, path: str | Path) -> None:
    Path(path).write_text(json.dumps(task_to_document(task)), encoding="utf-8")


def _source_for_dir(path: Path) -> str:
    name = path.name.lower()
    if name.startswith("eval"):
        return SOURCE_ARC_EVAL
    return SOURCE_ARC_TRAIN


def load_arc_dir(path: str | Path, *, source: str | None = None) -> list[Task]:
    """Parse every *.json task in a directory, sorted by filename.

    Raises MalformedTask (with file context) on the first bad file; an
    empty or missing directory yields an empty list.
    """
    path = Path(path)
    if source is None:
        source = _source_for_dir(path)
    if not path.is_dir():
        return []
    return [load_task_file(p, source=source) for p in sorted(path.glob("*.json"))]


def load_dataset(root: str | Path, *, miniarc: bool = False) -> dict[str, list[Task]]:
    """Load a dataset root's training/ and evaluation/ splits.

    A root that nests them under data/ (the public dataset layout) is
    accepted too.
    """
    root = Path(root)
    if not (root / TRAIN_DIR).is_dir() and (root / "data" / TRAIN_DIR).is_dir():
        root = root / "data"
    splits = {}
    for split, fallback in ((TRAIN_DIR, SOURCE_ARC_TRAIN), (EVAL_DIR, SOURCE_ARC_EVAL)):
        source = SOURCE_MINIARC if miniarc else fallback
        splits[split] = load_arc_dir(root / split, source=source)
    return splits


def sample_task(tasks: Sequence[Task], seed: int | None = None,
                max_dims: tuple[int, int] | None = None) -> Task:
    """Uniform seeded choice among tasks whose every grid fits max_dims."""
    if max_dims is None:
        eligible = list(tasks)
    else:
        eligible = [t for t in tasks if t.fits(max_dims)]
    if not eligible:
        raise NoMatchingTask(f"no task fits max_dims={max_dims}")
    rng = np.random.default_rng(seed)
    return eligible[int(rng.integers(len(eligible)))]


# -- Procedural generation ------------------------------------------------------


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for random tasks: uniform i.i.d. colors over {0..num_colors-1}."""

    height: int = 5
    width: int = 5
    num_colors: int = 10
    seed: int = 0
    phase_schedule: tuple[tuple[int, int], ...] | None = None  # (num_colors, episodes)

    def __post_init__(self):
        if not (1 <= self.height <= 30 and 1 <= self.width <= 30):
            raise ValueError(f"generator dims {self.height}x{self.width} outside 1..30")
        if not 2 <= self.num_colors <= 10:
            raise ValueError(f"num_colors {self.num_colors} outside 2..10")


def generated_task_id(height: int, width: int, num_colors: int, seed: int) -> str:
    return f"gen-{height}x{width}-c{num_colors}-s{seed}"


def parse_generated_id(task_id: str) -> GeneratorSpec | None:
    """Recover a GeneratorSpec from a generated task id, else None."""
    m = _GENERATED_ID.match(task_id)
    if m is None:
        return None
    h, w, k, s = (int(v) for v in m.groups())
    try:
        return GeneratorSpec(height=h, width=w, num_colors=k, seed=s)
    except ValueError:
        return None


def gen_random_task(spec: GeneratorSpec) -> Task:
    """One test pair of independent uniform-color grids; no demo pairs.

    The goal is unrelated to the input, so these tasks are meant for
    answer-exposed training setups.
    """
    rng = np.random.default_rng(spec.seed)
    inp = rng.integers(0, spec.num_colors, size=(spec.height, spec.width), dtype=np.int8)
    out = rng.integers(0, spec.num_colors, size=(spec.height, spec.width), dtype=np.int8)
    return Task(
        id=generated_task_id(spec.height, spec.width, spec.num_colors, spec.seed),
        source=SOURCE_GENERATED,
        demo_pairs=[],
        test_pairs=[(inp, out)],
    )


def derive_seed(base_seed: int, index: int) -> int:
    """Stable per-episode seed stream for curricula and rollouts."""
    return int(np.random.SeedSequence((base_seed, index)).generate_state(1, np.uint64)[0])


def default_phase_schedule(episodes_per_phase: int) -> tuple[tuple[int, int], ...]:
    """The standard color curriculum: five phases of 2, 4, 6, 8, 10 colors."""
    return tuple((k, episodes_per_phase) for k in (2, 4, 6, 8, 10))


@dataclass(frozen=True)
class PhaseInfo:
    phase: int
    num_colors: int
    episode: int           # global episode index
    episode_in_phase: int
    phase_start: bool


def gen_curriculum(spec: GeneratorSpec) -> Iterator[tuple[Task, PhaseInfo]]:
    """Stream tasks whose color count follows spec.phase_schedule.

    Each phase must plan at least one episode and stay within 2..10
    colors, otherwise InvalidSchedule is raised up front.
    """
    schedule = spec.phase_schedule
    if not schedule:
        raise InvalidSchedule("spec.phase_schedule is required")
    for num_colors, episodes in schedule:
        if not 2 <= num_colors <= 10:
            raise InvalidSchedule(f"phase color count {num_colors} outside 2..10")
        if episodes < 1:
            raise InvalidSchedule(f"phase episode count {episodes} must be >= 1")
    episode = 0
    for phase, (num_colors, episodes) in enumerate(schedule):
        for i in range(episodes):
            task_spec = GeneratorSpec(
                height=spec.height, width=spec.width, num_colors=num_colors,
                seed=derive_seed(spec.seed, episode),
            )
            yield gen_random_task(task_spec), PhaseInfo(
                phase=phase, num_colors=num_colors, episode=episode,
                episode_in_phase=i, phase_start=(i == 0),
            )
            episode += 1
