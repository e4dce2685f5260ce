import json
from pathlib import Path

import numpy as np
import pytest

from arcgrid import Task, as_grid


def mk(cells):
    return as_grid(cells)


def mkmask(cells):
    return np.asarray(cells, dtype=bool)


def random_grid(rng, h, w, colors=10):
    return rng.integers(0, colors, size=(h, w), dtype=np.int8)


def random_mask(rng, h, w, p=0.35):
    return rng.random((h, w)) < p


def make_task(test_input, test_output, demos=None, task_id="t0", source="ARC-train"):
    demos = demos or [(test_input, test_output)]
    return Task(
        id=task_id,
        source=source,
        demo_pairs=[(as_grid(i), as_grid(o)) for i, o in demos],
        test_pairs=[(as_grid(test_input), as_grid(test_output))],
    )


def identity_task(cells, task_id="identity"):
    """A task whose answer equals its input (CopyInput then Submit solves it)."""
    return make_task(cells, cells, task_id=task_id)


def write_dataset(root: Path, training: dict, evaluation: dict):
    """Write raw task documents as <root>/<split>/<id>.json files."""
    for split, tasks in (("training", training), ("evaluation", evaluation)):
        d = root / split
        d.mkdir(parents=True, exist_ok=True)
        for task_id, doc in tasks.items():
            (d / f"{task_id}.json").write_text(json.dumps(doc))
    return root


def pair_doc(inp, out):
    return {"input": inp, "output": out}


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
