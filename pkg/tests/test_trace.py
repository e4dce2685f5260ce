import io
import json

import numpy as np
import pytest

from arcgrid import (
    Action,
    BBoxWrapper,
    Environment,
    GeneratorSpec,
    OP_IDS,
    TraceRecorder,
    gen_random_task,
    get_preset,
    read_trace,
    sample_bbox_action,
    verify_trace,
    write_trace,
)
from arcgrid.errors import MalformedRecord, ReplayDivergence
from arcgrid.tasks import parse_generated_id

from conftest import make_task, mkmask


def fixed_clock():
    return "2024-08-17T00:00:00.000+00:00"


def make_recorder(task, preset=None, **kw):
    env = TraceRecorder(BBoxWrapper(Environment(preset or get_preset("o2arc"), task)),
                        session_id="s1", clock=fixed_clock, **kw)
    return env


def gen_resolver(task_id):
    spec = parse_generated_id(task_id)
    assert spec is not None
    return gen_random_task(spec)


# -- record schema and IO --------------------------------------------------------

def test_record_counts_reset_plus_steps():
    task = make_task([[1, 2]], [[2, 1]])
    env = make_recorder(task)
    env.reset()
    for _ in range(3):
        env.step((0, 0, 0, 1, OP_IDS["Color5"]))
    assert len(env.records) == 4
    kinds = [r.kind for r in env.records]
    assert kinds == ["reset", "step", "step", "step"]
    assert [r.index for r in env.records] == [0, 1, 2, 3]


def test_reset_only_episode():
    env = make_recorder(make_task([[1]], [[1]]))
    env.reset()
    assert [r.kind for r in env.records] == ["reset"]


def test_record_selection_forms():
    task = make_task([[1, 2]], [[2, 1]])
    env = make_recorder(task)
    env.reset()
    env.step((0, 1, 0, 0, OP_IDS["Color5"]))
    env.step(Action(OP_IDS["Color6"], mkmask([[1, 0]])))
    env.step(Action(OP_IDS["Submit"]))
    bbox_rec, mask_rec, submit_rec = env.records[1:]
    assert bbox_rec.selection == {"bbox": [0, 1, 0, 0]}
    assert mask_rec.selection == {"mask": {"dims": [1, 2], "runs": [0, 1, 1]}}
    assert submit_rec.selection is None
    assert submit_rec.terminated is True


def test_jsonl_round_trip_field_for_field():
    task = make_task([[1, 2]], [[2, 1]])
    env = make_recorder(task)
    env.reset()
    for i in range(9):
        env.step((0, 0, 0, i % 2, OP_IDS[f"Color{i}"]))
    buf = io.StringIO()
    write_trace(env.records, buf)
    back = read_trace(io.StringIO(buf.getvalue()))
    assert back == env.records
    # exact field names on the wire
    doc = json.loads(buf.getvalue().splitlines()[0])
    assert list(doc) == [
        "session_id", "task_id", "kind", "index", "operation", "selection",
        "reward", "terminated", "truncated", "grid_digest", "ts",
    ]
    assert isinstance(doc["grid_digest"], str) and len(doc["grid_digest"]) == 16


def test_truncated_line_reports_line_number(tmp_path):
    task = make_task([[1, 2]], [[2, 1]])
    env = make_recorder(task)
    env.reset()
    env.step((0, 0, 0, 0, OP_IDS["Color1"]))
    path = tmp_path / "t.jsonl"
    write_trace(env.records, path)
    text = path.read_text()
    path.write_text(text[:-20])  # chop the end of the final line
    with pytest.raises(MalformedRecord) as exc:
        read_trace(path)
    assert exc.value.line == 2
    assert "line 2" in str(exc.value)


def test_missing_field_rejected():
    with pytest.raises(MalformedRecord):
        read_trace(io.StringIO('{"kind": "step"}\n'))


def test_sink_failure_is_nonfatal():
    class BrokenSink:
        def append(self, record):
            raise OSError("disk full")

    task = make_task([[1]], [[1]])
    env = make_recorder(task, sink=BrokenSink())
    env.reset()
    res = env.step((0, 0, 0, 0, OP_IDS["Color3"]))
    assert res.observation.grid.tolist() == [[3]]
    assert env.sink_errors == 2
    assert len(env.records) == 2


# -- replay -----------------------------------------------------------------------

def random_rollout_records(steps=60, seed=4, preset_name="o2arc"):
    task = gen_random_task(GeneratorSpec(seed=seed, num_colors=5))
    env = make_recorder(task, preset=get_preset(preset_name))
    rng = np.random.default_rng(seed)
    env.reset()
    for _ in range(steps):
        action = sample_bbox_action(rng, env.state.grid.shape, env.preset.allowed_ops)
        res = env.step(action)
        if res.terminated or res.truncated:
            env.reset()
    return env.records


def test_replay_reproduces_digests():
    records = random_rollout_records()
    report = verify_trace(records, gen_resolver)
    assert report.records == len(records)
    assert report.sessions == 1


def test_replay_detects_divergence():
    records = random_rollout_records()
    step_indices = [i for i, r in enumerate(records) if r.kind == "step"]
    victim = records[step_indices[len(step_indices) // 2]]
    victim.grid_digest ^= 0x1
    with pytest.raises(ReplayDivergence) as exc:
        verify_trace(records, gen_resolver)
    assert exc.value.index == victim.index


def test_replay_resolves_adaptation_resets():
    task = make_task([[1, 2]], [[2, 1]], demos=[([[3]], [[4]]), ([[5]], [[6]])])
    env = TraceRecorder(BBoxWrapper(Environment(task=task)), session_id="s2")
    env.reset(adaptation=True, pair_index=1)
    env.step((0, 0, 0, 0, OP_IDS["Color6"]))
    env.step(Action(OP_IDS["Submit"]))
    env.reset()  # test pair episode in the same session
    env.step(Action(OP_IDS["Submit"]))
    report = verify_trace(env.records, lambda _tid: task)
    assert report.records == 5


def test_replay_mask_actions():
    task = make_task([[1, 2], [3, 4]], [[4, 3], [2, 1]])
    env = TraceRecorder(Environment(get_preset("full"), task), session_id="s3")
    env.reset()
    env.step(Action(OP_IDS["MoveU"], mkmask([[0, 0], [0, 1]])))
    env.step(Action(OP_IDS["MoveL"], None))
    env.step(Action(OP_IDS["FlipD1"], np.ones((2, 2), bool)))
    verify_trace(env.records, lambda _tid: task)
