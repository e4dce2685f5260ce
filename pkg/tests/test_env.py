import numpy as np
import pytest

from arcgrid import (
    Action,
    Environment,
    GeneratorSpec,
    OP_IDS,
    gen_random_task,
    get_preset,
    grid_digest,
    sample_bbox_action,
)
from arcgrid.errors import EmptyTask, EpisodeOver, IllegalOp
from arcgrid.tasks import Task

from conftest import make_task, mkmask, random_grid

SUBMIT = OP_IDS["Submit"]


def dense_reward_oracle(grid, answer):
    frame_h = max(grid.shape[0], answer.shape[0])
    frame_w = max(grid.shape[1], answer.shape[1])
    bad = 0
    for r in range(frame_h):
        for c in range(frame_w):
            if r >= grid.shape[0] or c >= grid.shape[1]:
                bad += 1
            elif r >= answer.shape[0] or c >= answer.shape[1]:
                bad += 1
            elif grid[r, c] != answer[r, c]:
                bad += 1
    return -bad / (frame_h * frame_w)


# -- presets -----------------------------------------------------------------------

def test_o2arc_preset_is_the_35_op_mapping():
    p = get_preset("o2arc")
    assert p.allowed_ops == tuple(range(35))


def test_raw_preset_is_coloring_plus_two_criticals():
    p = get_preset("raw")
    assert p.allowed_ops == tuple(range(10)) + (OP_IDS["ResizeGrid"], OP_IDS["Submit"])


def test_arc_preset_covers_coloring_floodfill_critical():
    p = get_preset("arc")
    assert set(p.allowed_ops) == set(range(20)) | {
        OP_IDS["CopyInput"], OP_IDS["ResetGrid"], OP_IDS["ResizeGrid"],
        OP_IDS["Submit"], OP_IDS["CropGrid"],
    }


def test_unknown_preset():
    with pytest.raises(KeyError):
        get_preset("nope")


# -- reset --------------------------------------------------------------------------

def test_reset_uses_test_pair_and_copies_input():
    task = make_task([[1, 2]], [[3, 4]], demos=[([[5]], [[6]])])
    env = Environment(task=task)
    s = env.reset()
    assert s.input.tolist() == [[1, 2]]
    assert s.grid.tolist() == [[1, 2]]
    assert s.answer.tolist() == [[3, 4]]
    assert s.clip_dim == (0, 0)
    assert not s.object_states.active
    assert s.step_count == 0 and not s.terminated


def test_reset_adaptation_picks_demo_pair():
    task = make_task([[1]], [[2]], demos=[([[3]], [[4]]), ([[5]], [[6]])])
    env = Environment(task=task)
    s = env.reset(adaptation=True, pair_index=0)
    assert s.input.tolist() == [[3]] and s.answer.tolist() == [[4]]
    s = env.reset(adaptation=True, pair_index=1)
    assert s.input.tolist() == [[5]] and s.answer.tolist() == [[6]]


def test_reset_adaptation_seeded_choice_is_deterministic():
    demos = [([[d]], [[d]]) for d in range(1, 7)]
    task = make_task([[0]], [[0]], demos=demos)
    env = Environment(task=task)
    picks = {grid_digest(env.reset(adaptation=True, seed=s).grid) for s in range(30)}
    assert len(picks) > 1  # actually samples across pairs
    a = env.reset(adaptation=True, seed=123)
    b = env.reset(adaptation=True, seed=123)
    assert a.input.tolist() == b.input.tolist()


def test_reset_pair_index_out_of_range():
    task = make_task([[1]], [[2]])
    env = Environment(task=task)
    with pytest.raises(ValueError):
        env.reset(adaptation=True, pair_index=5)


def test_reset_empty_task():
    bad = Task(id="x", source="ARC-train", demo_pairs=[], test_pairs=[])
    with pytest.raises(EmptyTask):
        Environment(task=bad).reset()
    gen = gen_random_task(GeneratorSpec(seed=1))
    with pytest.raises(EmptyTask):
        Environment(task=gen).reset(adaptation=True)  # generated tasks have no demos


# -- step: rewards and flags ----------------------------------------------------------

def test_sparse_submit_rewards():
    task = make_task([[1, 2]], [[1, 2]])
    env = Environment(task=task)
    env.reset()
    res = env.step(Action(SUBMIT))
    assert res.reward == 1.0 and res.terminated and res.info["exact_match"] is True

    env.reset()
    env.step(Action(OP_IDS["Color5"], np.ones((1, 2), bool)))
    res = env.step(Action(SUBMIT))
    assert res.reward == 0.0 and res.terminated and res.info["exact_match"] is False


def test_single_pixel_difference_gets_zero():
    task = make_task([[1, 2], [3, 4]], [[1, 2], [3, 4]])
    env = Environment(task=task)
    env.reset()
    env.step(Action(OP_IDS["Color9"], mkmask([[0, 0], [0, 1]])))
    res = env.step(Action(SUBMIT))
    assert res.reward == 0.0


def test_dims_difference_gets_zero():
    task = make_task([[1, 2], [1, 2]], [[1, 2]])
    env = Environment(task=task)
    env.reset()  # grid 2x2, answer 1x2: same leading cells, different dims
    res = env.step(Action(SUBMIT))
    assert res.reward == 0.0


def test_dense_reward_equals_negative_mismatch(rng):
    preset = get_preset("o2arc", reward_mode="dense")
    for _ in range(50):
        g = random_grid(rng, 5, 5, colors=3)
        a = random_grid(rng, 5, 5, colors=3)
        task = make_task(g.tolist(), a.tolist())
        env = Environment(preset, task)
        env.reset()
        value = int(rng.integers(10))
        res = env.step(Action(OP_IDS[f"Color{value}"], mkmask(rng.random((5, 5)) < 0.3)))
        expect = dense_reward_oracle(env.state.grid, env.state.answer)
        assert res.reward == pytest.approx(expect, abs=1e-12)
        assert -1.0 <= res.reward <= 0.0


def test_dense_reward_example_3_of_25():
    g = [[1] * 5 for _ in range(5)]
    task = make_task(g, g)
    env = Environment(get_preset("o2arc", reward_mode="dense"), task)
    env.reset()
    res = env.step(Action(OP_IDS["Color2"], mkmask(
        [[1, 1, 1, 0, 0]] + [[0] * 5] * 4)))
    assert res.reward == pytest.approx(-0.12, abs=1e-12)


def test_dense_submit_keeps_sparse_semantics():
    task = make_task([[1]], [[1]])
    env = Environment(get_preset("o2arc", reward_mode="dense"), task)
    env.reset()
    assert env.step(Action(SUBMIT)).reward == 1.0
    env.reset()
    env.step(Action(OP_IDS["Color0"], np.ones((1, 1), bool)))
    assert env.step(Action(SUBMIT)).reward == 0.0


def test_illegal_op():
    task = make_task([[1]], [[1]])
    env = Environment(get_preset("raw"), task)
    env.reset()
    with pytest.raises(IllegalOp):
        env.step(Action(OP_IDS["MoveU"], np.ones((1, 1), bool)))
    with pytest.raises(IllegalOp):
        env.step(Action(99))


def test_episode_over_after_submit_and_no_mutation():
    task = make_task([[1]], [[1]])
    env = Environment(task=task)
    env.reset()
    env.step(Action(SUBMIT))
    digest = grid_digest(env.state.grid)
    with pytest.raises(EpisodeOver):
        env.step(Action(OP_IDS["Color3"], np.ones((1, 1), bool)))
    assert grid_digest(env.state.grid) == digest
    assert env.state.step_count == 1


def test_truncation_at_max_steps():
    task = make_task([[1]], [[2]])
    env = Environment(get_preset("o2arc", max_steps=3), task)
    env.reset()
    sel = np.ones((1, 1), bool)
    assert not env.step(Action(OP_IDS["Color1"], sel)).truncated
    assert not env.step(Action(OP_IDS["Color2"], sel)).truncated
    assert env.step(Action(OP_IDS["Color3"], sel)).truncated
    with pytest.raises(EpisodeOver):
        env.step(Action(OP_IDS["Color4"], sel))
    env.reset()
    assert env.state.step_count == 0


def test_step_before_reset():
    env = Environment(task=make_task([[1]], [[1]]))
    with pytest.raises(EpisodeOver):
        env.step(Action(SUBMIT))


def test_determinism_bit_exact():
    task = gen_random_task(GeneratorSpec(seed=5, num_colors=6))

    def run():
        env = Environment(get_preset("o2arc", reward_mode="dense"), task)
        env.reset()
        rng = np.random.default_rng(99)
        digests, rewards = [], []
        for _ in range(60):
            a = sample_bbox_action(rng, env.state.grid.shape, env.preset.allowed_ops)
            from arcgrid import BBoxWrapper  # local import keeps test self-contained
            res = BBoxWrapper(env).step(a)
            digests.append(grid_digest(res.observation.grid))
            rewards.append(res.reward)
            if res.terminated or res.truncated:
                env.reset()
        return digests, rewards

    assert run() == run()


def test_observation_carries_every_state_variable():
    task = make_task([[1, 2]], [[3, 4]], demos=[([[5]], [[6]])])
    env = Environment(task=task)
    env.reset()
    doc = env.state.to_document()
    for key in ("input", "input_dim", "grid", "grid_dim", "clip", "clip_dim",
                "object_states", "terminated", "step_count"):
        assert key in doc
    for key in ("selected", "active", "object", "object_sel", "object_dim",
                "object_pos", "rotation_parity", "background"):
        assert key in doc["object_states"]
    assert "answer" not in doc and "answer_dim" not in doc
    exposed = env.state.to_document(expose_answer=True)
    assert exposed["answer"] == [[3, 4]] and exposed["answer_dim"] == [1, 2]
