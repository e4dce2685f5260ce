"""
The episode loop: reset, step, rewards, wrappers
================================================

An Environment runs one episode at a time over a task. The bbox wrapper
turns 5-tuple actions (r0, c0, r1, c1, op) into rectangle selections, the
subset wrapper restricts the operation set, and presets bundle the usual
configurations (o2arc, arc, raw).
"""

import numpy as np

from arcgrid import (
    Action,
    BBoxWrapper,
    Environment,
    GeneratorSpec,
    OP_IDS,
    OpSubsetWrapper,
    gen_random_task,
    get_preset,
    sample_bbox_action,
)

task = gen_random_task(GeneratorSpec(height=5, width=5, num_colors=4, seed=7))

# Sparse rewards: 1 only on a Submit that matches the answer exactly.
env = Environment(get_preset("o2arc"), task)
obs = env.reset()
print("grid starts as the input:", bool((obs.grid == obs.input).all()))
result = env.step(Action(OP_IDS["Submit"]))
print("submit on an unsolved grid ->", result.reward, "| terminated:", result.terminated)

# Dense rewards penalize each step by the incorrect-pixel ratio.
dense = Environment(get_preset("o2arc", reward_mode="dense"), task)
dense.reset()
r = dense.step(Action(OP_IDS["Color0"], np.ones((5, 5), bool)))
print("dense reward after painting everything 0:", round(r.reward, 4))

# A seeded random rollout through the bbox wrapper (coloring ops only).
restricted = BBoxWrapper(OpSubsetWrapper(
    Environment(get_preset("o2arc", max_steps=20), task),
    list(range(10)) + [OP_IDS["Submit"]],
))
restricted.reset()
rng = np.random.default_rng(0)
steps = 0
while True:
    action = sample_bbox_action(rng, restricted.state.grid.shape,
                                list(range(10)) + [OP_IDS["Submit"]])
    result = restricted.step(action)
    steps += 1
    if result.terminated or result.truncated:
        break
print(f"random episode ended after {steps} steps",
      "(terminated)" if result.terminated else "(truncated)")
