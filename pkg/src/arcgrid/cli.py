"""Operator command line: validate, stats, rollout, replay, gen, serve.

Exit codes: 0 success, 1 validation/replay failure, 2 usage error. All
fixed-seed output is byte-stable; pass --json for machine-readable form.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path

import numpy as np

from .env import BBoxWrapper, Environment, PRESET_NAMES, get_preset, sample_bbox_action
from .errors import ArcGridError, MalformedRecord, MalformedTask, ReplayDivergence
from .tasks import (
    EVAL_DIR,
    GeneratorSpec,
    TRAIN_DIR,
    Task,
    default_phase_schedule,
    derive_seed,
    gen_curriculum,
    gen_random_task,
    load_dataset,
    parse_generated_id,
    save_task,
)
from .trace import JsonlTraceWriter, TraceRecorder, read_trace, verify_trace

_RANDOM_SPEC = re.compile(r"^(\d+)x(\d+)(?:c(\d+))?$")


def _parse_random_spec(text: str) -> tuple[int, int, int]:
    m = _RANDOM_SPEC.match(text)
    if m is None:
        raise argparse.ArgumentTypeError(
            f"bad random spec {text!r}; expected HxW or HxWcK, e.g. 5x5c4"
        )
    h, w = int(m.group(1)), int(m.group(2))
    k = int(m.group(3)) if m.group(3) else 10
    return h, w, k


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arcgrid")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse every task under a dataset root")
    p.add_argument("data_root", type=Path)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("stats", help="task counts and dim/color histograms")
    p.add_argument("data_root", type=Path)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("rollout", help="seeded random rollout (optionally recorded)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--task", help="task id from --data-root")
    src.add_argument("--random-spec", type=_parse_random_spec, metavar="HxW[cK]",
                     help="generate random tasks, e.g. 5x5c4")
    p.add_argument("--data-root", type=Path)
    p.add_argument("--split", default=TRAIN_DIR, choices=[TRAIN_DIR, EVAL_DIR])
    p.add_argument("--preset", default="o2arc", choices=list(PRESET_NAMES))
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dense", action="store_true", help="dense pixel-penalty reward")
    p.add_argument("--max-steps", type=int, default=100, help="episode step cap")
    p.add_argument("--record", type=Path, help="write the trace to this JSONL file")
    p.add_argument("--bench", action="store_true", help="throughput benchmark mode")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("replay", help="re-run a trace and verify grid digests")
    p.add_argument("trace", type=Path)
    p.add_argument("--data-root", type=Path)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("gen", help="write generated task files")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--colors", type=int, default=10)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--phases", type=int,
                   help="episodes per phase of the 2,4,6,8,10-color curriculum")
    p.add_argument("--height", type=int, default=5)
    p.add_argument("--width", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data-root", type=Path)
    p.add_argument("--miniarc-root", type=Path)
    p.add_argument("--trace-dir", type=Path)
    p.add_argument("--session-ttl", type=float, default=3600.0)
    p.add_argument("--cors-origin", action="append", default=None)

    return parser


def _cmd_validate(args) -> int:
    if not args.data_root.is_dir():
        if args.json:
            print(json.dumps({"ok": False, "error": f"no such directory: {args.data_root}"},
                             sort_keys=True))
        else:
            print(f"INVALID: no such directory: {args.data_root}")
        return 1
    try:
        splits = load_dataset(args.data_root)
    except MalformedTask as exc:
        if args.json:
            print(json.dumps({"ok": False, "error": str(exc)}, sort_keys=True))
        else:
            print(f"INVALID: {exc}")
        return 1
    n_train = len(splits[TRAIN_DIR])
    n_eval = len(splits[EVAL_DIR])
    if args.json:
        print(json.dumps({"ok": True, "training": n_train, "evaluation": n_eval},
                         sort_keys=True))
    else:
        print(f"{n_train} training, {n_eval} evaluation tasks OK")
    return 0


def _cmd_stats(args) -> int:
    try:
        splits = load_dataset(args.data_root)
    except MalformedTask as exc:
        print(f"INVALID: {exc}")
        return 1
    out = {}
    for split, tasks in sorted(splits.items()):
        dim_hist: dict[str, int] = {}
        color_hist = [0] * 10
        for task in tasks:
            for g in task.all_grids():
                key = f"{g.shape[0]}x{g.shape[1]}"
                dim_hist[key] = dim_hist.get(key, 0) + 1
                counts = np.bincount(g.ravel(), minlength=10)
                for c in range(10):
                    color_hist[c] += int(counts[c])
        out[split] = {
            "tasks": len(tasks),
            "grids": sum(dim_hist.values()),
            "dim_histogram": dict(sorted(dim_hist.items())),
            "color_histogram": color_hist,
        }
    if args.json:
        print(json.dumps(out, sort_keys=True))
        return 0
    for split, info in out.items():
        print(f"{split}: {info['tasks']} tasks, {info['grids']} grids")
        top = sorted(info["dim_histogram"].items(), key=lambda kv: (-kv[1], kv[0]))[:5]
        for dims, count in top:
            print(f"  {dims}: {count}")
        print(f"  colors: {info['color_histogram']}")
    return 0


def _resolve_rollout_task(args, episode: int) -> Task:
    if args.random_spec is not None:
        h, w, k = args.random_spec
        return gen_random_task(GeneratorSpec(
            height=h, width=w, num_colors=k, seed=derive_seed(args.seed, episode)))
    if args.data_root is None:
        raise ArcGridError("--task requires --data-root")
    tasks = load_dataset(args.data_root)[args.split]
    for task in tasks:
        if task.id == args.task:
            return task
    raise ArcGridError(f"task {args.task!r} not found under {args.data_root}/{args.split}")


def _cmd_rollout(args) -> int:
    preset = get_preset(
        args.preset,
        reward_mode="dense" if args.dense else "sparse",
        max_steps=args.max_steps,
    )
    if args.bench:
        return _cmd_rollout_bench(args, preset)

    writer = None
    if args.record is not None:
        writer = JsonlTraceWriter(args.record, mode="w")
    env = TraceRecorder(
        BBoxWrapper(Environment(preset)),
        sink=writer,
        session_id=f"rollout-s{args.seed}",
    )
    rng = np.random.default_rng(args.seed)
    episode = 0
    env.reset(_resolve_rollout_task(args, episode))
    total_reward = 0.0
    solved = 0
    lines = []
    for i in range(args.steps):
        action = sample_bbox_action(rng, env.state.grid.shape, preset.allowed_ops)
        result = env.step(action)
        total_reward += result.reward
        if result.info.get("exact_match"):
            solved += 1
        lines.append(
            f"step={i + 1} op={action[4]} reward={result.reward:.6f}"
            f" terminated={str(result.terminated).lower()}"
        )
        if result.terminated or result.truncated:
            episode += 1
            env.reset(_resolve_rollout_task(args, episode))
    if writer is not None:
        writer.close()
    if args.json:
        print(json.dumps({
            "steps": args.steps, "episodes": episode, "solved": solved,
            "total_reward": round(total_reward, 9), "seed": args.seed,
            "preset": args.preset,
        }, sort_keys=True))
    else:
        for line in lines:
            print(line)
        print(f"summary: steps={args.steps} episodes={episode} solved={solved}"
              f" total_reward={total_reward:.6f}")
    return 0


def _cmd_rollout_bench(args, preset) -> int:
    import gc

    env = BBoxWrapper(Environment(preset))
    episode = 0
    task = _resolve_rollout_task(args, episode)
    h, w = task.test_pairs[0][0].shape
    env.reset(task)
    rng = np.random.default_rng(args.seed)
    allowed = list(preset.allowed_ops)
    total = args.steps
    batch = 8192
    done = 0
    step = env.step
    reset = env.reset
    gc_was_enabled = gc.isenabled()
    gc.disable()
    t0 = time.perf_counter()
    try:
        while done < total:
            n = min(batch, total - done)
            ops = rng.integers(0, len(allowed), size=n).tolist()
            r0s = rng.integers(0, h, size=n).tolist()
            c0s = rng.integers(0, w, size=n).tolist()
            r1s = rng.integers(0, h, size=n).tolist()
            c1s = rng.integers(0, w, size=n).tolist()
            for r0, c0, r1, c1, opi in zip(r0s, c0s, r1s, c1s, ops):
                result = step((r0, c0, r1, c1, allowed[opi]))
                if result.terminated or result.truncated:
                    reset()
                    episode += 1
            done += n
    finally:
        if gc_was_enabled:
            gc.enable()
    elapsed = time.perf_counter() - t0
    rate = total / elapsed
    if args.json:
        print(json.dumps({
            "steps": total, "episodes": episode,
            "elapsed_s": round(elapsed, 6), "steps_per_second": round(rate, 1),
        }, sort_keys=True))
    else:
        print(f"benchmark: {total} steps, {episode} episodes, "
              f"{elapsed:.3f}s, {rate:,.0f} steps/s")
    return 0


def _make_task_resolver(data_root: Path | None):
    cache: dict[str, Task] = {}
    loaded = {"done": False}

    def resolver(task_id: str) -> Task:
        spec = parse_generated_id(task_id)
        if spec is not None:
            return gen_random_task(spec)
        if not loaded["done"]:
            loaded["done"] = True
            if data_root is not None:
                for tasks in load_dataset(data_root).values():
                    for task in tasks:
                        cache[task.id] = task
        if task_id in cache:
            return cache[task_id]
        raise ArcGridError(
            f"cannot resolve task {task_id!r}; pass --data-root for dataset tasks"
        )

    return resolver


def _cmd_replay(args) -> int:
    try:
        records = read_trace(args.trace)
        report = verify_trace(records, _make_task_resolver(args.data_root))
    except (MalformedRecord, ReplayDivergence, ArcGridError) as exc:
        if args.json:
            print(json.dumps({"ok": False, "error": str(exc)}, sort_keys=True))
        else:
            print(f"replay FAILED: {exc}")
        return 1
    if args.json:
        print(json.dumps({"ok": True, "records": report.records,
                          "sessions": report.sessions}, sort_keys=True))
    else:
        print(f"replay OK: {report.records} records, {report.sessions} sessions")
    return 0


def _export_task(task: Task, out_dir: Path) -> None:
    # Self-demonstrating export (demo = test pair) so the files satisfy the
    # dataset schema and the output directory loads as a dataset split.
    exportable = Task(id=task.id, source=task.source,
                      demo_pairs=task.demo_pairs or list(task.test_pairs),
                      test_pairs=task.test_pairs)
    save_task(exportable, out_dir / f"{task.id}.json")


def _cmd_gen(args) -> int:
    args.out.mkdir(parents=True, exist_ok=True)
    written = []
    if args.phases is not None:
        spec = GeneratorSpec(height=args.height, width=args.width, seed=args.seed,
                             phase_schedule=default_phase_schedule(args.phases))
        for task, info in gen_curriculum(spec):
            _export_task(task, args.out)
            written.append({"id": task.id, "phase": info.phase,
                            "num_colors": info.num_colors})
    else:
        for i in range(args.count):
            spec = GeneratorSpec(height=args.height, width=args.width,
                                 num_colors=args.colors,
                                 seed=derive_seed(args.seed, i))
            task = gen_random_task(spec)
            _export_task(task, args.out)
            written.append({"id": task.id, "num_colors": args.colors})
    if args.json:
        print(json.dumps({"written": written, "out": str(args.out)}, sort_keys=True))
    else:
        for entry in written:
            print(entry["id"])
        print(f"wrote {len(written)} tasks to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    roots = {}
    if args.data_root is not None:
        roots["arc"] = args.data_root
    if args.miniarc_root is not None:
        roots["mini-arc"] = args.miniarc_root
    config = ServiceConfig(
        data_roots=roots,
        trace_dir=args.trace_dir,
        session_ttl=args.session_ttl,
        cors_origins=tuple(args.cors_origin) if args.cors_origin else ("*",),
    )
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "validate": _cmd_validate,
        "stats": _cmd_stats,
        "rollout": _cmd_rollout,
        "replay": _cmd_replay,
        "gen": _cmd_gen,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except ArcGridError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
