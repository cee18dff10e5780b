"""Command-line entry points: run one episode, run the benchmark suite,
verify a log by replay, or serve interactive sessions."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import parse_log, replay_episode, run_episode, run_suite
from .config import PLANNER_IDS, load_run_config
from .layout import (Layout, load_packaged_layout, packaged_layout_names,
                     parse_layout)


def _resolve_layout(spec: str) -> Layout:
    path = Path(spec)
    if path.exists():
        return parse_layout(path.read_text(), name=path.stem)
    return load_packaged_layout(spec)


def _resolve_layouts(spec: str) -> list[Layout]:
    path = Path(spec)
    if path.is_dir():
        files = sorted(path.glob("*.layout"))
        if not files:
            raise SystemExit(f"no *.layout files in {path}")
        return [parse_layout(f.read_text(), name=f.stem) for f in files]
    return [_resolve_layout(name) for name in spec.split(",")]


def _cmd_run(args) -> int:
    layout = _resolve_layout(args.layout)
    cfg = load_run_config(args.config)
    log = run_episode(layout, args.planner, cfg, args.seed)
    out = Path(args.out)
    log.write(out)
    footer = log.footer
    print(f"wrote {out}: {footer['total_timesteps']} timesteps, "
          f"{footer['deliveries']} deliveries, "
          f"completed={footer['completed']}")
    return 0


def _cmd_bench(args) -> int:
    layouts = _resolve_layouts(args.layouts)
    planners = args.planners.split(",")
    for p in planners:
        if p not in PLANNER_IDS:
            raise SystemExit(f"unknown planner {p!r} (choose from {PLANNER_IDS})")
    cfg = load_run_config(args.config)
    table, _ = run_suite(layouts, planners, args.seeds, cfg,
                         out_dir=args.out, workers=args.workers)
    print(table.to_csv(), end="")
    return 0


def _cmd_replay(args) -> int:
    cfg = load_run_config(args.config)
    log = parse_log(Path(args.log).read_text())
    mismatches = replay_episode(log, cfg)
    if mismatches:
        print(f"replay FAILED for {args.log}:")
        for m in mismatches:
            print(f"  {m}")
        return 1
    print(f"replay ok: {args.log} ({log.footer['total_timesteps']} timesteps)")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    layout = _resolve_layout(args.layout)
    cfg = load_run_config(args.config)
    app = create_app(layout, args.planner, cfg)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="steakhouse",
        description="Cooperative cooking gridworld with an FOV-aware planner")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one episode and write its log")
    p_run.add_argument("--layout", required=True,
                       help="layout file or packaged name "
                            f"({', '.join(packaged_layout_names())})")
    p_run.add_argument("--planner", choices=PLANNER_IDS, default="fov")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--config", default=None)
    p_run.set_defaults(fn=_cmd_run)

    p_bench = sub.add_parser("bench", help="run the planner/layout/seed matrix")
    p_bench.add_argument("--layouts", required=True,
                         help="directory of .layout files or comma-separated names")
    p_bench.add_argument("--planners", default="fov,baseline")
    p_bench.add_argument("--seeds", type=int, default=10)
    p_bench.add_argument("--out", required=True)
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.add_argument("--config", default=None)
    p_bench.set_defaults(fn=_cmd_bench)

    p_replay = sub.add_parser("replay", help="re-simulate a log and verify it")
    p_replay.add_argument("--log", required=True)
    p_replay.add_argument("--config", default=None)
    p_replay.set_defaults(fn=_cmd_replay)

    p_serve = sub.add_parser("serve", help="serve interactive play sessions")
    p_serve.add_argument("--layout", required=True)
    p_serve.add_argument("--planner", choices=PLANNER_IDS, default="fov")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--config", default=None)
    p_serve.set_defaults(fn=_cmd_serve)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
