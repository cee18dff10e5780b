"""Seeded experiment harness: episodes, logs, replay, and suite summaries.

Episode logs are JSONL: one header, one record per timestep, one footer,
serialized canonically so identical (layout, planner, seed, config) runs
produce byte-identical files. Replay re-simulates a log's recorded robot
actions while re-deriving the human's actions from its seeded policy, so a
log is verified end to end without re-running the planner.
"""

from __future__ import annotations

import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .actions import Action
from .belief import init_belief, belief_update, observe
from .config import RunConfig
from .dynamics import is_terminal, step
from .human import HumanPolicyState, advance
from .kb import KnowledgeBase
from .layout import Layout, layout_text, parse_layout
from .perception import kb_gap
from .planner import StreamKey, planner_view, select_action
from .state import initial_joint_state

HUMAN_STREAM_TAG = 11  # keeps the human rng independent of planner streams


def _dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _ack_changes(before: KnowledgeBase, after: KnowledgeBase) -> int:
    changes = 0
    changes += before.grill != after.grill
    changes += before.sink != after.sink
    changes += before.board != after.board
    changes += (before.robot_held != after.robot_held
                or before.robot_seen_at != after.robot_seen_at)
    b = dict(before.counters)
    a = dict(after.counters)
    for cell in b.keys() | a.keys():
        changes += b.get(cell) != a.get(cell)
    return changes


@dataclass
class EpisodeLog:
    header: dict
    records: list[dict]
    footer: dict
    wall_ms: list[float]  # per-decision planner wall time, not serialized

    def lines(self) -> list[str]:
        return ([_dumps(self.header)] + [_dumps(r) for r in self.records]
                + [_dumps(self.footer)])

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.text())


def parse_log(text: str) -> EpisodeLog:
    rows = [json.loads(line) for line in text.splitlines() if line.strip()]
    if len(rows) < 2 or rows[0].get("type") != "header" \
            or rows[-1].get("type") != "footer":
        raise ValueError("not an episode log")
    return EpisodeLog(header=rows[0], records=rows[1:-1], footer=rows[-1],
                      wall_ms=[])


def run_episode(layout: Layout, planner_id: str, cfg: RunConfig,
                seed: int) -> EpisodeLog:
    dom = cfg.domain_config(layout)
    pcfg = cfg.planner_config(dom, planner_id)
    state = initial_joint_state(layout)
    policy = HumanPolicyState()
    human_rng = np.random.default_rng((seed, HUMAN_STREAM_TAG))
    obs = planner_view(observe(state), pcfg)
    belief = init_belief(obs, cfg.chop_interacts)

    records: list[dict] = []
    wall_ms: list[float] = []
    deliveries = abandonments = robot_actions = human_actions = 0
    gap_total = 0

    t = 0
    while not is_terminal(state, layout):
        key = StreamKey(seed, t)
        robot_action, diag = select_action(belief, obs, pcfg, key)
        wall_ms.append(diag["wall_ms"])
        policy, human_action = advance(policy, state.human, state.human_kb,
                                       dom, human_rng)
        prev = state
        prev_obs = obs
        state = replace(state, human_subtask=policy.current_subtask)
        state = step(state, robot_action, human_action, dom)

        delivered = state.world.orders_remaining < prev.world.orders_remaining
        abandoned = policy.abandonments > abandonments
        acks = _ack_changes(prev.human_kb, state.human_kb)
        gap = kb_gap(state.human_kb, state.world, state.robot)
        deliveries += delivered
        abandonments = policy.abandonments
        robot_actions += robot_action != Action.STAY
        human_actions += human_action != Action.STAY
        gap_total += gap

        records.append({
            "type": "record", "t": t,
            "robot": robot_action.value, "human": human_action.value,
            "subtask": policy.current_subtask.value,
            "kb_gap": gap,
            "events": {"delivery": bool(delivered),
                       "abandonment": bool(abandoned),
                       "kb_ack": acks},
            "planner": {"q": diag["q"], "m": diag["m"]},
        })

        obs = planner_view(observe(state), pcfg)
        belief = belief_update(belief, prev_obs, obs, layout,
                               cfg.alpha, cfg.beta, cfg.chop_interacts)
        t += 1

    header = {
        "type": "header", "layout": layout.name, "planner": planner_id,
        "seed": seed, "config_hash": cfg.config_hash(),
        "layout_text": layout_text(layout),
    }
    footer = {
        "type": "footer", "total_timesteps": t,
        "robot_actions": robot_actions, "human_actions": human_actions,
        "deliveries": deliveries, "abandonments": abandonments,
        "mean_kb_gap": (gap_total / t) if t else 0.0,
        "interrupts": 0,
        "completed": state.world.orders_remaining == 0,
    }
    return EpisodeLog(header=header, records=records, footer=footer,
                      wall_ms=wall_ms)


def replay_episode(log: EpisodeLog, cfg: RunConfig) -> list[str]:
    """Re-simulate a log; returns human-readable mismatches (empty = ok)."""
    mismatches: list[str] = []
    header = log.header
    if header.get("config_hash") != cfg.config_hash():
        mismatches.append("config hash differs from the replay configuration")
        return mismatches
    layout = parse_layout(header["layout_text"], name=header["layout"])
    dom = cfg.domain_config(layout)
    state = initial_joint_state(layout)
    policy = HumanPolicyState()
    human_rng = np.random.default_rng((header["seed"], HUMAN_STREAM_TAG))
    deliveries = abandonments = robot_actions = human_actions = 0
    gap_total = 0

    for record in log.records:
        t = record["t"]
        robot_action = Action(record["robot"])
        policy, human_action = advance(policy, state.human, state.human_kb,
                                       dom, human_rng)
        if human_action.value != record["human"]:
            mismatches.append(
                f"t={t}: human action {human_action.value} != {record['human']}")
            return mismatches
        prev = state
        state = replace(state, human_subtask=policy.current_subtask)
        state = step(state, robot_action, human_action, dom)

        delivered = state.world.orders_remaining < prev.world.orders_remaining
        abandoned = policy.abandonments > abandonments
        abandonments = policy.abandonments
        deliveries += delivered
        robot_actions += robot_action != Action.STAY
        human_actions += human_action != Action.STAY
        gap = kb_gap(state.human_kb, state.world, state.robot)
        gap_total += gap
        acks = _ack_changes(prev.human_kb, state.human_kb)

        expected = {"delivery": bool(delivered), "abandonment": bool(abandoned),
                    "kb_ack": acks}
        if record["kb_gap"] != gap:
            mismatches.append(f"t={t}: kb_gap {gap} != logged {record['kb_gap']}")
        if record["events"] != expected:
            mismatches.append(f"t={t}: events {expected} != logged {record['events']}")
        if mismatches:
            return mismatches

    footer = log.footer
    recomputed = {
        "total_timesteps": len(log.records),
        "robot_actions": robot_actions, "human_actions": human_actions,
        "deliveries": deliveries, "abandonments": abandonments,
        "mean_kb_gap": (gap_total / len(log.records)) if log.records else 0.0,
    }
    for field_name, value in recomputed.items():
        if footer.get(field_name) != value:
            mismatches.append(
                f"footer.{field_name}: recomputed {value} != logged {footer.get(field_name)}")
    if not is_terminal(state, layout):
        mismatches.append("log ends before a terminal state")
    return mismatches


@dataclass(frozen=True)
class SummaryRow:
    layout: str
    planner: str
    seeds: int
    mean_actions: float
    std_actions: float
    mean_kb_gap: float
    mean_abandonments: float


@dataclass
class SummaryTable:
    rows: list[SummaryRow]

    def to_csv(self) -> str:
        lines = ["layout,planner,seeds,mean_actions,std_actions,"
                 "mean_kb_gap,mean_abandonments"]
        for r in self.rows:
            lines.append(f"{r.layout},{r.planner},{r.seeds},"
                         f"{r.mean_actions:.3f},{r.std_actions:.3f},"
                         f"{r.mean_kb_gap:.4f},{r.mean_abandonments:.3f}")
        return "\n".join(lines) + "\n"


def summarize(results: dict[tuple[str, str], list[dict]]) -> SummaryTable:
    rows = []
    for (layout_name, planner_id), footers in sorted(results.items()):
        actions = [f["total_timesteps"] for f in footers]
        rows.append(SummaryRow(
            layout=layout_name, planner=planner_id, seeds=len(footers),
            mean_actions=statistics.fmean(actions),
            std_actions=statistics.stdev(actions) if len(actions) > 1 else 0.0,
            mean_kb_gap=statistics.fmean(f["mean_kb_gap"] for f in footers),
            mean_abandonments=statistics.fmean(
                f["abandonments"] for f in footers)))
    return SummaryTable(rows)


def _episode_worker(args: tuple) -> tuple[str, str, int, str]:
    name, text, planner_id, seed, cfg = args
    layout = parse_layout(text, name=name)
    log = run_episode(layout, planner_id, cfg, seed)
    return name, planner_id, seed, log.text()


def run_suite(layouts: list[Layout], planners: list[str], seeds: int,
              cfg: RunConfig, out_dir: str | Path | None = None,
              workers: int = 1) -> tuple[SummaryTable, dict[tuple, EpisodeLog]]:
    jobs = [(layout.name, layout_text(layout), planner_id, seed, cfg)
            for layout in layouts for planner_id in planners
            for seed in range(seeds)]
    texts: dict[tuple, str] = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for name, planner_id, seed, text in pool.map(_episode_worker, jobs):
                texts[(name, planner_id, seed)] = text
    else:
        for job in jobs:
            name, planner_id, seed, text = _episode_worker(job)
            texts[(name, planner_id, seed)] = text

    logs: dict[tuple, EpisodeLog] = {}
    results: dict[tuple[str, str], list[dict]] = {}
    for (name, planner_id, seed), text in sorted(texts.items()):
        log = parse_log(text)
        logs[(name, planner_id, seed)] = log
        results.setdefault((name, planner_id), []).append(log.footer)
        if out_dir is not None:
            out = Path(out_dir)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{name}__{planner_id}__seed{seed}.log").write_text(text)

    table = summarize(results)
    if out_dir is not None:
        (Path(out_dir) / "summary.csv").write_text(table.to_csv())
    return table, logs
