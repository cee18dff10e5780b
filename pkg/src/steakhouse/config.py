"""Run configuration: domain timers, perception, planner, and belief knobs.

One RunConfig drives an episode end to end; the planner id ("fov" or
"baseline") only switches the planner's internal human-perception model.
Configs load from YAML or JSON files and hash canonically so episode logs
can pin the exact configuration they were produced under.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import yaml

from .kb import FULL_PERCEPTION, FovParams
from .layout import Layout
from .planner import PlannerConfig
from .state import DomainConfig

PLANNER_IDS = ("fov", "baseline")


@dataclass(frozen=True)
class RunConfig:
    cook_time: int = 10
    wash_interacts: int = 2
    chop_interacts: int = 2
    human_fov: FovParams = field(default_factory=FovParams)
    rollout_count: int = 20
    rollout_depth: int = 5
    lookahead_depth: int = 12
    gamma: float = 0.95
    step_reward: float = -1.0
    shaping_rewards: tuple[tuple[str, float], ...] = (
        ("WashPlate", 10.0), ("Deliver", 100.0))
    belief_floor: float = 0.01
    # Wall-clock budget enforcement trades byte-identical determinism for
    # latency control; episode logs need the former, live sessions the latter.
    time_budget_ms: float | None = None
    alpha: float = 1.0   # belief weight on heading alignment
    beta: float = 1.0    # belief weight on approach progress
    tick_ms: int = 400
    pause_on_choice: bool = False

    def domain_config(self, layout: Layout) -> DomainConfig:
        return DomainConfig(layout=layout, cook_time=self.cook_time,
                            wash_interacts=self.wash_interacts,
                            chop_interacts=self.chop_interacts,
                            fov=self.human_fov)

    def planner_config(self, domain: DomainConfig, planner_id: str) -> PlannerConfig:
        if planner_id not in PLANNER_IDS:
            raise ValueError(f"unknown planner id {planner_id!r}")
        model_fov = self.human_fov if planner_id == "fov" else FULL_PERCEPTION
        return PlannerConfig(
            domain=domain, rollout_count=self.rollout_count,
            rollout_depth=self.rollout_depth,
            lookahead_depth=self.lookahead_depth, gamma=self.gamma,
            step_reward=self.step_reward, shaping_rewards=self.shaping_rewards,
            human_fov=model_fov, belief_floor=self.belief_floor,
            time_budget_ms=self.time_budget_ms)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["human_fov"] = {"fov_angle": self.human_fov.fov_angle,
                            "ack_delay": self.human_fov.ack_delay,
                            "occlusion": self.human_fov.occlusion}
        out["shaping_rewards"] = [[k, v] for k, v in self.shaping_rewards]
        return out

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True,
                               separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def run_config_from_dict(data: dict) -> RunConfig:
    cfg = RunConfig()
    fov = data.pop("human_fov", None)
    if fov is not None:
        cfg = replace(cfg, human_fov=FovParams(**fov))
    shaping = data.pop("shaping_rewards", None)
    if shaping is not None:
        cfg = replace(cfg, shaping_rewards=tuple((k, float(v)) for k, v in shaping))
    known = {f for f in RunConfig.__dataclass_fields__}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return replace(cfg, **data)


def load_run_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    text = Path(path).read_text()
    data = yaml.safe_load(text) or {}
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a mapping")
    return run_config_from_dict(data)
