"""Belief over the human's hidden subtask.

The update is multiplicative: feasibility under the human's KB is a hard
0/1 gate, heading alignment and approach progress enter as exponential
evidence weights. The belief re-initializes to uniform-over-feasible when
the human's held item changes (a subtask boundary) or when every hypothesis
is gated out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .actions import Cell, Heading, HEADING_VECTORS
from .kb import KnowledgeBase
from .layout import Layout
from .pathing import distance, station_goal_cells
from .state import AgentState, JointState, WorldState
from .items import Item
from .subtasks import SUBTASK_STATION, Subtask, available_subtasks

INF = float("inf")


@dataclass(frozen=True, slots=True)
class Observation:
    human_position: Cell
    human_orientation: Heading
    human_held: Item | None
    robot: AgentState
    world: WorldState
    human_kb: KnowledgeBase


def observe(state: JointState) -> Observation:
    return Observation(
        human_position=state.human.position,
        human_orientation=state.human.orientation,
        human_held=state.human.held,
        robot=state.robot,
        world=state.world,
        human_kb=state.human_kb)


@dataclass(frozen=True)
class Belief:
    probs: tuple[tuple[Subtask, float], ...]

    def prob(self, subtask: Subtask) -> float:
        for s, p in self.probs:
            if s == subtask:
                return p
        return 0.0

    def support(self) -> tuple[Subtask, ...]:
        return tuple(s for s, p in self.probs if p > 0)

    def as_dict(self) -> dict[Subtask, float]:
        return dict(self.probs)


def _normalized(weights: dict[Subtask, float]) -> Belief | None:
    total = sum(weights.values())
    if total <= 0:
        return None
    return Belief(tuple(sorted(((s, w / total) for s, w in weights.items()
                                if w > 0), key=lambda e: e[0].value)))


def init_belief(obs: Observation, chop_interacts: int = 2) -> Belief:
    options = sorted(available_subtasks(obs.human_kb, obs.human_held, chop_interacts),
                     key=lambda s: s.value)
    p = 1.0 / len(options)
    return Belief(tuple((s, p) for s in options))


def _target_station_cell(layout: Layout, subtask: Subtask,
                         position: Cell) -> Cell | None:
    tile = SUBTASK_STATION.get(subtask)
    if tile is None:
        return None
    best: tuple[float, Cell] | None = None
    for station in layout.station_cells(tile):
        d = distance(layout, position, layout.adjacent_floor(station))
        if d == INF:
            continue
        if best is None or (d, station) < best:
            best = (d, station)
    return best[1] if best else None


def _alignment(orientation: Heading, position: Cell, target: Cell) -> float:
    vx = target[0] - position[0]
    vy = target[1] - position[1]
    norm = math.hypot(vx, vy)
    if norm == 0:
        return 1.0
    ox, oy = HEADING_VECTORS[orientation]
    return (ox * vx + oy * vy) / norm


def belief_update(belief: Belief, prev: Observation, cur: Observation,
                  layout: Layout, alpha: float = 1.0, beta: float = 1.0,
                  chop_interacts: int = 2) -> Belief:
    if cur.human_held != prev.human_held:
        return init_belief(cur, chop_interacts)

    feasible = available_subtasks(cur.human_kb, cur.human_held, chop_interacts)
    weights: dict[Subtask, float] = {}
    for subtask, prior in belief.probs:
        if prior <= 0 or subtask not in feasible:
            continue
        align = 0.0
        gain = 0.0
        target = _target_station_cell(layout, subtask, cur.human_position)
        if target is not None:
            align = _alignment(cur.human_orientation, cur.human_position, target)
            goals = station_goal_cells(layout, SUBTASK_STATION[subtask])
            d_prev = distance(layout, prev.human_position, goals)
            d_cur = distance(layout, cur.human_position, goals)
            if d_prev < INF and d_cur < INF:
                gain = d_prev - d_cur
        weights[subtask] = prior * math.exp(alpha * align) * math.exp(beta * gain)

    updated = _normalized(weights)
    return updated if updated is not None else init_belief(cur, chop_interacts)
