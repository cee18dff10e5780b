"""The fixed myopic human policy.

The human selects uniformly among the subtasks its KB says are feasible,
walks a shortest path to the target station (treating the robot's KB-known
cell as an obstacle), turns, and interacts until the subtask's postcondition
shows up in its KB. A subtask that turns infeasible while the human holds an
item triggers the drop-off rule: carry the item to the nearest KB-empty
counter, leave it there, and pick something else; each such abandonment is
counted.

Paths are replanned from scratch every step. Because the planner is a
deterministic BFS with canonical tie-breaks, this reproduces exactly the
"commit to a path, replan when the KB's robot cell changes" behavior while
also coping with bumps into an unseen robot.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .actions import Action, HEADING_ACTIONS, Heading, ahead
from .items import CLEAN, DIRTY, RAW, Dish, Item, Meat, Onion, Plate
from .kb import KnowledgeBase
from .layout import COUNTER, Layout
from .pathing import (distance, facing_station, next_move, station_goal_cells)
from .state import AgentState, DomainConfig
from .subtasks import SUBTASK_STATION, Subtask, available_subtasks, board_chopped

INF = float("inf")


@dataclass(frozen=True, slots=True)
class HumanPolicyState:
    current_subtask: Subtask = Subtask.IDLE
    dropping: bool = False      # executing the drop-off rule
    abandonments: int = 0       # cumulative abandonment events
    idle_ticks: int = 0         # consecutive idle decisions, drives scanning


_SCAN_ORDER = {"N": "E", "E": "S", "S": "W", "W": "N"}


def _scan_period(cfg: DomainConfig) -> int:
    return cfg.fov.ack_delay + 1


def select_subtask(kb: KnowledgeBase, held: Item | None, rng: np.random.Generator,
                   chop_interacts: int = 2) -> Subtask:
    """Uniform choice over the feasible non-idle subtasks; Idle when none."""
    options = sorted(available_subtasks(kb, held, chop_interacts) - {Subtask.IDLE})
    if not options:
        return Subtask.IDLE
    if len(options) == 1:
        return options[0]
    return options[int(rng.integers(len(options)))]


def _subtask_done(subtask: Subtask, kb: KnowledgeBase, held: Item | None,
                  cfg: DomainConfig) -> bool:
    if subtask == Subtask.PICKUP_MEAT:
        return isinstance(held, Meat) and held.status == RAW
    if subtask == Subtask.PICKUP_ONION:
        return isinstance(held, Onion) and held.chops == 0
    if subtask == Subtask.PICKUP_DIRTY_PLATE:
        return isinstance(held, Plate) and held.status == DIRTY
    if subtask == Subtask.PICKUP_CLEAN_PLATE:
        return isinstance(held, Plate) and held.status == CLEAN
    if subtask in (Subtask.PUT_MEAT_ON_GRILL, Subtask.PUT_ONION_ON_BOARD,
                   Subtask.PUT_PLATE_IN_SINK, Subtask.DELIVER):
        return held is None
    if subtask == Subtask.CHOP_ONION:
        return board_chopped(kb.board, cfg.chop_interacts)
    if subtask == Subtask.WASH_PLATE:
        return kb.sink is not None and kb.sink.status == CLEAN
    if subtask == Subtask.PLATE_STEAK:
        return isinstance(held, Dish) and held.has_steak
    if subtask == Subtask.ADD_GARNISH:
        return isinstance(held, Dish) and held.has_steak and held.has_garnish
    return False


def plan_step(human: AgentState, kb: KnowledgeBase, subtask: Subtask,
              layout: Layout) -> Action:
    """Next action of the shortest path-then-face-then-interact plan."""
    if subtask == Subtask.IDLE:
        return Action.STAY
    tile = SUBTASK_STATION[subtask]
    heading = facing_station(layout, human.position, tile)
    if heading is not None:
        if human.orientation == heading:
            return Action.INTERACT
        return HEADING_ACTIONS[heading]
    goals = station_goal_cells(layout, tile)
    move = next_move(layout, human.position, goals, kb.robot_seen_at)
    return move if move is not None else Action.STAY


def _reachable(human: AgentState, kb: KnowledgeBase, subtask: Subtask,
               layout: Layout) -> bool:
    tile = SUBTASK_STATION[subtask]
    if facing_station(layout, human.position, tile) is not None:
        return True
    goals = station_goal_cells(layout, tile)
    return distance(layout, human.position, goals, kb.robot_seen_at) < INF


def _empty_counter_goals(kb: KnowledgeBase, layout: Layout):
    kb_c = dict(kb.counters)
    cells = set()
    for counter in layout.counter_cells:
        if kb_c.get(counter) is None:
            cells.update(layout.adjacent_floor(counter))
    return tuple(sorted(cells))


def _drop_action(human: AgentState, kb: KnowledgeBase, layout: Layout) -> Action:
    kb_c = dict(kb.counters)
    for heading in HEADING_ACTIONS:  # canonical N,S,W,E order
        target = ahead(human.position, heading)
        if (layout.in_bounds(target) and layout.tile_at(target) == COUNTER
                and kb_c.get(target) is None):
            if human.orientation == heading:
                return Action.INTERACT
            return HEADING_ACTIONS[heading]
    goals = _empty_counter_goals(kb, layout)
    if not goals:
        return Action.STAY
    move = next_move(layout, human.position, goals, kb.robot_seen_at)
    return move if move is not None else Action.STAY


def advance(policy: HumanPolicyState, human: AgentState, kb: KnowledgeBase,
            cfg: DomainConfig, rng: np.random.Generator
            ) -> tuple[HumanPolicyState, Action]:
    """One decision of the human Markov chain: maybe re-select, then act."""
    layout = cfg.layout
    subtask = policy.current_subtask
    dropping = policy.dropping
    abandonments = policy.abandonments

    if dropping:
        if human.held is None:
            dropping = False
            subtask = Subtask.IDLE
        else:
            return (HumanPolicyState(subtask, True, abandonments),
                    _drop_action(human, kb, layout))

    if subtask != Subtask.IDLE and _subtask_done(subtask, kb, human.held, cfg):
        subtask = Subtask.IDLE

    available = available_subtasks(kb, human.held, cfg.chop_interacts)
    if subtask != Subtask.IDLE:
        if subtask not in available or not _reachable(human, kb, subtask, layout):
            if human.held is not None:
                # mid-subtask dead end while carrying: shed the item first
                return (HumanPolicyState(subtask, True, abandonments + 1),
                        _drop_action(human, kb, layout))
            subtask = Subtask.IDLE

    if subtask == Subtask.IDLE:
        options = [s for s in sorted(available - {Subtask.IDLE})
                   if _reachable(human, kb, s, layout)]
        if options:
            pick = options[0] if len(options) == 1 else options[int(rng.integers(len(options)))]
            subtask = pick
        elif human.held is not None:
            # nothing to do with a full hand: shed the item so work can go on
            return (HumanPolicyState(Subtask.IDLE, True, abandonments),
                    _drop_action(human, kb, layout))

    if subtask == Subtask.IDLE:
        robot_evidence_fresh = kb.pending and kb.pending[-1] > 0
        if kb.robot_seen_at is not None and robot_evidence_fresh:
            # step aside for a robot pressed against us instead of blocking
            # it; only current sightings count, not stale memories
            rx, ry = kb.robot_seen_at
            hx, hy = human.position
            if abs(rx - hx) + abs(ry - hy) == 1:
                for heading, move in HEADING_ACTIONS.items():
                    target = ahead(human.position, heading)
                    if target in layout.floor_cells and target != kb.robot_seen_at:
                        return (HumanPolicyState(subtask, False, abandonments, 0),
                                move)
        # nothing looks feasible: scan the room now and then, dwelling long
        # enough per heading for acknowledgments to land
        idle_ticks = policy.idle_ticks + 1
        if idle_ticks % _scan_period(cfg) == 0:
            heading = Heading(_SCAN_ORDER[human.orientation.value])
            return (HumanPolicyState(subtask, False, abandonments, idle_ticks),
                    HEADING_ACTIONS[heading])
        return (HumanPolicyState(subtask, False, abandonments, idle_ticks),
                Action.STAY)

    action = plan_step(human, kb, subtask, layout)
    return HumanPolicyState(subtask, False, abandonments, 0), action
