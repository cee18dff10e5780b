"""Hierarchical online planner, aware of the human's field of view.

Per decision, for every action and every plausible human subtask, the
planner rolls the world forward a few steps (robot: the action then random
continuations; human: the myopic policy with its KB evolving under the
planner's human-perception model). Endpoint states are deduplicated into a
sampled transition estimate, projected into a position-free abstract state,
and valued by a short best-chain search whose edge costs map abstract events
back onto the endpoint's concrete agent positions. Action values combine per
the QMDP rule: hypothesis-weighted one-step-reward-plus-discounted-value.

The baseline (full-perception) variant is this same planner configured with
a 360-degree, delay-1 human model; it additionally treats the human's KB as
identical to the world when forming rollout start states and beliefs.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np

from .actions import (ACTIONS, ACTION_INDEX, Action, Cell, HEADING_ACTIONS,
                      MOVE_HEADINGS)
from .belief import Belief, Observation
from .human import HumanPolicyState, _subtask_done, advance
from .items import (CLEAN, COOKED, COOKING, DIRTY, IN_SINK, RAW,
                    Dish, Item, Meat, Onion, Plate)
from .kb import FovParams, FULL_PERCEPTION
from .layout import (BOARD, COUNTER, GRILL, Layout, MEAT_DISPENSER,
                     ONION_DISPENSER, PLATE_DISPENSER, SERVING, SINK)
from .pathing import (facing_cell_heading, facing_station, next_move,
                      station_goal_cells)
from .perception import kb_from_world
from .state import AgentState, DomainConfig, JointState
from .subtasks import SUBTASK_INDEX, Subtask
from .dynamics import step

log = logging.getLogger(__name__)

INF = float("inf")

ROBOT = "robot"
HUMAN = "human"


@dataclass(frozen=True, slots=True)
class PlannerConfig:
    domain: DomainConfig
    rollout_count: int = 20        # M sampled trajectories per (action, hypothesis)
    rollout_depth: int = 5         # n actions per trajectory, first one committed
    lookahead_depth: int = 12       # abstract transitions in the value search
    gamma: float = 0.95
    step_reward: float = -1.0
    shaping_rewards: tuple[tuple[str, float], ...] = (
        ("WashPlate", 10.0), ("Deliver", 100.0))
    human_fov: FovParams = field(default_factory=FovParams)
    belief_floor: float = 0.01
    time_budget_ms: float | None = 1000.0
    exhaustive: bool = False       # enumerate all continuations instead of sampling

    def reward_for(self, event: str) -> float:
        for name, value in self.shaping_rewards:
            if name == event:
                return value
        return 0.0

    def assumes_full_perception(self) -> bool:
        return self.human_fov.is_full_perception()

    def _cache_token(self) -> tuple:
        dom = self.domain
        return (self.lookahead_depth, self.shaping_rewards,
                dom.cook_time, dom.wash_interacts, dom.chop_interacts)


@dataclass(frozen=True, slots=True)
class AbstractState:
    grill_status: Meat | None
    sink_status: Plate | None
    board_status: Onion | None
    orders_remaining: int
    robot_held: Item | None
    human_held: Item | None
    human_subtask: Subtask
    plate_stack: int = 0  # undispensed plates; chains must not mint plateware


def abstract(s: JointState) -> AbstractState:
    """Position- and orientation-free projection; the KB is dropped."""
    return AbstractState(
        grill_status=s.world.grill,
        sink_status=s.world.sink,
        board_status=s.world.board,
        orders_remaining=s.world.orders_remaining,
        robot_held=s.robot.held,
        human_held=s.human.held,
        human_subtask=s.human_subtask,
        plate_stack=s.world.plate_stack)


@dataclass(frozen=True, slots=True)
class AbstractEvent:
    kind: str               # subtask name, or a reclaim pseudo-event
    agent: str              # ROBOT or HUMAN
    station: str            # tile char the acting agent must reach
    interacts: int
    wait: int               # residual grill time folded into plating
    reward: float
    next_state: AbstractState
    station_cell: Cell | None = None  # exact cell target (reclaim events)


@dataclass(frozen=True, slots=True)
class Outcome:
    state: JointState       # first representative of the equivalence class
    freq: float
    acc_reward: float       # discounted shaping rewards collected in-rollout
    end_discount: float     # gamma^(steps-1), weights the endpoint value
    anchor: tuple[Cell, Cell]  # (robot, human) endpoint positions


@dataclass(frozen=True, slots=True)
class TransitionEstimate:
    source: JointState
    action: Action
    outcomes: tuple[Outcome, ...]


@dataclass(frozen=True, slots=True)
class StreamKey:
    """Deterministic rng derivation root for one planning decision.

    Streams are shared across candidate actions (common random numbers):
    every action is evaluated against the same random continuations, so the
    argmax compares paired samples instead of independent noise.
    """
    seed: int
    timestep: int

    def rng(self, hyp_index: int) -> np.random.Generator:
        return np.random.default_rng((self.seed, 7, self.timestep, hyp_index))


def _is_raw_meat(i): return isinstance(i, Meat) and i.status == RAW
def _is_whole_onion(i): return isinstance(i, Onion) and i.chops == 0
def _is_dirty_plate(i): return isinstance(i, Plate) and i.status == DIRTY
def _is_clean_plate(i): return isinstance(i, Plate) and i.status == CLEAN
def _is_plateware(i): return isinstance(i, (Plate, Dish))


def abstract_successors(a: AbstractState, cfg: PlannerConfig,
                        human_active: bool | None = None) -> tuple[AbstractEvent, ...]:
    """Single-event abstract transitions with the acting agent bound.

    The robot may take any physically sensible event. The human contributes
    its current subtask and, once it has been seen working (``human_active``),
    keeps chaining feasible subtasks as if fully informed; a human observed
    idle stays inert, because an idle endpoint means its KB offered nothing,
    and only the rollout stage can predict when that changes.
    """
    if human_active is None:
        human_active = a.human_subtask != Subtask.IDLE
    dom = cfg.domain
    events: list[AbstractEvent] = []
    held = {ROBOT: a.robot_held, HUMAN: a.human_held}

    def emit(kind: Subtask, agent: str, station: str, interacts: int,
             new_held: Item | None, wait: int = 0, **world_changes):
        if agent == HUMAN:
            if a.human_subtask != Subtask.IDLE and a.human_subtask != kind:
                return  # busy with something else first
            if a.human_subtask == Subtask.IDLE and not human_active:
                return  # observed idle: will not act until informed
        fields = {
            "grill_status": a.grill_status, "sink_status": a.sink_status,
            "board_status": a.board_status, "orders_remaining": a.orders_remaining,
            "robot_held": a.robot_held, "human_held": a.human_held,
            "plate_stack": a.plate_stack,
        }
        fields.update(world_changes)
        fields["robot_held" if agent == ROBOT else "human_held"] = new_held
        subtask = Subtask.IDLE if kind == a.human_subtask else a.human_subtask
        events.append(AbstractEvent(
            kind=kind.value, agent=agent, station=station, interacts=interacts,
            wait=wait, reward=cfg.reward_for(kind.value),
            next_state=AbstractState(human_subtask=subtask, **fields)))

    anyone_holds = (a.robot_held, a.human_held)
    for agent in (ROBOT, HUMAN):
        h = held[agent]
        if h is None:
            if a.grill_status is None and not any(map(_is_raw_meat, anyone_holds)):
                emit(Subtask.PICKUP_MEAT, agent, MEAT_DISPENSER, 1, Meat(RAW))
            if a.board_status is None and not any(
                    isinstance(x, Onion) for x in anyone_holds):
                emit(Subtask.PICKUP_ONION, agent, ONION_DISPENSER, 1, Onion())
            if (a.plate_stack > 0 and a.sink_status is None
                    and not any(map(_is_plateware, anyone_holds))):
                emit(Subtask.PICKUP_DIRTY_PLATE, agent, PLATE_DISPENSER, 1,
                     Plate(DIRTY), plate_stack=a.plate_stack - 1)
            if a.board_status is not None \
                    and a.board_status.chops < dom.chop_interacts:
                emit(Subtask.CHOP_ONION, agent, BOARD,
                     dom.chop_interacts - a.board_status.chops, None,
                     board_status=Onion(dom.chop_interacts))
            if a.sink_status is not None and a.sink_status.status == IN_SINK:
                emit(Subtask.WASH_PLATE, agent, SINK,
                     dom.wash_interacts - a.sink_status.washes, None,
                     sink_status=Plate(CLEAN, 0))
            if a.sink_status is not None and a.sink_status.status == CLEAN:
                emit(Subtask.PICKUP_CLEAN_PLATE, agent, SINK, 1,
                     Plate(CLEAN, 0), sink_status=None)
        else:
            if _is_raw_meat(h) and a.grill_status is None:
                emit(Subtask.PUT_MEAT_ON_GRILL, agent, GRILL, 1, None,
                     grill_status=Meat(COOKING, 0))
            if _is_whole_onion(h) and a.board_status is None:
                emit(Subtask.PUT_ONION_ON_BOARD, agent, BOARD, 1, None,
                     board_status=Onion(0))
            if _is_dirty_plate(h) and a.sink_status is None:
                emit(Subtask.PUT_PLATE_IN_SINK, agent, SINK, 1, None,
                     sink_status=Plate(IN_SINK, 0))
            if _is_clean_plate(h) and a.grill_status is not None \
                    and a.grill_status.status in (COOKING, COOKED):
                wait = (dom.cook_time - a.grill_status.elapsed
                        if a.grill_status.status == COOKING else 0)
                emit(Subtask.PLATE_STEAK, agent, GRILL, 1,
                     Dish(has_steak=True), wait=wait, grill_status=None)
            if isinstance(h, Dish) and h.has_steak and not h.has_garnish \
                    and a.board_status is not None \
                    and a.board_status.chops >= dom.chop_interacts:
                emit(Subtask.ADD_GARNISH, agent, BOARD, 1,
                     Dish(True, True), board_status=None)
            if isinstance(h, Dish) and h.has_steak and h.has_garnish \
                    and a.orders_remaining > 0:
                emit(Subtask.DELIVER, agent, SERVING, 1, None,
                     orders_remaining=a.orders_remaining - 1)
            # Escape hatch: park the held item on a counter so a full hand
            # never dead-ends a chain (mirrors the human drop-off rule).
            if agent == ROBOT or (human_active and a.human_subtask == Subtask.IDLE):
                fields = {
                    "grill_status": a.grill_status, "sink_status": a.sink_status,
                    "board_status": a.board_status,
                    "orders_remaining": a.orders_remaining,
                    "robot_held": a.robot_held, "human_held": a.human_held,
                    "human_subtask": a.human_subtask,
                    "plate_stack": a.plate_stack,
                }
                fields["robot_held" if agent == ROBOT else "human_held"] = None
                events.append(AbstractEvent(
                    kind="PutAside", agent=agent, station=COUNTER, interacts=1,
                    wait=0, reward=0.0, next_state=AbstractState(**fields)))
    return tuple(events)


def _station_field(layout: Layout, tile: str) -> dict[Cell, tuple[int, Cell]]:
    """(distance, achieved goal cell) from every floor cell to a station kind."""
    key = ("sf", tile)
    cached = layout._dist_cache.get(key)
    if cached is not None:
        return cached
    from collections import deque
    out: dict[Cell, tuple[int, Cell]] = {}
    queue = deque()
    for g in station_goal_cells(layout, tile):
        out[g] = (0, g)
        queue.append(g)
    while queue:
        cell = queue.popleft()
        d, g = out[cell]
        x, y = cell
        for nxt in ((x, y - 1), (x, y + 1), (x - 1, y), (x + 1, y)):
            if nxt in layout.floor_cells and nxt not in out:
                out[nxt] = (d + 1, g)
                queue.append(nxt)
    layout._dist_cache[key] = out
    return out


def _cell_field(layout: Layout, cell: Cell) -> dict[Cell, tuple[int, Cell]]:
    key = ("cf", cell)
    cached = layout._dist_cache.get(key)
    if cached is not None:
        return cached
    from collections import deque
    out: dict[Cell, tuple[int, Cell]] = {}
    queue = deque()
    for g in sorted(layout.adjacent_floor(cell)):
        out[g] = (0, g)
        queue.append(g)
    while queue:
        c = queue.popleft()
        d, g = out[c]
        x, y = c
        for nxt in ((x, y - 1), (x, y + 1), (x - 1, y), (x + 1, y)):
            if nxt in layout.floor_cells and nxt not in out:
                out[nxt] = (d + 1, g)
                queue.append(nxt)
    layout._dist_cache[key] = out
    return out


def _event_cost(event: AbstractEvent, r_anchor: Cell, h_anchor: Cell,
                layout: Layout) -> tuple[float, Cell | None]:
    anchor = r_anchor if event.agent == ROBOT else h_anchor
    if event.station_cell is not None:
        entry = _cell_field(layout, event.station_cell).get(anchor)
    else:
        entry = _station_field(layout, event.station).get(anchor)
    if entry is None:
        return INF, None
    dist, goal = entry
    return dist + event.interacts + event.wait, goal


def transition_cost(from_state: AbstractState, to_state: AbstractState,
                    anchor: tuple[Cell, Cell], layout: Layout,
                    cfg: PlannerConfig) -> float:
    """Steps for the cheapest capable agent to effect from->to; inf if none."""
    best = INF
    for event in abstract_successors(from_state, cfg):
        if event.next_state != to_state:
            continue
        cost, _ = _event_cost(event, anchor[0], anchor[1], layout)
        best = min(best, cost)
    return best


Strays = tuple[tuple[Cell, Item], ...]


def _reclaim_events(a: AbstractState, strays: Strays, taken: int,
                    human_active: bool) -> list[AbstractEvent]:
    """Pick stray plateware off counters (finite resources must be recoverable).

    Counter contents are constant along a chain except for these pickups, so
    they travel beside the abstract state as a context plus a consumed mask.
    """
    events = []
    for i, (cell, item) in enumerate(strays):
        if taken & (1 << i):
            continue
        for agent, held in ((ROBOT, a.robot_held), (HUMAN, a.human_held)):
            if held is not None:
                continue
            if agent == HUMAN and not (human_active
                                       and a.human_subtask == Subtask.IDLE):
                continue
            fields = {
                "grill_status": a.grill_status, "sink_status": a.sink_status,
                "board_status": a.board_status,
                "orders_remaining": a.orders_remaining,
                "robot_held": a.robot_held, "human_held": a.human_held,
                "human_subtask": a.human_subtask,
                "plate_stack": a.plate_stack,
            }
            fields["robot_held" if agent == ROBOT else "human_held"] = item
            events.append(AbstractEvent(
                kind="Reclaim", agent=agent, station="", interacts=1, wait=0,
                reward=0.0, next_state=AbstractState(**fields),
                station_cell=cell))
    return events


def _tail_bound(depth: int, orders: int, cfg: PlannerConfig) -> float:
    # A delivery needs at least ~5 abstract events end to end; this loose
    # upper bound prunes continuations that cannot possibly pay off.
    if depth <= 0 or orders <= 0:
        return 0.0
    deliveries = min(orders, (depth + 4) // 5)
    return (cfg.reward_for("Deliver") * deliveries
            + cfg.reward_for("WashPlate") * orders)


def _chain_value(a: AbstractState, r_anchor: Cell, h_anchor: Cell, depth: int,
                 strays: Strays, taken: int, human_active: bool,
                 cfg: PlannerConfig, layout: Layout, memo: dict) -> float:
    if a.orders_remaining <= 0:
        return 0.0
    key = (a, r_anchor, h_anchor, depth, strays, taken, human_active)
    hit = memo.get(key)
    if hit is not None:
        return hit
    best = 0.0  # the empty chain: stopping is always allowed
    cheapest = INF
    events = list(abstract_successors(a, cfg, human_active))
    if strays:
        events.extend(_reclaim_events(a, strays, taken, human_active))
    for event in events:
        cost, goal = _event_cost(event, r_anchor, h_anchor, layout)
        if cost == INF:
            continue
        cheapest = min(cheapest, cost)
        value = event.reward - cost
        if depth > 1:
            bound = _tail_bound(depth - 1, event.next_state.orders_remaining, cfg)
            if value + bound <= best:
                continue
            nr = goal if event.agent == ROBOT else r_anchor
            nh = goal if event.agent == HUMAN else h_anchor
            next_taken = taken
            if event.kind == "Reclaim":
                next_taken |= 1 << [s[0] for s in strays].index(event.station_cell)
            tail = _chain_value(event.next_state, nr, nh, depth - 1,
                                strays, next_taken, human_active,
                                cfg, layout, memo)
            if tail > 0:
                value += tail
        if value > best:
            best = value
    if best <= 0.0 and cheapest < INF:
        # No profitable chain in range: lean toward the nearest useful work
        # so value plateaus still have an approach gradient.
        best = -0.01 * cheapest
    memo[key] = best
    return best


def _value_memo(layout: Layout, cfg: PlannerConfig) -> dict:
    return layout._value_cache.setdefault(cfg._cache_token(), {})


def _greedy_robot_action(st: JointState, cfg: PlannerConfig,
                         layout: Layout, memo: dict) -> Action:
    """On-task executor used for rollout continuations: head for the robot
    event with the best chain value, then face the station and interact."""
    if st.world.orders_remaining <= 0:
        return Action.STAY
    a = abstract(st)
    strays = _stray_plateware(st)
    active = a.human_subtask != Subtask.IDLE
    depth = cfg.lookahead_depth
    events = [e for e in abstract_successors(a, cfg, active) if e.agent == ROBOT]
    if strays:
        events.extend(e for e in _reclaim_events(a, strays, 0, active)
                      if e.agent == ROBOT)
    best = None
    best_event = None
    r_anchor = st.robot.position
    h_anchor = st.human.position
    for event in events:
        cost, goal = _event_cost(event, r_anchor, h_anchor, layout)
        if cost == INF:
            continue
        value = event.reward - cost
        if depth > 1:
            taken = 0
            if event.kind == "Reclaim":
                taken = 1 << [s[0] for s in strays].index(event.station_cell)
            tail = _chain_value(event.next_state, goal, h_anchor, depth - 1,
                                strays, taken, active, cfg, layout, memo)
            if tail > 0:
                value += tail
        if best is None or value > best:
            best = value
            best_event = event
    if best_event is None:
        return Action.STAY
    if best_event.station_cell is not None:
        goals = tuple(sorted(layout.adjacent_floor(best_event.station_cell)))
        heading = facing_cell_heading(st.robot.position, best_event.station_cell)
    else:
        goals = station_goal_cells(layout, best_event.station)
        heading = facing_station(layout, st.robot.position, best_event.station)
    if heading is not None:
        if st.robot.orientation == heading:
            return Action.INTERACT
        return HEADING_ACTIONS[heading]
    move = next_move(layout, st.robot.position, goals)
    return move if move is not None else Action.STAY


def _stray_plateware(s_prime: JointState) -> Strays:
    return tuple((cell, item) for cell, item in s_prime.world.counters
                 if isinstance(item, (Plate, Dish)))


def abstract_value(s_prime: JointState, cfg: PlannerConfig,
                   layout: Layout) -> float:
    """Best abstract chain value from a rollout endpoint (0 when terminal)."""
    if s_prime.world.orders_remaining <= 0:
        return 0.0
    memo = _value_memo(layout, cfg)
    a = abstract(s_prime)
    return _chain_value(a, s_prime.robot.position, s_prime.human.position,
                        cfg.lookahead_depth, _stray_plateware(s_prime), 0,
                        a.human_subtask != Subtask.IDLE, cfg, layout, memo)


def _endpoint_subtask(policy: HumanPolicyState, st: JointState,
                      dom: DomainConfig) -> Subtask:
    sub = policy.current_subtask
    if policy.dropping or sub == Subtask.IDLE:
        return Subtask.IDLE
    if _subtask_done(sub, st.human_kb, st.human.held, dom):
        return Subtask.IDLE
    return sub


def hypothesis_state(obs: Observation, hypothesis: Subtask,
                     cfg: PlannerConfig) -> JointState:
    """Concrete rollout start for one hypothesized human subtask."""
    human = AgentState(obs.human_position, obs.human_orientation, obs.human_held)
    kb = obs.human_kb
    if cfg.assumes_full_perception():
        kb = kb_from_world(obs.world, obs.robot, cfg.domain.layout,
                           ack_delay=cfg.human_fov.ack_delay)
    return JointState(obs.world, obs.robot, human, kb, hypothesis)


def sample_transitions(s: JointState, a: Action, hypothesis: Subtask,
                       cfg: PlannerConfig, rng: np.random.Generator,
                       m_override: int | None = None) -> TransitionEstimate:
    dom = cfg.domain.with_fov(cfg.human_fov)
    layout = dom.layout
    n = cfg.rollout_depth
    r_wash = cfg.reward_for("WashPlate")
    r_deliver = cfg.reward_for("Deliver")
    start = replace(s, human_subtask=hypothesis)

    GREEDY, DWELL, RANDOM = 0, 1, 2
    if cfg.exhaustive:
        plans = [(RANDOM, tuple(ACTIONS[i] for i in combo))
                 for combo in product(range(len(ACTIONS)), repeat=n - 1)]
    else:
        # Continuation modes: an on-task executor pins a sharp estimate of
        # how the committed action advances the task; dwelling in place lets
        # acknowledgment delays elapse (the influence behaviors all hinge on
        # staying visible); persistence-biased random walks cover the rest.
        m = m_override if m_override is not None else cfg.rollout_count
        modes = rng.random(size=m)
        kinds = rng.random(size=(m, max(n - 1, 1)))
        picks = rng.integers(0, len(ACTIONS), size=(m, max(n - 1, 1)))
        plans = []
        for i in range(m):
            if modes[i] < 0.4:
                plans.append((GREEDY, ()))
            elif modes[i] < 0.7:
                plans.append((DWELL, ()))
            else:
                row = []
                prev = a
                for j in range(n - 1):
                    if kinds[i, j] < 0.4 and prev in MOVE_HEADINGS:
                        act = prev
                    elif kinds[i, j] < 0.7:
                        act = Action.STAY
                    else:
                        act = ACTIONS[picks[i, j]]
                    row.append(act)
                    prev = act
                plans.append((RANDOM, tuple(row)))

    memo = _value_memo(layout, cfg)
    weight = 1.0 / len(plans)
    buckets: dict = {}
    order: list = []
    for mode, cont in plans:
        st = start
        policy = HumanPolicyState(hypothesis)
        acc = 0.0
        w = 1.0  # in-trajectory discount: step i weighs gamma^i
        for i in range(n):
            if i == 0:
                ra = a
            elif mode == GREEDY:
                ra = _greedy_robot_action(st, cfg, layout, memo)
            elif mode == DWELL:
                ra = Action.STAY
            else:
                ra = cont[i - 1]
            policy, ha = advance(policy, st.human, st.human_kb, dom, rng)
            prev_world = st.world
            st = step(st, ra, ha, dom)
            if st.world.orders_remaining < prev_world.orders_remaining:
                acc += w * r_deliver
            if (st.world.sink is not None and st.world.sink.status == CLEAN
                    and not (prev_world.sink is not None
                             and prev_world.sink.status == CLEAN)):
                acc += w * r_wash
            if st.world.orders_remaining == 0:
                break
            if i < n - 1:
                w *= cfg.gamma
        st = replace(st, human_subtask=_endpoint_subtask(policy, st, dom))
        # Pose-inclusive equivalence: anchors must stay meaningful per
        # outcome, or the positional gradient of the cost mapping is lost.
        key = (st.human_kb, st.human_subtask, st.world,
               st.robot.position, st.robot.orientation,
               st.human.position, st.human.orientation)
        bucket = buckets.get(key)
        if bucket is None:
            buckets[key] = [st, weight, acc * weight, w]
            order.append(key)
        else:
            bucket[1] += weight
            bucket[2] += acc * weight

    outcomes = tuple(
        Outcome(state=buckets[k][0], freq=buckets[k][1],
                acc_reward=buckets[k][2] / buckets[k][1],
                end_discount=buckets[k][3],
                anchor=(buckets[k][0].robot.position, buckets[k][0].human.position))
        for k in order)
    return TransitionEstimate(source=start, action=a, outcomes=outcomes)


def _hypotheses(b: Belief, cfg: PlannerConfig) -> list[tuple[Subtask, float]]:
    kept = [(s, p) for s, p in b.probs if p >= cfg.belief_floor]
    if not kept:
        best = max(b.probs, key=lambda e: (e[1], -SUBTASK_INDEX[e[0]]))
        kept = [best]
    return kept


def q_value(b: Belief, s_obs: Observation, a: Action, cfg: PlannerConfig,
            key: StreamKey, m_override: int | None = None) -> float:
    layout = cfg.domain.layout
    total = 0.0
    for hypothesis, p in _hypotheses(b, cfg):
        rng = key.rng(SUBTASK_INDEX[hypothesis])
        start = hypothesis_state(s_obs, hypothesis, cfg)
        estimate = sample_transitions(start, a, hypothesis, cfg, rng, m_override)
        expected = 0.0
        for outcome in estimate.outcomes:
            expected += outcome.freq * (
                outcome.acc_reward
                + outcome.end_discount * abstract_value(outcome.state, cfg, layout))
        total += p * (cfg.step_reward + cfg.gamma * expected)
    return total


def select_action(b: Belief, s_obs: Observation, cfg: PlannerConfig,
                  key: StreamKey) -> tuple[Action, dict]:
    start = time.perf_counter()
    budget = (cfg.time_budget_ms / 1000.0) if cfg.time_budget_ms else None
    m = cfg.rollout_count
    fallback = False
    qs: dict[Action, float] = {}
    for action in ACTIONS:
        if budget is not None:
            elapsed = time.perf_counter() - start
            if elapsed > 1.8 * budget and m > 1:
                m = 1
                fallback = True
                log.warning("planner over 1.8x budget at t=%d; single-rollout fallback",
                            key.timestep)
            elif elapsed > budget and m > 1:
                m = max(1, m // 2)
                log.info("planner over budget at t=%d; rollouts reduced to %d",
                         key.timestep, m)
        qs[action] = q_value(b, s_obs, action, cfg, key, m_override=m)

    best = ACTIONS[0]
    for action in ACTIONS[1:]:
        if qs[action] > qs[best]:
            best = action
    diagnostics = {
        "q": {action.value: round(qs[action], 6) for action in ACTIONS},
        "chosen": best.value,
        "m": m,
        "fallback": fallback,
        "wall_ms": (time.perf_counter() - start) * 1000.0,
    }
    return best, diagnostics


def planner_view(obs: Observation, cfg: PlannerConfig) -> Observation:
    """The observation as this planner models it (perfect KB for baseline)."""
    if cfg.assumes_full_perception():
        return replace(obs, human_kb=kb_from_world(
            obs.world, obs.robot, cfg.domain.layout,
            ack_delay=cfg.human_fov.ack_delay))
    return obs
