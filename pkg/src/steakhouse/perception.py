"""Field-of-view geometry and knowledge-base updates.

Visibility is an angular cone test between tile centers: a cell is visible
when the angle between the agent's heading and the vector to the cell is at
most half the cone width (boundary-inclusive, with a tiny epsilon so exact
boundaries resolve the same way everywhere). With ``occlusion`` enabled the
straight line to the cell must additionally pass over floor cells only.

The KB update gives every tracked feature a consecutive-visible counter.
Once the counter reaches ``ack_delay`` the acknowledged value tracks the
live world value for as long as the cell stays in view; the same rule clears
a stale entry when the human watches an emptied cell, and removes the robot
from the KB when its remembered cell is observed vacant.
"""

from __future__ import annotations

import math
from dataclasses import replace

from .actions import Cell, Heading, HEADING_VECTORS
from .kb import FovParams, KnowledgeBase
from .layout import COUNTER, Layout
from .state import AgentState, WorldState

_EPS = 1e-9


def _line_is_clear(layout: Layout, a: Cell, b: Cell) -> bool:
    """Bresenham line from a to b; interior cells must all be floor."""
    x0, y0 = a
    x1, y1 = b
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x, y = x0, y0
    while True:
        if (x, y) == (x1, y1):
            return True
        if (x, y) != a and not layout.is_floor((x, y)):
            return False
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy


def visible_cells(position: Cell, orientation: Heading, layout: Layout,
                  params: FovParams) -> frozenset[Cell]:
    key = (position, orientation, params)
    cached = layout._vis_cache.get(key)
    if cached is not None:
        return cached

    ox, oy = HEADING_VECTORS[orientation]
    cos_half = math.cos(math.radians(params.fov_angle / 2.0))
    px, py = position
    out: set[Cell] = {position}
    for cell in layout.all_cells():
        vx = cell[0] - px
        vy = cell[1] - py
        if vx == 0 and vy == 0:
            continue
        dot = ox * vx + oy * vy
        if dot + _EPS < cos_half * math.hypot(vx, vy):
            continue
        if params.occlusion and not _line_is_clear(layout, position, cell):
            continue
        out.add(cell)
    result = frozenset(out)
    layout._vis_cache[key] = result
    return result


def kb_update(kb: KnowledgeBase, world: WorldState, robot: AgentState,
              human: AgentState, layout: Layout, params: FovParams) -> KnowledgeBase:
    vis = visible_cells(human.position, human.orientation, layout, params)
    tracked = layout.tracked_features
    n = len(tracked)
    delay = params.ack_delay
    old_pending = kb.pending if len(kb.pending) == n + 1 else (0,) * (n + 1)

    grill, sink, board = kb.grill, kb.sink, kb.board
    counters = None  # built lazily; None means "unchanged from kb.counters"
    pending: list[int] = []
    world_counters = None
    for i, (kind, cell) in enumerate(tracked):
        if cell in vis:
            p = old_pending[i] + 1
            if p > delay:
                p = delay
        else:
            p = 0
        pending.append(p)
        if p < delay:
            continue
        if kind == COUNTER:
            if world_counters is None:
                world_counters = dict(world.counters)
            true_item = world_counters.get(cell)
            current = counters.get(cell) if counters is not None else kb.counter_item(cell)
            if current != true_item:
                if counters is None:
                    counters = dict(kb.counters)
                if true_item is None:
                    counters.pop(cell, None)
                else:
                    counters[cell] = true_item
        elif cell == layout.grill_cell:
            grill = world.grill
        elif cell == layout.sink_cell:
            sink = world.sink
        elif cell == layout.board_cell:
            board = world.board

    robot_held = kb.robot_held
    robot_seen_at = kb.robot_seen_at
    if robot.position in vis:
        rp = min(old_pending[n] + 1, delay)
        if rp >= delay:
            robot_held = robot.held
            robot_seen_at = robot.position
    elif robot_seen_at is not None and robot_seen_at in vis:
        # remembered cell observed vacant: evidence the robot moved on
        rp = min(old_pending[n] + 1, delay)
        if rp >= delay:
            robot_held = None
            robot_seen_at = None
            rp = 0
    else:
        rp = 0
    pending.append(rp)

    new_counters = kb.counters if counters is None else tuple(sorted(counters.items()))
    new_pending = tuple(pending)
    if (grill == kb.grill and sink == kb.sink and board == kb.board
            and new_counters == kb.counters and robot_held == kb.robot_held
            and robot_seen_at == kb.robot_seen_at
            and new_pending == kb.pending
            and kb.orders_remaining == world.orders_remaining
            and kb.plate_stack == world.plate_stack):
        return kb
    return KnowledgeBase(
        grill=grill, sink=sink, board=board, counters=new_counters,
        robot_held=robot_held, robot_seen_at=robot_seen_at,
        orders_remaining=world.orders_remaining, plate_stack=world.plate_stack,
        pending=new_pending)


def kb_gap(kb: KnowledgeBase, world: WorldState, robot: AgentState) -> int:
    """Tracked features whose acknowledged value disagrees with the world."""
    gap = 0
    if kb.grill != world.grill:
        gap += 1
    if kb.sink != world.sink:
        gap += 1
    if kb.board != world.board:
        gap += 1
    if kb.robot_held != robot.held:
        gap += 1
    kb_c = dict(kb.counters)
    world_c = dict(world.counters)
    for cell in kb_c.keys() | world_c.keys():
        if kb_c.get(cell) != world_c.get(cell):
            gap += 1
    return gap


def kb_touch_cell(kb: KnowledgeBase, world: WorldState, cell: Cell,
                  layout: Layout, ack_delay: int) -> KnowledgeBase:
    """Sync one tracked feature to ground truth (the human manipulated it).

    An agent knows the outcome of its own interaction attempt, so the
    acknowledgment delay does not apply to the cell it just worked on.
    """
    idx = layout.tracked_index.get(cell)
    if idx is None:
        return kb
    pending = list(kb.pending) if len(kb.pending) == len(layout.tracked_features) + 1 \
        else [0] * (len(layout.tracked_features) + 1)
    pending[idx] = ack_delay
    updates: dict = {"pending": tuple(pending)}
    if cell == layout.grill_cell:
        updates["grill"] = world.grill
    elif cell == layout.sink_cell:
        updates["sink"] = world.sink
    elif cell == layout.board_cell:
        updates["board"] = world.board
    else:
        return replace(kb.with_counter(cell, world.counter_item(cell)),
                       pending=tuple(pending))
    return replace(kb, **updates)


def kb_touch_robot(kb: KnowledgeBase, robot_position: Cell, layout: Layout,
                   ack_delay: int) -> KnowledgeBase:
    """Register the robot's presence after physical contact (a blocked move)."""
    pending = list(kb.pending) if len(kb.pending) == len(layout.tracked_features) + 1 \
        else [0] * (len(layout.tracked_features) + 1)
    pending[-1] = ack_delay
    return replace(kb, robot_seen_at=robot_position, pending=tuple(pending))


def kb_from_world(world: WorldState, robot: AgentState, layout: Layout,
                  ack_delay: int = 1) -> KnowledgeBase:
    """A fully acknowledged KB snapshot (the perfect-perception view)."""
    return KnowledgeBase(
        grill=world.grill, sink=world.sink, board=world.board,
        counters=world.counters, robot_held=robot.held,
        robot_seen_at=robot.position,
        orders_remaining=world.orders_remaining, plate_stack=world.plate_stack,
        pending=(ack_delay,) * (len(layout.tracked_features) + 1))
