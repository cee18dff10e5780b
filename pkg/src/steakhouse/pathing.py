"""Grid path planning: BFS distance fields with per-layout caching.

Distance fields are keyed by (goal set, blocked cell) and memoized on the
layout, since planner rollouts query the same handful of station targets
thousands of times per decision. Neighbor expansion follows the canonical
action order so every tie-break is deterministic.
"""

from __future__ import annotations

from collections import deque

from .actions import (ACTIONS, Action, Cell, Heading, HEADING_VECTORS,
                      MOVE_HEADINGS, ahead)
from .layout import Layout

INF = float("inf")

_MOVE_ACTIONS = (Action.UP, Action.DOWN, Action.LEFT, Action.RIGHT)


def dist_field(layout: Layout, goals: tuple[Cell, ...],
               blocked: Cell | None = None) -> dict[Cell, int]:
    """Distance from every reachable floor cell to the nearest goal cell."""
    key = (goals, blocked)
    cached = layout._dist_cache.get(key)
    if cached is not None:
        return cached
    field: dict[Cell, int] = {}
    queue: deque[Cell] = deque()
    floor = layout.floor_cells
    for g in goals:
        if g in floor and g != blocked:
            field[g] = 0
            queue.append(g)
    while queue:
        cell = queue.popleft()
        d = field[cell] + 1
        x, y = cell
        for action in _MOVE_ACTIONS:
            dx, dy = HEADING_VECTORS[MOVE_HEADINGS[action]]
            nxt = (x + dx, y + dy)
            if nxt in floor and nxt != blocked and nxt not in field:
                field[nxt] = d
                queue.append(nxt)
    layout._dist_cache[key] = field
    return field


def distance(layout: Layout, start: Cell, goals: tuple[Cell, ...],
             blocked: Cell | None = None) -> float:
    if blocked == start:
        blocked = None  # an agent never blocks its own cell
    return dist_field(layout, goals, blocked).get(start, INF)


def next_move(layout: Layout, start: Cell, goals: tuple[Cell, ...],
              blocked: Cell | None = None) -> Action | None:
    """First move of a shortest path; None when at a goal or unreachable."""
    if blocked == start:
        blocked = None
    field = dist_field(layout, goals, blocked)
    d = field.get(start)
    if d is None or d == 0:
        return None
    x, y = start
    for action in _MOVE_ACTIONS:
        dx, dy = HEADING_VECTORS[MOVE_HEADINGS[action]]
        nd = field.get((x + dx, y + dy))
        if nd is not None and nd == d - 1:
            return action
    return None


def station_goal_cells(layout: Layout, tile: str) -> tuple[Cell, ...]:
    """Floor cells from which some station cell of this kind can be faced."""
    key = ("goals", tile)
    cached = layout._dist_cache.get(key)
    if cached is None:
        cells: set[Cell] = set()
        for station in layout.station_cells(tile):
            cells.update(layout.adjacent_floor(station))
        cached = tuple(sorted(cells))
        layout._dist_cache[key] = cached
    return cached


def facing_station(layout: Layout, position: Cell, tile: str) -> Heading | None:
    """Heading that faces an adjacent station cell of this kind, if any."""
    for heading in (Heading.N, Heading.S, Heading.W, Heading.E):
        target = ahead(position, heading)
        if layout.in_bounds(target) and layout.tile_at(target) == tile:
            return heading
    return None


def facing_cell_heading(position: Cell, target: Cell) -> Heading | None:
    for heading, (dx, dy) in HEADING_VECTORS.items():
        if (position[0] + dx, position[1] + dy) == target:
            return heading
    return None
