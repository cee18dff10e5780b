"""Agent actions and headings on the grid.

ACTIONS fixes the canonical total order used for every deterministic
tie-break in the project: Up < Down < Left < Right < Stay < Interact.
"""

from __future__ import annotations

from enum import Enum

Cell = tuple[int, int]  # (x, y); y grows downward


class Heading(str, Enum):
    N = "N"
    E = "E"
    S = "S"
    W = "W"


HEADING_VECTORS: dict[Heading, Cell] = {
    Heading.N: (0, -1),
    Heading.E: (1, 0),
    Heading.S: (0, 1),
    Heading.W: (-1, 0),
}


class Action(str, Enum):
    UP = "Up"
    DOWN = "Down"
    LEFT = "Left"
    RIGHT = "Right"
    STAY = "Stay"
    INTERACT = "Interact"


ACTIONS: tuple[Action, ...] = (
    Action.UP,
    Action.DOWN,
    Action.LEFT,
    Action.RIGHT,
    Action.STAY,
    Action.INTERACT,
)

ACTION_INDEX: dict[Action, int] = {a: i for i, a in enumerate(ACTIONS)}

MOVE_HEADINGS: dict[Action, Heading] = {
    Action.UP: Heading.N,
    Action.DOWN: Heading.S,
    Action.LEFT: Heading.W,
    Action.RIGHT: Heading.E,
}

HEADING_ACTIONS: dict[Heading, Action] = {h: a for a, h in MOVE_HEADINGS.items()}


def ahead(position: Cell, heading: Heading) -> Cell:
    dx, dy = HEADING_VECTORS[heading]
    return (position[0] + dx, position[1] + dy)
