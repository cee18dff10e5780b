"""The human's knowledge base: last-seen snapshots with acknowledgment lag.

The KB tracks one feature per station slot (grill, sink, board), one per
counter cell, and one for the robot (position + held item). A feature's
acknowledged value only changes after its cell has stayed in the field of
view for ``ack_delay`` consecutive updates; ``pending`` holds the per-feature
consecutive-visible counters, aligned with ``layout.tracked_features`` plus
a final slot for the robot.

``orders_remaining`` and ``plate_stack`` mirror the world unconditionally:
they are task knowledge, not perception, and never count toward the KB gap.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .actions import Cell
from .items import Item, Meat, Onion, Plate, item_from_json, item_to_json

ROBOT_FEATURE = "robot"


@dataclass(frozen=True, slots=True)
class FovParams:
    fov_angle: float = 120.0  # degrees, full cone width
    ack_delay: int = 3        # consecutive visible updates before acknowledgment
    occlusion: bool = False   # require line of sight over floor cells

    def __post_init__(self):
        if not (0 < self.fov_angle <= 360):
            raise ValueError("fov_angle must be in (0, 360]")
        if self.ack_delay < 1:
            raise ValueError("ack_delay must be >= 1")

    def is_full_perception(self) -> bool:
        return self.fov_angle >= 360 and self.ack_delay == 1 and not self.occlusion


FULL_PERCEPTION = FovParams(fov_angle=360.0, ack_delay=1)


@dataclass(frozen=True, slots=True)
class KnowledgeBase:
    grill: Meat | None = None
    sink: Plate | None = None
    board: Onion | None = None
    counters: tuple[tuple[Cell, Item], ...] = ()
    robot_held: Item | None = None
    robot_seen_at: Cell | None = None
    orders_remaining: int = 0
    plate_stack: int = 0
    pending: tuple[int, ...] = ()

    def counter_item(self, cell: Cell) -> Item | None:
        for c, item in self.counters:
            if c == cell:
                return item
        return None

    def with_counter(self, cell: Cell, item: Item | None) -> "KnowledgeBase":
        rest = tuple(entry for entry in self.counters if entry[0] != cell)
        if item is not None:
            rest = tuple(sorted(rest + ((cell, item),)))
        return replace(self, counters=rest)


def kb_to_json(kb: KnowledgeBase) -> dict:
    return {
        "grill": item_to_json(kb.grill),
        "sink": item_to_json(kb.sink),
        "board": item_to_json(kb.board),
        "counters": [[list(cell), item_to_json(item)] for cell, item in kb.counters],
        "robot_held": item_to_json(kb.robot_held),
        "robot_seen_at": list(kb.robot_seen_at) if kb.robot_seen_at else None,
        "orders_remaining": kb.orders_remaining,
        "plate_stack": kb.plate_stack,
        "pending": list(kb.pending),
    }


def kb_from_json(obj: dict) -> KnowledgeBase:
    return KnowledgeBase(
        grill=item_from_json(obj["grill"]),
        sink=item_from_json(obj["sink"]),
        board=item_from_json(obj["board"]),
        counters=tuple(sorted((tuple(cell), item_from_json(item))
                              for cell, item in obj["counters"])),
        robot_held=item_from_json(obj["robot_held"]),
        robot_seen_at=tuple(obj["robot_seen_at"]) if obj["robot_seen_at"] else None,
        orders_remaining=obj["orders_remaining"],
        plate_stack=obj["plate_stack"],
        pending=tuple(obj["pending"]),
    )
