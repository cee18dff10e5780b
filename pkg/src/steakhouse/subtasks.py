"""Subtask catalog and KB-driven feasibility.

Feasibility is always judged on the human's knowledge base, never the true
world, and suppresses work the KB shows the robot is already covering (a
robot seen carrying an onion suppresses PickupOnion). Plate fetching is
additionally gated on a steak being underway: the myopic human only starts
the washing pipeline once the grill is occupied.
"""

from __future__ import annotations

from enum import Enum

from .items import (CLEAN, COOKED, DIRTY, IN_SINK, RAW, Dish, Item, Meat,
                    Onion, Plate)
from .kb import KnowledgeBase
from .layout import (BOARD, GRILL, MEAT_DISPENSER, ONION_DISPENSER,
                     PLATE_DISPENSER, SERVING, SINK)


class Subtask(str, Enum):
    PICKUP_MEAT = "PickupMeat"
    PUT_MEAT_ON_GRILL = "PutMeatOnGrill"
    PICKUP_ONION = "PickupOnion"
    PUT_ONION_ON_BOARD = "PutOnionOnBoard"
    CHOP_ONION = "ChopOnion"
    PICKUP_DIRTY_PLATE = "PickupDirtyPlate"
    PUT_PLATE_IN_SINK = "PutPlateInSink"
    WASH_PLATE = "WashPlate"
    PICKUP_CLEAN_PLATE = "PickupCleanPlate"
    PLATE_STEAK = "PlateSteak"
    ADD_GARNISH = "AddGarnish"
    DELIVER = "Deliver"
    IDLE = "Idle"


SUBTASKS: tuple[Subtask, ...] = tuple(Subtask)
SUBTASK_INDEX: dict[Subtask, int] = {s: i for i, s in enumerate(SUBTASKS)}

# Target station tile for each non-idle subtask.
SUBTASK_STATION: dict[Subtask, str] = {
    Subtask.PICKUP_MEAT: MEAT_DISPENSER,
    Subtask.PUT_MEAT_ON_GRILL: GRILL,
    Subtask.PICKUP_ONION: ONION_DISPENSER,
    Subtask.PUT_ONION_ON_BOARD: BOARD,
    Subtask.CHOP_ONION: BOARD,
    Subtask.PICKUP_DIRTY_PLATE: PLATE_DISPENSER,
    Subtask.PUT_PLATE_IN_SINK: SINK,
    Subtask.WASH_PLATE: SINK,
    Subtask.PICKUP_CLEAN_PLATE: SINK,
    Subtask.PLATE_STEAK: GRILL,
    Subtask.ADD_GARNISH: BOARD,
    Subtask.DELIVER: SERVING,
}


def _is_raw_meat(item: Item | None) -> bool:
    return isinstance(item, Meat) and item.status == RAW

def _is_whole_onion(item: Item | None) -> bool:
    return isinstance(item, Onion) and item.chops == 0

def _is_dirty_plate(item: Item | None) -> bool:
    return isinstance(item, Plate) and item.status == DIRTY

def _is_clean_plate(item: Item | None) -> bool:
    return isinstance(item, Plate) and item.status == CLEAN

def _is_plateware(item: Item | None) -> bool:
    return isinstance(item, (Plate, Dish))


def board_chopped(board: Onion | None, chop_interacts: int) -> bool:
    return board is not None and board.chops >= chop_interacts


def available_subtasks(kb: KnowledgeBase, held: Item | None,
                       chop_interacts: int = 2) -> set[Subtask]:
    """Subtasks currently feasible for the human; {Idle} when none are."""
    if kb.orders_remaining <= 0:
        return {Subtask.IDLE}

    out: set[Subtask] = set()
    if held is None:
        if kb.grill is None and not isinstance(kb.robot_held, Meat):
            out.add(Subtask.PICKUP_MEAT)
        if kb.board is None and not isinstance(kb.robot_held, Onion):
            out.add(Subtask.PICKUP_ONION)
        if (kb.sink is None and kb.grill is not None and kb.plate_stack > 0
                and not _is_plateware(kb.robot_held)):
            out.add(Subtask.PICKUP_DIRTY_PLATE)
        if kb.board is not None and kb.board.chops < chop_interacts:
            out.add(Subtask.CHOP_ONION)
        if kb.sink is not None and kb.sink.status == IN_SINK:
            out.add(Subtask.WASH_PLATE)
        # The washed plate is fetched to plate a steak, so a cooked steak
        # must be on the grill as far as the KB knows.
        if (kb.sink is not None and kb.sink.status == CLEAN
                and isinstance(kb.grill, Meat) and kb.grill.status == COOKED):
            out.add(Subtask.PICKUP_CLEAN_PLATE)
    else:
        if _is_raw_meat(held) and kb.grill is None:
            out.add(Subtask.PUT_MEAT_ON_GRILL)
        if _is_whole_onion(held) and kb.board is None:
            out.add(Subtask.PUT_ONION_ON_BOARD)
        if _is_dirty_plate(held) and kb.sink is None:
            out.add(Subtask.PUT_PLATE_IN_SINK)
        if (_is_clean_plate(held) and isinstance(kb.grill, Meat)
                and kb.grill.status == COOKED):
            out.add(Subtask.PLATE_STEAK)
        if (isinstance(held, Dish) and held.has_steak and not held.has_garnish
                and board_chopped(kb.board, chop_interacts)):
            out.add(Subtask.ADD_GARNISH)
        if isinstance(held, Dish) and held.has_steak and held.has_garnish:
            out.add(Subtask.DELIVER)

    return out if out else {Subtask.IDLE}
