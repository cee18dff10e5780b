"""Carryable item life cycles: onions, meat, plates, and assembled dishes.

All items are immutable; progressing an item (chopping, cooking, washing)
produces a new value. Progress thresholds (how many chops make an onion
"chopped", etc.) live in DomainConfig, not on the items themselves, so the
same item values work under any timing configuration.
"""

from __future__ import annotations

from dataclasses import dataclass

RAW = "raw"
COOKING = "cooking"
COOKED = "cooked"

DIRTY = "dirty"
IN_SINK = "in_sink"
CLEAN = "clean"


@dataclass(frozen=True, slots=True)
class Onion:
    chops: int = 0  # 0 = whole; >= chop threshold = fully chopped


@dataclass(frozen=True, slots=True)
class Meat:
    status: str = RAW
    elapsed: int = 0  # grill time so far, only meaningful while cooking


@dataclass(frozen=True, slots=True)
class Plate:
    status: str = DIRTY
    washes: int = 0  # wash interacts so far, only meaningful while in sink


@dataclass(frozen=True, slots=True)
class Dish:
    has_steak: bool = False
    has_garnish: bool = False


Item = Onion | Meat | Plate | Dish


def item_to_json(item: Item | None) -> dict | None:
    if item is None:
        return None
    if isinstance(item, Onion):
        return {"kind": "onion", "chops": item.chops}
    if isinstance(item, Meat):
        return {"kind": "meat", "status": item.status, "elapsed": item.elapsed}
    if isinstance(item, Plate):
        return {"kind": "plate", "status": item.status, "washes": item.washes}
    if isinstance(item, Dish):
        return {"kind": "dish", "steak": item.has_steak, "garnish": item.has_garnish}
    raise TypeError(f"not an item: {item!r}")


def item_from_json(obj: dict | None) -> Item | None:
    if obj is None:
        return None
    kind = obj["kind"]
    if kind == "onion":
        return Onion(chops=obj["chops"])
    if kind == "meat":
        return Meat(status=obj["status"], elapsed=obj["elapsed"])
    if kind == "plate":
        return Plate(status=obj["status"], washes=obj["washes"])
    if kind == "dish":
        return Dish(has_steak=obj["steak"], has_garnish=obj["garnish"])
    raise ValueError(f"unknown item kind: {kind!r}")
