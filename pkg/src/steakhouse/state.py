"""Joint world/agent state and the domain timing configuration."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .actions import Cell, Heading
from .items import Item, Meat, Onion, Plate, item_to_json
from .kb import FovParams, KnowledgeBase
from .layout import Layout
from .subtasks import Subtask


@dataclass(frozen=True, slots=True)
class DomainConfig:
    layout: Layout
    cook_time: int = 10       # timesteps on the grill until meat is cooked
    wash_interacts: int = 2   # interacts to wash a plate in the sink
    chop_interacts: int = 2   # interacts to fully chop an onion
    fov: FovParams = field(default_factory=FovParams)

    def with_fov(self, fov: FovParams) -> "DomainConfig":
        return replace(self, fov=fov)


@dataclass(frozen=True, slots=True)
class AgentState:
    position: Cell
    orientation: Heading
    held: Item | None = None


@dataclass(frozen=True, slots=True)
class WorldState:
    grill: Meat | None = None
    sink: Plate | None = None
    board: Onion | None = None
    counters: tuple[tuple[Cell, Item], ...] = ()
    orders_remaining: int = 0
    plate_stack: int = 0
    timestep: int = 0

    def counter_item(self, cell: Cell) -> Item | None:
        for c, item in self.counters:
            if c == cell:
                return item
        return None

    def with_counter(self, cell: Cell, item: Item | None) -> "WorldState":
        rest = tuple(entry for entry in self.counters if entry[0] != cell)
        if item is not None:
            rest = tuple(sorted(rest + ((cell, item),)))
        return replace(self, counters=rest)


@dataclass(frozen=True, slots=True)
class JointState:
    world: WorldState
    robot: AgentState
    human: AgentState
    human_kb: KnowledgeBase
    human_subtask: Subtask = Subtask.IDLE


def initial_world(layout: Layout) -> WorldState:
    return WorldState(orders_remaining=layout.orders, plate_stack=layout.orders)


def initial_kb(layout: Layout) -> KnowledgeBase:
    # The human knows the initial (empty) kitchen but nothing about the robot.
    return KnowledgeBase(orders_remaining=layout.orders, plate_stack=layout.orders,
                         pending=(0,) * (len(layout.tracked_features) + 1))


def initial_joint_state(layout: Layout) -> JointState:
    (h_cell, h_heading) = layout.human_start
    (r_cell, r_heading) = layout.robot_start
    return JointState(
        world=initial_world(layout),
        robot=AgentState(r_cell, r_heading),
        human=AgentState(h_cell, h_heading),
        human_kb=initial_kb(layout),
    )


def world_to_json(world: WorldState) -> dict:
    return {
        "grill": item_to_json(world.grill),
        "sink": item_to_json(world.sink),
        "board": item_to_json(world.board),
        "counters": [[list(cell), item_to_json(item)] for cell, item in world.counters],
        "orders_remaining": world.orders_remaining,
        "plate_stack": world.plate_stack,
        "timestep": world.timestep,
    }


def agent_to_json(agent: AgentState) -> dict:
    return {
        "position": list(agent.position),
        "orientation": agent.orientation.value,
        "held": item_to_json(agent.held),
    }
