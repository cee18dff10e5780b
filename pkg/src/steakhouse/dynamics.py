"""Joint two-agent step dynamics and the station interact table.

One step resolves in a fixed order: the grill timer ticks for meat already
cooking, then the human's action, then the robot's, then the timestep
advances and the human KB is refreshed. The human resolves first wherever
the agents contend: simultaneous moves into one cell leave the robot in
place, and a swap attempt strands both. A blocked move still turns the
agent, which is how an agent comes to face a station.

Interacts apply at most one table row; anything unmatched is a no-op.
"""

from __future__ import annotations

from dataclasses import replace

from .actions import Action, Cell, MOVE_HEADINGS, ahead
from .items import (CLEAN, COOKED, COOKING, DIRTY, IN_SINK, RAW,
                    Dish, Meat, Onion, Plate)
from .layout import (BOARD, COUNTER, GRILL, Layout, MEAT_DISPENSER,
                     ONION_DISPENSER, PLATE_DISPENSER, SERVING, SINK)
from .perception import kb_touch_cell, kb_touch_robot, kb_update
from .state import AgentState, DomainConfig, JointState, WorldState


def interact_effect(agent: AgentState, world: WorldState, facing: Cell,
                    cfg: DomainConfig) -> tuple[AgentState, WorldState]:
    layout = cfg.layout
    if not layout.in_bounds(facing):
        return agent, world
    tile = layout.tile_at(facing)
    held = agent.held

    if tile == ONION_DISPENSER and held is None:
        return replace(agent, held=Onion()), world
    if tile == MEAT_DISPENSER and held is None:
        return replace(agent, held=Meat(RAW)), world
    if tile == PLATE_DISPENSER and held is None and world.plate_stack > 0:
        return (replace(agent, held=Plate(DIRTY)),
                replace(world, plate_stack=world.plate_stack - 1))

    if tile == GRILL:
        if (isinstance(held, Meat) and held.status == RAW
                and world.grill is None):
            return replace(agent, held=None), replace(world, grill=Meat(COOKING, 0))
        if (isinstance(held, Plate) and held.status == CLEAN
                and world.grill is not None and world.grill.status == COOKED):
            return (replace(agent, held=Dish(has_steak=True)),
                    replace(world, grill=None))
        return agent, world

    if tile == BOARD:
        if (isinstance(held, Onion) and held.chops == 0 and world.board is None):
            return replace(agent, held=None), replace(world, board=held)
        if held is None and world.board is not None \
                and world.board.chops < cfg.chop_interacts:
            return agent, replace(world, board=Onion(world.board.chops + 1))
        if (isinstance(held, Dish) and held.has_steak and not held.has_garnish
                and world.board is not None
                and world.board.chops >= cfg.chop_interacts):
            return (replace(agent, held=Dish(has_steak=True, has_garnish=True)),
                    replace(world, board=None))
        return agent, world

    if tile == SINK:
        if isinstance(held, Plate) and held.status == DIRTY and world.sink is None:
            return replace(agent, held=None), replace(world, sink=Plate(IN_SINK, 0))
        if held is None and world.sink is not None:
            if world.sink.status == IN_SINK:
                washes = world.sink.washes + 1
                done = washes >= cfg.wash_interacts
                plate = Plate(CLEAN, 0) if done else Plate(IN_SINK, washes)
                return agent, replace(world, sink=plate)
            if world.sink.status == CLEAN:
                return replace(agent, held=world.sink), replace(world, sink=None)
        return agent, world

    if tile == SERVING:
        if (isinstance(held, Dish) and held.has_steak and held.has_garnish
                and world.orders_remaining > 0):
            return (replace(agent, held=None),
                    replace(world, orders_remaining=world.orders_remaining - 1))
        return agent, world

    if tile == COUNTER:
        existing = world.counter_item(facing)
        if held is not None and existing is None:
            return replace(agent, held=None), world.with_counter(facing, held)
        if held is None and existing is not None:
            return replace(agent, held=existing), world.with_counter(facing, None)

    return agent, world


def _apply_action(agent: AgentState, action: Action, other: Cell,
                  world: WorldState, cfg: DomainConfig
                  ) -> tuple[AgentState, WorldState, Cell | None, bool]:
    """Returns (agent, world, interacted-at cell, move blocked by other agent)."""
    if action == Action.STAY:
        return agent, world, None, False
    if action == Action.INTERACT:
        facing = ahead(agent.position, agent.orientation)
        agent, world = interact_effect(agent, world, facing, cfg)
        return agent, world, facing, False
    heading = MOVE_HEADINGS[action]
    target = ahead(agent.position, heading)
    if cfg.layout.is_floor(target) and target != other:
        return AgentState(target, heading, agent.held), world, None, False
    return (AgentState(agent.position, heading, agent.held), world, None,
            target == other)


def step(state: JointState, robot_action: Action, human_action: Action,
         cfg: DomainConfig) -> JointState:
    world = state.world
    if world.grill is not None and world.grill.status == COOKING:
        elapsed = world.grill.elapsed + 1
        meat = Meat(COOKED, 0) if elapsed >= cfg.cook_time else Meat(COOKING, elapsed)
        world = replace(world, grill=meat)

    human, world, touched, bumped = _apply_action(
        state.human, human_action, state.robot.position, world, cfg)
    robot, world, _, bumped_back = _apply_action(
        state.robot, robot_action, human.position, world, cfg)
    world = replace(world, timestep=world.timestep + 1)
    kb = kb_update(state.human_kb, world, robot, human, cfg.layout, cfg.fov)
    if touched is not None:
        # the human knows the result of its own interaction attempt
        kb = kb_touch_cell(kb, world, touched, cfg.layout, cfg.fov.ack_delay)
    if bumped or bumped_back:
        # physical contact in either direction reveals the robot's position
        kb = kb_touch_robot(kb, robot.position, cfg.layout, cfg.fov.ack_delay)
    return JointState(world, robot, human, kb, state.human_subtask)


def is_terminal(state: JointState, layout: Layout) -> bool:
    return (state.world.orders_remaining == 0
            or state.world.timestep >= layout.horizon)
