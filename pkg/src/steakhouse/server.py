"""Interactive session engine and websocket server for human-in-the-loop play.

The human player steers by picking subtasks (movement follows the engine's
shortest-path executor) and may override single ticks with interrupt actions.
The robot runs its planner every tick. Each state frame carries the human's
visibility mask so the client renders FOV dimming without any game logic of
its own.

Protocol (text frames, JSON):
  server -> client: {"type":"state", t, grid, agents, visible_cells, kb,
                     available_subtasks, score, interrupts, ...}
  client -> server: {"type":"select_subtask","id":...}
                    {"type":"interrupt","action":...}
                    {"type":"reset","seed":...}
"""

from __future__ import annotations

import asyncio
import json
from dataclasses import dataclass, replace

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .actions import ACTIONS, Action
from .belief import Belief, belief_update, init_belief, observe
from .config import RunConfig
from .dynamics import is_terminal, step
from .human import _subtask_done, plan_step
from .items import item_to_json
from .kb import kb_to_json
from .layout import Layout, layout_text
from .perception import visible_cells
from .planner import PlannerConfig, StreamKey, planner_view, select_action
from .state import JointState, agent_to_json, initial_joint_state
from .subtasks import Subtask, available_subtasks

PHASE_AWAITING = "awaiting_human_subtask"
PHASE_RUNNING = "running"
PHASE_TERMINAL = "terminal"


@dataclass
class SessionState:
    session_id: str
    layout: Layout
    cfg: RunConfig
    planner_id: str
    pcfg: PlannerConfig
    seed: int
    state: JointState
    belief: Belief
    human_subtask: Subtask | None = None
    tick: int = 0
    interrupts: int = 0
    deliveries: int = 0
    phase: str = PHASE_AWAITING


def new_session(layout: Layout, planner_id: str, cfg: RunConfig, seed: int = 0,
                session_id: str = "local") -> SessionState:
    dom = cfg.domain_config(layout)
    pcfg = cfg.planner_config(dom, planner_id)
    if cfg.time_budget_ms is None:
        # live sessions must answer within a tick even if logs would rather
        # have the budget machinery off
        pcfg = replace(pcfg, time_budget_ms=1000.0)
    state = initial_joint_state(layout)
    belief = init_belief(planner_view(observe(state), pcfg), cfg.chop_interacts)
    return SessionState(session_id=session_id, layout=layout, cfg=cfg,
                        planner_id=planner_id, pcfg=pcfg, seed=seed,
                        state=state, belief=belief)


def build_frame(session: SessionState, error: str | None = None) -> dict:
    state = session.state
    layout = session.layout
    mask = visible_cells(state.human.position, state.human.orientation,
                         layout, session.cfg.human_fov)
    available = available_subtasks(state.human_kb, state.human.held,
                                   session.cfg.chop_interacts)
    frame = {
        "type": "state",
        "t": state.world.timestep,
        "grid": list(layout.rows),
        "agents": {
            "robot": agent_to_json(state.robot),
            "human": agent_to_json(state.human),
        },
        "stations": {
            "grill": item_to_json(state.world.grill),
            "sink": item_to_json(state.world.sink),
            "board": item_to_json(state.world.board),
            "counters": [[list(c), item_to_json(i)]
                         for c, i in state.world.counters],
        },
        "visible_cells": sorted(list(c) for c in mask),
        "kb": kb_to_json(state.human_kb),
        "available_subtasks": sorted(s.value for s in available),
        "selected_subtask": session.human_subtask.value
        if session.human_subtask else None,
        "score": session.deliveries,
        "orders_remaining": state.world.orders_remaining,
        "plate_stack": state.world.plate_stack,
        "interrupts": session.interrupts,
        "phase": session.phase,
    }
    if error is not None:
        frame["error"] = error
    return frame


def _parse_directive(directive: dict) -> tuple[str, object]:
    kind = directive.get("type")
    if kind == "select_subtask":
        try:
            return kind, Subtask(directive.get("id"))
        except ValueError:
            raise ValueError(f"unknown subtask {directive.get('id')!r}")
    if kind == "interrupt":
        try:
            return kind, Action(directive.get("action"))
        except ValueError:
            raise ValueError(f"unknown action {directive.get('action')!r}")
    if kind == "reset":
        seed = directive.get("seed", 0)
        if not isinstance(seed, int):
            raise ValueError("reset seed must be an integer")
        return kind, seed
    raise ValueError(f"unknown directive type {kind!r}")


def session_tick(session: SessionState,
                 directive: dict | None = None) -> tuple[SessionState, dict]:
    """Advance one tick, applying at most one human directive."""
    interrupt_action: Action | None = None
    if directive is not None:
        try:
            kind, value = _parse_directive(directive)
        except ValueError as exc:
            return session, build_frame(session, error=str(exc))
        if kind == "reset":
            session = new_session(session.layout, session.planner_id,
                                  session.cfg, seed=value,
                                  session_id=session.session_id)
            return session, build_frame(session)
        if session.phase == PHASE_TERMINAL:
            return session, build_frame(session, error="session is over")
        if kind == "select_subtask":
            available = available_subtasks(session.state.human_kb,
                                           session.state.human.held,
                                           session.cfg.chop_interacts)
            if value not in available:
                return session, build_frame(
                    session, error=f"{value.value} is not available")
            session = replace(session, human_subtask=value,
                              phase=PHASE_RUNNING)
        elif kind == "interrupt":
            interrupt_action = value
            session = replace(session, interrupts=session.interrupts + 1)

    if session.phase == PHASE_TERMINAL:
        return session, build_frame(session)
    if (session.phase == PHASE_AWAITING and session.cfg.pause_on_choice
            and interrupt_action is None):
        return session, build_frame(session)

    state = session.state
    layout = session.layout
    cfg = session.cfg
    dom = cfg.domain_config(layout)

    subtask = session.human_subtask
    if subtask is not None and _subtask_done(subtask, state.human_kb,
                                             state.human.held, dom):
        subtask = None
    if subtask is not None:
        available = available_subtasks(state.human_kb, state.human.held,
                                       cfg.chop_interacts)
        if subtask not in available:
            subtask = None

    if interrupt_action is not None:
        human_action = interrupt_action
    elif subtask is not None:
        human_action = plan_step(state.human, state.human_kb, subtask, layout)
    else:
        human_action = Action.STAY

    obs = planner_view(observe(state), session.pcfg)
    key = StreamKey(session.seed, state.world.timestep)
    robot_action, _ = select_action(session.belief, obs, session.pcfg, key)

    prev_obs = obs
    prev_orders = state.world.orders_remaining
    state = replace(state, human_subtask=subtask or Subtask.IDLE)
    state = step(state, robot_action, human_action, dom)
    delivered = state.world.orders_remaining < prev_orders

    belief = belief_update(session.belief, prev_obs,
                           planner_view(observe(state), session.pcfg),
                           layout, cfg.alpha, cfg.beta, cfg.chop_interacts)
    phase = PHASE_RUNNING if subtask is not None else PHASE_AWAITING
    if is_terminal(state, layout):
        phase = PHASE_TERMINAL
    session = replace(
        session, state=state, belief=belief, human_subtask=subtask,
        tick=session.tick + 1, phase=phase,
        deliveries=session.deliveries + (1 if delivered else 0))
    return session, build_frame(session)


def create_app(layout: Layout, planner_id: str, cfg: RunConfig) -> FastAPI:
    app = FastAPI(title="steakhouse session server")
    counter = {"n": 0}

    @app.get("/info")
    def info():
        return {"layout": layout.name, "layout_text": layout_text(layout),
                "planner": planner_id, "tick_ms": cfg.tick_ms}

    @app.websocket("/session")
    async def session_ws(ws: WebSocket):
        await ws.accept()
        counter["n"] += 1
        session = new_session(layout, planner_id, cfg,
                              session_id=f"s{counter['n']}")
        await ws.send_text(json.dumps(build_frame(session), sort_keys=True))
        try:
            while True:
                directive = None
                try:
                    raw = await asyncio.wait_for(ws.receive_text(),
                                                 timeout=cfg.tick_ms / 1000.0)
                    directive = json.loads(raw)
                except asyncio.TimeoutError:
                    pass
                except json.JSONDecodeError:
                    directive = {"type": "malformed"}
                session, frame = session_tick(session, directive)
                await ws.send_text(json.dumps(frame, sort_keys=True))
        except WebSocketDisconnect:
            return

    return app
