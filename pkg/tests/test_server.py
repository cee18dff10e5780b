import json

import pytest

from steakhouse import Action, parse_layout, visible_cells
from steakhouse.config import RunConfig
from steakhouse.kb import FovParams
from steakhouse.server import (PHASE_AWAITING, PHASE_RUNNING, PHASE_TERMINAL,
                               build_frame, create_app, new_session,
                               session_tick)

SMALL = """orders: 1
horizon: 120
XXMXGXX
X     X
B  X  D
X  X  X
XH R  X
XOXSXPX
"""


@pytest.fixture
def layout():
    return parse_layout(SMALL, name="small")


@pytest.fixture
def session(layout):
    return new_session(layout, "fov", RunConfig(), seed=0)


class TestSessionTick:
    def test_initial_phase_awaits_subtask(self, session):
        assert session.phase == PHASE_AWAITING
        frame = build_frame(session)
        assert frame["type"] == "state"
        assert "PickupMeat" in frame["available_subtasks"]

    def test_select_subtask_starts_running(self, session):
        session, frame = session_tick(session,
                                      {"type": "select_subtask",
                                       "id": "PickupMeat"})
        assert "error" not in frame
        assert session.phase == PHASE_RUNNING
        assert frame["selected_subtask"] == "PickupMeat"

    def test_unavailable_subtask_rejected(self, session):
        session, frame = session_tick(session,
                                      {"type": "select_subtask",
                                       "id": "Deliver"})
        assert "error" in frame
        assert session.state.world.timestep == 0  # state unchanged

    def test_unknown_directive_rejected(self, session):
        session, frame = session_tick(session, {"type": "dance"})
        assert "error" in frame

    def test_subtask_completion_returns_to_awaiting(self, session):
        session, frame = session_tick(session,
                                      {"type": "select_subtask",
                                       "id": "PickupMeat"})
        for _ in range(30):
            session, frame = session_tick(session)
            if session.state.human.held is not None:
                break
        assert session.state.human.held is not None
        session, frame = session_tick(session)
        # the pickup has completed; the engine re-awaits a directive unless
        # the follow-up is selected
        assert frame["phase"] in (PHASE_AWAITING, PHASE_RUNNING)

    def test_interrupt_overrides_one_tick(self, session):
        # drive the human to hold meat, then interrupt-place it on a counter
        session, _ = session_tick(session, {"type": "select_subtask",
                                            "id": "PickupMeat"})
        for _ in range(30):
            session, _ = session_tick(session)
            if session.state.human.held is not None:
                break
        held_before = session.state.human.held
        assert held_before is not None
        interrupts_before = session.interrupts
        # face west toward the empty left wall counter at (0, y)
        session, frame = session_tick(session, {"type": "interrupt",
                                                "action": "Left"})
        assert session.interrupts == interrupts_before + 1
        session, frame = session_tick(session, {"type": "interrupt",
                                                "action": "Left"})
        session, frame = session_tick(session, {"type": "interrupt",
                                                "action": "Interact"})
        # whether or not a counter was in reach, the directives were counted
        assert session.interrupts == interrupts_before + 3

    def test_visibility_parity_over_session(self, session):
        cfg = session.cfg
        session, frame = session_tick(session, {"type": "select_subtask",
                                                "id": "PickupMeat"})
        for _ in range(50):
            mask = {tuple(c) for c in frame["visible_cells"]}
            human = session.state.human
            expected = visible_cells(human.position, human.orientation,
                                     session.layout, cfg.human_fov)
            assert mask == expected
            session, frame = session_tick(session)

    def test_reset_directive(self, session):
        session, _ = session_tick(session, {"type": "select_subtask",
                                            "id": "PickupMeat"})
        for _ in range(5):
            session, _ = session_tick(session)
        assert session.state.world.timestep > 0
        session, frame = session_tick(session, {"type": "reset", "seed": 9})
        assert session.state.world.timestep == 0
        assert session.seed == 9
        assert frame["t"] == 0

    def test_terminal_phase_blocks_directives(self, session):
        from dataclasses import replace
        terminal = replace(
            session,
            state=replace(session.state,
                          world=replace(session.state.world,
                                        orders_remaining=0)),
            phase=PHASE_TERMINAL)
        after, frame = session_tick(terminal, {"type": "select_subtask",
                                               "id": "PickupMeat"})
        assert "error" in frame
        assert after.state == terminal.state

    def test_pause_on_choice_freezes_world(self, layout):
        from dataclasses import replace as drep
        cfg = drep(RunConfig(), pause_on_choice=True)
        session = new_session(layout, "fov", cfg, seed=0)
        session, frame = session_tick(session)
        assert session.state.world.timestep == 0  # paused while awaiting
        session, frame = session_tick(session, {"type": "select_subtask",
                                                "id": "PickupMeat"})
        assert session.state.world.timestep == 1


class TestWebSocketProtocol:
    def test_session_over_websocket(self, layout):
        from fastapi.testclient import TestClient

        app = create_app(layout, "fov", RunConfig())
        client = TestClient(app)
        info = client.get("/info").json()
        assert info["layout"] == "small"
        with client.websocket_connect("/session") as ws:
            first = json.loads(ws.receive_text())
            assert first["type"] == "state"
            assert first["t"] == 0
            ws.send_text(json.dumps({"type": "select_subtask",
                                     "id": "PickupMeat"}))
            frame = json.loads(ws.receive_text())
            assert frame["selected_subtask"] == "PickupMeat"
            ws.send_text(json.dumps({"type": "interrupt", "action": "Stay"}))
            frame = json.loads(ws.receive_text())
            assert frame["interrupts"] == 1

    def test_malformed_json_yields_error_frame(self, layout):
        from fastapi.testclient import TestClient

        app = create_app(layout, "fov", RunConfig())
        client = TestClient(app)
        with client.websocket_connect("/session") as ws:
            ws.receive_text()
            ws.send_text("{not json")
            frame = json.loads(ws.receive_text())
            assert "error" in frame
