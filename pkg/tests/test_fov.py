import numpy as np
import pytest
from dataclasses import replace

from steakhouse import (AgentState, FovParams, FULL_PERCEPTION, Heading,
                        KnowledgeBase, Meat, Onion, Plate, WorldState,
                        kb_from_world, kb_gap, kb_update, parse_layout,
                        visible_cells)
from steakhouse.actions import HEADING_VECTORS
from steakhouse.items import COOKING, DIRTY, RAW
from steakhouse.state import initial_kb

from oracles import cells_in_cone

FOV120 = FovParams(fov_angle=120.0, ack_delay=3)


class TestVisibleCells:
    def test_on_axis_cell_visible(self, open_room):
        vis = visible_cells((2, 2), Heading.E, open_room, FOV120)
        assert (3, 2) in vis

    def test_perpendicular_cell_not_visible(self, open_room):
        vis = visible_cells((2, 2), Heading.E, open_room, FOV120)
        assert (2, 1) not in vis

    def test_own_cell_always_visible(self, open_room):
        for heading in Heading:
            assert (2, 2) in visible_cells((2, 2), heading, open_room, FOV120)

    def test_matches_exhaustive_angle_oracle(self, open_room):
        for heading in Heading:
            for pos in [(2, 2), (1, 1), (3, 4)]:
                vis = visible_cells(pos, heading, open_room, FOV120)
                oracle = cells_in_cone(open_room, pos,
                                       HEADING_VECTORS[heading], 120.0)
                assert vis == oracle, (pos, heading)

    def test_full_circle_sees_everything(self, open_room):
        vis = visible_cells((3, 3), Heading.N, open_room,
                            FovParams(fov_angle=360.0, ack_delay=1))
        assert vis == frozenset(open_room.all_cells())

    def test_rotation_symmetry(self):
        # square open room: rotating (position, heading) by 90 degrees
        # rotates the visible set with it
        text = "orders: 1\nXXXXXXX\nX     X\nX     X\nX H R X\nX     X\nX     X\nXXXXXXX\n"
        layout = parse_layout(text)
        n = layout.width  # == height

        def rot(cell):
            x, y = cell
            return (n - 1 - y, x)

        rot_heading = {Heading.N: Heading.E, Heading.E: Heading.S,
                       Heading.S: Heading.W, Heading.W: Heading.N}
        for pos in [(2, 2), (3, 3), (1, 4)]:
            for heading in Heading:
                vis = visible_cells(pos, heading, layout, FOV120)
                vis_rot = visible_cells(rot(pos), rot_heading[heading],
                                        layout, FOV120)
                assert {rot(c) for c in vis} == vis_rot

    def test_occlusion_blocks_behind_walls(self):
        text = "orders: 1\nXXXXX\nXH XX\nXXXXX\n".replace("XX\nXXXXX", " X\nXXXXX")
        layout = parse_layout(
            "orders: 1\nXXXXXX\nXH  RX\nXXXXXX\n")
        occluded = visible_cells((1, 1), Heading.E, layout,
                                 FovParams(fov_angle=120, ack_delay=3,
                                           occlusion=True))
        free = visible_cells((1, 1), Heading.E, layout, FOV120)
        assert occluded <= free


def _update(kb, world, robot, human, layout, params=FOV120):
    return kb_update(kb, world, robot, human, layout, params)


class TestKbUpdate:
    def test_three_step_acknowledgment_of_robot_held(self, open_room):
        # robot holding an onion enters the view and stays three updates
        kb = initial_kb(open_room)
        world = WorldState(orders_remaining=1, plate_stack=1)
        human = AgentState((2, 2), Heading.E)
        robot = AgentState((4, 2), Heading.W, held=Onion(0))
        kb = _update(kb, world, robot, human, open_room)
        assert kb.robot_held is None
        kb = _update(kb, world, robot, human, open_room)
        assert kb.robot_held is None
        kb = _update(kb, world, robot, human, open_room)
        assert kb.robot_held == Onion(0)
        assert kb.robot_seen_at == (4, 2)

    def test_last_seen_status_persists(self, micro_kitchen):
        # human sees the whole board with an onion, turns away, the onion
        # gets chopped: the KB keeps the stale whole onion
        layout = micro_kitchen
        kb = initial_kb(layout)
        human = AgentState((2, 2), Heading.S)  # faces the board at (2,3)
        robot = AgentState((3, 2), Heading.N)
        world = WorldState(board=Onion(0), orders_remaining=1, plate_stack=1)
        for _ in range(3):
            kb = _update(kb, world, robot, human, layout)
        assert kb.board == Onion(0)
        away = replace(human, orientation=Heading.N)
        chopped = replace(world, board=Onion(2))
        for _ in range(5):
            kb = _update(kb, chopped, robot, away, layout)
        assert kb.board == Onion(0)

    def test_observed_absence_clears_after_delay(self, micro_kitchen):
        layout = micro_kitchen
        kb = initial_kb(layout)
        human = AgentState((2, 2), Heading.S)
        robot = AgentState((3, 2), Heading.N)
        world = WorldState(board=Onion(0), orders_remaining=1, plate_stack=1)
        for _ in range(3):
            kb = _update(kb, world, robot, human, layout)
        assert kb.board == Onion(0)
        # onion disappears while the human keeps staring at the board
        empty = replace(world, board=None)
        kb = replace(kb, pending=(0,) * len(kb.pending))  # fresh look
        kb = _update(kb, empty, robot, human, layout)
        assert kb.board == Onion(0)
        kb = _update(kb, empty, robot, human, layout)
        kb = _update(kb, empty, robot, human, layout)
        assert kb.board is None

    def test_full_view_equivalence(self, micro_kitchen):
        # 360 degrees and delay 1: the KB matches the world after one update
        layout = micro_kitchen
        rng = np.random.default_rng(5)
        kb = initial_kb(layout)
        from steakhouse import Action, DomainConfig, initial_joint_state, step
        cfg = DomainConfig(layout=layout, fov=FULL_PERCEPTION)
        state = initial_joint_state(layout)
        actions = list(Action)
        for _ in range(200):
            ra, ha = rng.integers(0, len(actions), size=2)
            state = step(state, actions[ra], actions[ha], cfg)
            assert kb_gap(state.human_kb, state.world, state.robot) == 0

    def test_value_change_mid_visibility_syncs_live(self, micro_kitchen):
        # once a feature has been visible for the delay, later changes are
        # acknowledged immediately while it stays in view
        layout = micro_kitchen
        kb = initial_kb(layout)
        human = AgentState((2, 2), Heading.S)
        robot = AgentState((3, 2), Heading.N)
        world = WorldState(board=Onion(0), orders_remaining=1, plate_stack=1)
        for _ in range(4):
            kb = _update(kb, world, robot, human, layout)
        world = replace(world, board=Onion(1))
        kb = _update(kb, world, robot, human, layout)
        assert kb.board == Onion(1)


class TestKbGap:
    def test_single_stale_feature(self, micro_kitchen):
        world = WorldState(board=Onion(2), orders_remaining=1)
        robot = AgentState((3, 2), Heading.N)
        kb = kb_from_world(world, robot, micro_kitchen)
        stale = replace(kb, board=Onion(0))
        assert kb_gap(stale, world, robot) == 1

    def test_identical_is_zero(self, micro_kitchen):
        world = WorldState(grill=Meat(COOKING, 3), orders_remaining=1)
        robot = AgentState((3, 2), Heading.N, held=Plate(DIRTY))
        kb = kb_from_world(world, robot, micro_kitchen)
        assert kb_gap(kb, world, robot) == 0

    def test_two_stale_features_add(self, micro_kitchen):
        world = WorldState(grill=Meat(COOKING, 3), board=Onion(2),
                           orders_remaining=1)
        robot = AgentState((3, 2), Heading.N)
        kb = kb_from_world(world, robot, micro_kitchen)
        stale = replace(kb, board=Onion(0), grill=None)
        assert kb_gap(stale, world, robot) == 2

    def test_counter_gap_counts_occupied_cells(self, micro_kitchen):
        world = WorldState(orders_remaining=1,
                           counters=(((0, 1), Onion(0)),))
        robot = AgentState((3, 2), Heading.N)
        kb = kb_from_world(world, robot, micro_kitchen)
        # KB thinks another counter holds a plate, and misses the onion
        wrong = replace(kb, counters=(((0, 2), Plate(DIRTY)),))
        assert kb_gap(wrong, world, robot) == 2


class TestRandomizedKbRules:
    def test_frame_property_features_out_of_view_never_change(self, micro_kitchen):
        layout = micro_kitchen
        rng = np.random.default_rng(23)
        from steakhouse import Action, DomainConfig, initial_joint_state, step
        cfg = DomainConfig(layout=layout)
        state = initial_joint_state(layout)
        actions = list(Action)
        for _ in range(300):
            prev = state
            ra, ha = rng.integers(0, len(actions), size=2)
            state = step(state, actions[ra], actions[ha], cfg)
            vis = visible_cells(state.human.position, state.human.orientation,
                                layout, cfg.fov)
            touched = None
            if actions[ha] == Action.INTERACT:
                from steakhouse.actions import ahead
                touched = ahead(prev.human.position, prev.human.orientation)
            if layout.grill_cell not in vis and layout.grill_cell != touched:
                assert state.human_kb.grill == prev.human_kb.grill
            if layout.board_cell not in vis and layout.board_cell != touched:
                assert state.human_kb.board == prev.human_kb.board
            if layout.sink_cell not in vis and layout.sink_cell != touched:
                assert state.human_kb.sink == prev.human_kb.sink
