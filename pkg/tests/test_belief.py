import math

import pytest
from dataclasses import replace

from steakhouse import (AgentState, Belief, DomainConfig, Heading, Meat,
                        Onion, Plate, WorldState, belief_update, init_belief,
                        initial_joint_state, observe)
from steakhouse.belief import Observation
from steakhouse.items import CLEAN, COOKED, IN_SINK
from steakhouse.perception import kb_from_world
from steakhouse.subtasks import Subtask


def make_obs(layout, kb, human_pos=(2, 2), heading=Heading.N, held=None,
             world=None, robot=None):
    return Observation(
        human_position=human_pos, human_orientation=heading, human_held=held,
        robot=robot or AgentState((3, 3), Heading.N),
        world=world or WorldState(orders_remaining=1, plate_stack=1),
        human_kb=kb)


def kb_with(layout, **kwargs):
    from steakhouse import KnowledgeBase
    defaults = dict(orders_remaining=1, plate_stack=1)
    defaults.update(kwargs)
    return KnowledgeBase(**defaults)


class TestInitBelief:
    def test_two_options_half_half(self, micro_kitchen):
        kb = kb_with(micro_kitchen, sink=Plate(CLEAN, 0), grill=Meat(COOKED, 0))
        belief = init_belief(make_obs(micro_kitchen, kb))
        assert belief.prob(Subtask.PICKUP_CLEAN_PLATE) == pytest.approx(0.5)
        assert belief.prob(Subtask.PICKUP_ONION) == pytest.approx(0.5)

    def test_single_option_point_mass(self, micro_kitchen):
        kb = kb_with(micro_kitchen, robot_held=Onion(0))
        belief = init_belief(make_obs(micro_kitchen, kb))
        assert belief.prob(Subtask.PICKUP_MEAT) == pytest.approx(1.0)

    def test_nothing_feasible_idles(self, micro_kitchen):
        kb = kb_with(micro_kitchen, orders_remaining=0)
        belief = init_belief(make_obs(micro_kitchen, kb))
        assert belief.prob(Subtask.IDLE) == pytest.approx(1.0)


class TestBeliefUpdate:
    def test_approach_increases_target_probability(self, micro_kitchen):
        # human walks toward the sink while facing it
        kb = kb_with(micro_kitchen, sink=Plate(IN_SINK, 0),
                     grill=Meat(COOKED, 0), board=Onion(0))
        prev = make_obs(micro_kitchen, kb, human_pos=(2, 2), heading=Heading.N)
        belief = init_belief(prev)
        before = belief.prob(Subtask.WASH_PLATE)
        assert before > 0
        cur = make_obs(micro_kitchen, kb, human_pos=(3, 2), heading=Heading.N)
        updated = belief_update(belief, prev, cur, micro_kitchen)
        assert updated.prob(Subtask.WASH_PLATE) > before

    def test_infeasible_hypothesis_zeroed(self, micro_kitchen):
        kb = kb_with(micro_kitchen, sink=Plate(IN_SINK, 0), board=Onion(0))
        prev = make_obs(micro_kitchen, kb)
        belief = init_belief(prev)
        assert belief.prob(Subtask.WASH_PLATE) > 0
        # sink suddenly believed clean without a cooked steak: washing gone
        kb2 = kb_with(micro_kitchen, sink=Plate(CLEAN, 0), board=Onion(0))
        cur = make_obs(micro_kitchen, kb2)
        updated = belief_update(belief, prev, cur, micro_kitchen)
        assert updated.prob(Subtask.WASH_PLATE) == 0.0

    def test_normalization(self, micro_kitchen):
        kb = kb_with(micro_kitchen, sink=Plate(IN_SINK, 1),
                     grill=Meat(COOKED, 0), board=Onion(1))
        prev = make_obs(micro_kitchen, kb, human_pos=(1, 2))
        belief = init_belief(prev)
        cur = make_obs(micro_kitchen, kb, human_pos=(2, 2), heading=Heading.E)
        for _ in range(5):
            belief = belief_update(belief, prev, cur, micro_kitchen)
            assert sum(p for _, p in belief.probs) == pytest.approx(1.0, abs=1e-9)

    def test_held_change_reinitializes(self, micro_kitchen):
        kb = kb_with(micro_kitchen, board=Onion(0), grill=Meat(COOKED, 0),
                     sink=Plate(CLEAN, 0))
        prev = make_obs(micro_kitchen, kb)
        belief = Belief(((Subtask.CHOP_ONION, 1.0),))
        cur = make_obs(micro_kitchen, kb, held=Plate(CLEAN, 0))
        updated = belief_update(belief, prev, cur, micro_kitchen)
        assert updated == init_belief(cur)

    def test_all_mass_zero_reinitializes(self, micro_kitchen):
        kb = kb_with(micro_kitchen, board=Onion(0))
        prev = make_obs(micro_kitchen, kb)
        belief = Belief(((Subtask.DELIVER, 1.0),))  # infeasible empty-handed
        cur = make_obs(micro_kitchen, kb)
        updated = belief_update(belief, prev, cur, micro_kitchen)
        assert updated == init_belief(cur)

    def test_symmetric_targets_stay_uniform(self):
        # two serving counters mirrored around a vertical axis; the human
        # stands on it facing N, equidistant and angle-symmetric to both
        from steakhouse import parse_layout
        layout = parse_layout(
            "orders: 2\nXXXXXXX\nD     D\nX  H  X\nX  R  X\nXXXXXXX\n")
        from steakhouse import KnowledgeBase
        kb = KnowledgeBase(orders_remaining=2, plate_stack=2)
        # hypotheses over two symmetric delivery targets is not expressible
        # with the single Deliver subtask, so check the weaker invariant:
        # an update with no movement and a symmetric heading keeps the
        # distribution unchanged
        prev = Observation((3, 2), Heading.N, None,
                           AgentState((3, 3), Heading.N),
                           WorldState(orders_remaining=2, plate_stack=2), kb)
        belief = init_belief(prev)
        cur = prev
        updated = belief_update(belief, prev, cur, layout)
        for subtask, p in belief.probs:
            assert updated.prob(subtask) == pytest.approx(p, abs=1e-9)
