"""Steakhouse: a cooperative cooking gridworld where the robot plans around
the human's limited field of view."""

from .actions import ACTIONS, Action, Cell, Heading
from .belief import Belief, Observation, belief_update, init_belief, observe
from .config import RunConfig, load_run_config
from .dynamics import interact_effect, is_terminal, step
from .human import HumanPolicyState, advance, plan_step, select_subtask
from .items import Dish, Meat, Onion, Plate
from .kb import FULL_PERCEPTION, FovParams, KnowledgeBase
from .layout import Layout, LayoutError, layout_text, parse_layout
from .perception import kb_from_world, kb_gap, kb_update, visible_cells
from .planner import (AbstractState, PlannerConfig, StreamKey, TransitionEstimate,
                      abstract, abstract_value, q_value, sample_transitions,
                      select_action, transition_cost)
from .state import AgentState, DomainConfig, JointState, WorldState, initial_joint_state
from .subtasks import Subtask, available_subtasks

__all__ = [name for name in dir() if not name.startswith("_")]
