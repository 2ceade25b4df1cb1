"""Shared-table two-agent pick-and-place simulator and experiment harness."""

from .config import SafetyParams, SimConfig
from .conflict import Bases, ConflictParams, conflict_count, conflicts, default_bases
from .episode import EpisodeEngine, EpisodeTrace, NonTermination, run_episode
from .experiment import Condition, TrialMetrics, extract_metrics, run_batch
from .policy import (
    HumanSimController,
    Policy,
    SupportiveController,
    TaskOrientedController,
    build_supportive,
    build_task_oriented,
    synthesize_policy,
)
from .stats import AllZeroDifferences, wilcoxon_signed_rank
from .world import (
    HUMAN,
    IDLE,
    ROBOT,
    Block,
    BoardState,
    GridSpec,
    TaskAction,
    apply,
    cell_center,
    is_goal,
    load_scenario,
)

__all__ = [name for name in dir() if not name.startswith("_")]
