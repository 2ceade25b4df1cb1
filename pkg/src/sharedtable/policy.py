"""Action sets, the ranked-action policy synthesizer and the agent controllers.

The robot runs in one of two modes.  Task-oriented: sample uniformly among
feasible moves of its own blocks to their destinations.  Supportive: follow a
fixed ranked action list built ahead of time that interleaves task-oriented
moves with moves of the other agent's blocks chosen to defuse goal conflicts,
falling back to task-oriented sampling when the list is exhausted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .conflict import Bases, ConflictParams, conflict_count, conflicts
from .geometry import dist
from .world import (
    HUMAN,
    IDLE,
    ROBOT,
    Block,
    BoardState,
    Cell,
    GridSpec,
    TaskAction,
    apply,
    cell_center,
)

RULE_TASK = "rule-2"
RULE_SUPPORT = "rule-3"


@dataclass(frozen=True)
class ActionSet:
    kind: str  # "task-oriented" | "supportive"
    actions: tuple[TaskAction, ...]


@dataclass(frozen=True)
class PolicyEntry:
    action: TaskAction
    rule: str  # RULE_TASK | RULE_SUPPORT


@dataclass(frozen=True)
class Policy:
    entries: tuple[PolicyEntry, ...]

    def actions(self) -> tuple[TaskAction, ...]:
        return tuple(e.action for e in self.entries)

    def supportive_count(self) -> int:
        return sum(1 for e in self.entries if e.rule == RULE_SUPPORT)


def _rows_to_side(grid: GridSpec, cell: Cell, side_row: int) -> int:
    """Row count from a cell to a border row (0 on the border row itself)."""
    return abs(cell[0] - side_row)


def closer_to_robot(grid: GridSpec, cell: Cell) -> bool:
    return _rows_to_side(grid, cell, grid.robot_side) < _rows_to_side(grid, cell, grid.human_side)


def build_task_oriented(state: BoardState, owner: str) -> ActionSet:
    """One move per displaced block of the owner, to its destination, id order."""
    actions = tuple(
        TaskAction.move(b.id, b.location, b.destination)
        for b in sorted(state.owned_by(owner), key=lambda b: b.id)
        if b.displaced()
    )
    return ActionSet("task-oriented", actions)


def supportive_target(state: BoardState, block: Block) -> Cell | None:
    """Closest empty cell to the block that is strictly nearer the human side.

    Tie-break: nearer the human side first, then lower column.  Cells that are
    another block's destination are excluded so a parked block can never wall
    off someone's goal cell.  All comparisons are in exact cell units so ties
    resolve by the documented rule, never by float noise.
    """
    grid = state.grid
    sr, sc = block.location
    src_rows = _rows_to_side(grid, block.location, grid.human_side)
    reserved = {b.destination for b in state.blocks if b.id != block.id}
    best = None
    best_key = None
    for r in range(grid.rows):
        for c in range(grid.cols):
            cell = (r, c)
            rows_h = _rows_to_side(grid, cell, grid.human_side)
            if rows_h >= src_rows:
                continue
            if state.occupied(cell) or cell in reserved:
                continue
            key = ((r - sr) ** 2 + (c - sc) ** 2, rows_h, c)
            if best_key is None or key < best_key:
                best, best_key = cell, key
    return best


def build_supportive(state: BoardState, params: ConflictParams, bases: Bases) -> ActionSet:
    """One move per human block in the robot's half, toward the human side."""
    actions = []
    for b in sorted(state.owned_by(HUMAN), key=lambda b: b.id):
        if not closer_to_robot(state.grid, b.location):
            continue
        target = supportive_target(state, b)
        if target is not None:
            actions.append(TaskAction.move(b.id, b.location, target))
    return ActionSet("supportive", tuple(actions))


def synthesize_policy(state: BoardState, params: ConflictParams, bases: Bases) -> Policy:
    """Build the ranked action list by iterating three rules over a working set.

    Starting from all displaced blocks, repeatedly: emit a task-oriented move
    for a robot block no remaining human block conflicts with (lowest id
    first); otherwise emit a supportive move for the human block with the most
    conflicts against remaining robot blocks (tie-break nearest the robot,
    then lowest id), relocating it virtually for later conflict checks.  Robot
    blocks left when neither rule fires are appended as task-oriented entries.
    """
    board = state
    working = {b.id for b in state.blocks if b.displaced()}
    entries: list[PolicyEntry] = []

    while working:
        robot_ids = sorted(
            b.id for b in board.blocks if b.id in working and b.owner == ROBOT
        )
        human_blocks = [b for b in board.blocks if b.id in working and b.owner == HUMAN]

        # Rule 2: a robot block free of potential conflicts, lowest id first.
        chosen = None
        for rid in robot_ids:
            rb = board.block(rid)
            if not any(conflicts(board, hb, rb, params, bases) for hb in human_blocks):
                chosen = rb
                break
        if chosen is not None:
            action = TaskAction.move(chosen.id, chosen.location, chosen.destination)
            entries.append(PolicyEntry(action, RULE_TASK))
            working.remove(chosen.id)
            if not board.occupied(chosen.destination):
                board = apply(board, action)
            continue

        # Rule 3: the supportive move that defuses the most conflicts.
        robot_blocks = [board.block(rid) for rid in robot_ids]
        best = None
        best_key = None
        for hb in human_blocks:
            if not closer_to_robot(board.grid, hb.location):
                continue
            target = supportive_target(board, hb)
            if target is None:
                continue
            count = conflict_count(board, hb, robot_blocks, params, bases)
            if count < 1:
                continue
            key = (-count, _rows_to_side(board.grid, hb.location, board.grid.robot_side), hb.id)
            if best_key is None or key < best_key:
                best, best_key = (hb, target), key
        if best is None:
            break
        hb, target = best
        action = TaskAction.move(hb.id, hb.location, target)
        entries.append(PolicyEntry(action, RULE_SUPPORT))
        working.remove(hb.id)
        board = apply(board, action)

    # Leftover robot blocks (every remaining candidate conflicted): plain
    # task-oriented entries; the runtime fallback covers them as well.
    for rid in sorted(b.id for b in board.blocks if b.id in working and b.owner == ROBOT):
        rb = board.block(rid)
        entries.append(
            PolicyEntry(TaskAction.move(rb.id, rb.location, rb.destination), RULE_TASK)
        )

    return Policy(tuple(entries))


class TaskOrientedController:
    """Samples uniformly among feasible task-oriented robot moves."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def next_action(self, state: BoardState) -> TaskAction:
        feasible = [
            a
            for a in build_task_oriented(state, ROBOT).actions
            if not state.occupied(a.target)
        ]
        if not feasible:
            return IDLE
        return self.rng.choice(feasible)


class SupportiveController:
    """Executes the first feasible ranked entry, then falls back to sampling."""

    def __init__(self, policy: Policy, seed: int):
        self.policy = policy
        self.rng = random.Random(seed)
        self._spent: set[int] = set()

    def next_action(self, state: BoardState) -> TaskAction:
        for i, entry in enumerate(self.policy.entries):
            if i in self._spent:
                continue
            a = entry.action
            try:
                block = state.block(a.block_id)
            except Exception:
                self._spent.add(i)
                continue
            if block.location != a.source:
                # Someone else moved it; the entry is dead for good.
                self._spent.add(i)
                continue
            if state.occupied(a.target):
                continue  # may clear later
            self._spent.add(i)
            return a
        feasible = [
            a
            for a in build_task_oriented(state, ROBOT).actions
            if not state.occupied(a.target)
        ]
        if not feasible:
            return IDLE
        return self.rng.choice(feasible)


class HumanSimController:
    """Deterministic simulated human: nearest displaced own block first."""

    def __init__(self, bases: Bases):
        self.bases = bases

    def next_action(self, state: BoardState) -> TaskAction:
        candidates = [
            b
            for b in state.owned_by(HUMAN)
            if b.displaced() and not state.occupied(b.destination)
        ]
        if not candidates:
            return IDLE
        base = self.bases.human
        best = min(
            candidates,
            key=lambda b: (dist(base, cell_center(state.grid, b.location)), b.id),
        )
        return TaskAction.move(best.id, best.location, best.destination)
