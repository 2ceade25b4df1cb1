"""Goal-conflict predicate between a human block and a robot block.

A conflict is declared when the straight reach segments (arm base to block
cell center) of the two agents come within a distance threshold of each
other.  The threshold defaults to one cell width.  Conflicts are evaluated
against current block locations only, never in-flight trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Point, segment_segment_distance
from .world import HUMAN, ROBOT, Block, BoardState, Cell, GridSpec, OutOfBounds, cell_center


@dataclass(frozen=True)
class ReachSegment:
    base: Point
    tip: Point


@dataclass(frozen=True)
class ConflictParams:
    delta_conflict: float

    def __post_init__(self):
        if self.delta_conflict <= 0:
            raise ValueError("delta_conflict must be positive")


@dataclass(frozen=True)
class Bases:
    """Projected arm base points of the two agents on the table plane."""

    robot: Point
    human: Point

    def of(self, owner: str) -> Point:
        return self.robot if owner == ROBOT else self.human


def default_bases(grid: GridSpec, offset: float = 0.15) -> Bases:
    """Bases centered on the grid, `offset` meters beyond each agent's edge."""
    x = grid.width() / 2.0
    top = grid.height() + offset
    bottom = -offset
    if grid.robot_side == grid.rows - 1:
        return Bases(robot=(x, top), human=(x, bottom))
    return Bases(robot=(x, bottom), human=(x, top))


def reach_segment(grid: GridSpec, agent: str, cell: Cell, base_point: Point) -> ReachSegment:
    if not grid.in_bounds(cell):
        raise OutOfBounds(f"cell {cell} outside the grid")
    return ReachSegment(base=base_point, tip=cell_center(grid, cell))


def conflicts(
    state: BoardState,
    human_block: Block,
    robot_block: Block,
    params: ConflictParams,
    bases: Bases,
) -> bool:
    """True iff the two reach segments come within delta_conflict of each other."""
    assert human_block.owner == HUMAN and robot_block.owner == ROBOT
    hs = reach_segment(state.grid, HUMAN, human_block.location, bases.human)
    rs = reach_segment(state.grid, ROBOT, robot_block.location, bases.robot)
    d = segment_segment_distance(hs.base, hs.tip, rs.base, rs.tip)
    return d < params.delta_conflict


def conflict_count(
    state: BoardState,
    human_block: Block,
    candidate_robot_blocks,
    params: ConflictParams,
    bases: Bases,
) -> int:
    return sum(
        1 for rb in candidate_robot_blocks if conflicts(state, human_block, rb, params, bases)
    )
