"""Grid world: blocks, board states, task actions and scenario files.

Coordinate conventions
----------------------
Cells are addressed (row, col) with row 0 on the human's edge in the shipped
scenarios.  The metric frame has its origin at the (row 0, col 0) table corner,
x running along columns and y along rows, so the center of cell (r, c) is
((c + 0.5) * cell_size, (r + 0.5) * cell_size).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from importlib import resources

from .geometry import Point

ROBOT = "robot"
HUMAN = "human"


class WorldError(Exception):
    pass


class OutOfBounds(WorldError):
    pass


class UnknownBlock(WorldError):
    pass


class OccupiedTarget(WorldError):
    """Raised when a move targets a cell that already holds a block."""


Cell = tuple[int, int]


@dataclass(frozen=True)
class GridSpec:
    rows: int
    cols: int
    cell_size: float
    robot_side: int  # border row index adjoining the robot's base
    human_side: int  # opposite border row

    def __post_init__(self):
        if self.rows < 2 or self.cols < 1:
            raise ValueError("grid must be at least 2 rows by 1 col")
        if self.cell_size <= 0:
            raise ValueError("cell_size must be positive")
        sides = {0, self.rows - 1}
        if {self.robot_side, self.human_side} != sides:
            raise ValueError("robot_side and human_side must be opposite border rows")

    def in_bounds(self, cell: Cell) -> bool:
        r, c = cell
        return 0 <= r < self.rows and 0 <= c < self.cols

    def destination_row(self, owner: str) -> int:
        return self.robot_side if owner == ROBOT else self.human_side

    def width(self) -> float:
        return self.cols * self.cell_size

    def height(self) -> float:
        return self.rows * self.cell_size


def cell_center(grid: GridSpec, cell: Cell) -> Point:
    """Metric center of a cell; raises OutOfBounds outside the grid."""
    if not grid.in_bounds(cell):
        raise OutOfBounds(f"cell {cell} outside {grid.rows}x{grid.cols} grid")
    r, c = cell
    return ((c + 0.5) * grid.cell_size, (r + 0.5) * grid.cell_size)


def point_to_cell(grid: GridSpec, point: Point) -> Cell:
    """Nearest cell to a metric point, clamped to the grid.

    Tie rule: a point exactly on a cell edge (midpoint of two adjacent
    centers) belongs to the higher-index cell.
    """
    eps = 1e-9  # absorbs float error so edge points land on the higher cell
    c = math.floor(point[0] / grid.cell_size + eps)
    r = math.floor(point[1] / grid.cell_size + eps)
    r = max(0, min(grid.rows - 1, r))
    c = max(0, min(grid.cols - 1, c))
    return (r, c)


@dataclass(frozen=True)
class Block:
    id: int
    owner: str
    location: Cell
    destination: Cell

    def displaced(self) -> bool:
        return self.location != self.destination


@dataclass(frozen=True)
class TaskAction:
    """A single block move, or Idle (kind 'idle', no fields)."""

    kind: str  # "move" | "idle"
    block_id: int | None = None
    source: Cell | None = None
    target: Cell | None = None

    @staticmethod
    def move(block_id: int, source: Cell, target: Cell) -> "TaskAction":
        if source == target:
            raise ValueError("move target must differ from source")
        return TaskAction("move", block_id, source, target)

    @property
    def is_idle(self) -> bool:
        return self.kind == "idle"


IDLE = TaskAction("idle")


@dataclass(frozen=True)
class BoardState:
    grid: GridSpec
    blocks: tuple[Block, ...]

    def __post_init__(self):
        locs = [b.location for b in self.blocks]
        if len(set(locs)) != len(locs):
            raise ValueError("two blocks share a location")
        ids = [b.id for b in self.blocks]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate block ids")
        for b in self.blocks:
            if not self.grid.in_bounds(b.location) or not self.grid.in_bounds(b.destination):
                raise ValueError(f"block {b.id} outside the grid")

    def block(self, block_id: int) -> Block:
        for b in self.blocks:
            if b.id == block_id:
                return b
        raise UnknownBlock(f"no block with id {block_id}")

    def occupied(self, cell: Cell) -> bool:
        return any(b.location == cell for b in self.blocks)

    def owned_by(self, owner: str) -> tuple[Block, ...]:
        return tuple(b for b in self.blocks if b.owner == owner)


def is_goal(state: BoardState, owner: str) -> bool:
    """True iff every block of the owner sits on its destination cell."""
    return all(not b.displaced() for b in state.owned_by(owner))


def apply(state: BoardState, action: TaskAction) -> BoardState:
    """Apply a move (or Idle) and return the resulting board."""
    if action.is_idle:
        return state
    block = state.block(action.block_id)  # raises UnknownBlock
    if state.occupied(action.target):
        raise OccupiedTarget(f"cell {action.target} is occupied")
    if not state.grid.in_bounds(action.target):
        raise OutOfBounds(f"target {action.target} outside the grid")
    moved = replace(block, location=action.target)
    return BoardState(state.grid, tuple(moved if b.id == block.id else b for b in state.blocks))


def move_is_feasible(state: BoardState, action: TaskAction) -> bool:
    """A recorded move is feasible iff its block is still at the recorded source
    and the target cell is empty."""
    if action.is_idle:
        return True
    try:
        block = state.block(action.block_id)
    except UnknownBlock:
        return False
    return block.location == action.source and not state.occupied(action.target)


# --- scenario files -------------------------------------------------------


def board_to_dict(state: BoardState) -> dict:
    g = state.grid
    return {
        "grid": {
            "rows": g.rows,
            "cols": g.cols,
            "cell_size": g.cell_size,
            "robot_side": g.robot_side,
            "human_side": g.human_side,
        },
        "blocks": [
            {
                "id": b.id,
                "owner": b.owner,
                "location": list(b.location),
                "destination": list(b.destination),
            }
            for b in state.blocks
        ],
    }


def board_from_dict(doc: dict) -> BoardState:
    g = doc["grid"]
    grid = GridSpec(g["rows"], g["cols"], g["cell_size"], g["robot_side"], g["human_side"])
    blocks = tuple(
        Block(b["id"], b["owner"], tuple(b["location"]), tuple(b["destination"]))
        for b in doc["blocks"]
    )
    return BoardState(grid, blocks)


def load_scenario_file(path: str) -> BoardState:
    with open(path) as fh:
        return board_from_dict(json.load(fh))


def save_scenario_file(state: BoardState, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(board_to_dict(state), fh, indent=2)
        fh.write("\n")


def load_scenario(name: str) -> BoardState:
    """Load a bundled scenario by name ('easy', 'hard', 'fig2') or a file path."""
    if name.endswith(".json"):
        return load_scenario_file(name)
    data = resources.files("sharedtable.scenarios").joinpath(f"{name}.json").read_text()
    return board_from_dict(json.loads(data))
