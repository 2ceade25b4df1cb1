import random

import pytest

from sharedtable.world import HUMAN, ROBOT, Block, BoardState, GridSpec


@pytest.fixture
def grid7x15():
    return GridSpec(rows=7, cols=15, cell_size=0.1, robot_side=6, human_side=0)


def random_board(rng: random.Random, max_per_agent: int = 8) -> BoardState:
    """Random solvable 7x15 board: locations in rows 1-5, destinations on the
    owner's border row, all distinct."""
    grid = GridSpec(rows=7, cols=15, cell_size=0.1, robot_side=6, human_side=0)
    n_robot = rng.randint(1, max_per_agent)
    n_human = rng.randint(1, max_per_agent)
    cells = [(r, c) for r in range(1, 6) for c in range(15)]
    locations = rng.sample(cells, n_robot + n_human)
    robot_dest_cols = rng.sample(range(15), n_robot)
    human_dest_cols = rng.sample(range(15), n_human)
    blocks = []
    for i in range(n_robot):
        blocks.append(Block(i + 1, ROBOT, locations[i], (6, robot_dest_cols[i])))
    for i in range(n_human):
        blocks.append(
            Block(100 + i, HUMAN, locations[n_robot + i], (0, human_dest_cols[i]))
        )
    return BoardState(grid, tuple(blocks))
