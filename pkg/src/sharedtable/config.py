"""Central knobs for the simulator, with desk-scale defaults."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arm import ELBOW_DOWN, ELBOW_UP, ArmSpec, elbow_point, ik
from .conflict import Bases, ConflictParams, default_bases
from .geometry import dist
from .world import GridSpec, cell_center


@dataclass(frozen=True)
class SafetyParams:
    d_stop: float = 0.10
    d_resume: float = 0.20

    def __post_init__(self):
        if not (self.d_resume > self.d_stop > 0):
            raise ValueError("need d_resume > d_stop > 0")


@dataclass(frozen=True)
class SimConfig:
    delta_conflict: float | None = None  # None: one cell width
    d_stop: float = 0.10
    d_resume: float = 0.20
    dt: float = 0.01
    dwell_time: float = 0.5
    robot_joint_speed: float = 0.314  # rad/s
    human_speed_factor: float = 1.5
    base_offset: float = 0.15  # m beyond the table edge
    link_lengths: tuple[float, float] | None = None  # None: sized to the grid
    tick_budget: int = 1_000_000
    hand_speed: float = 0.5  # m/s, interactive sessions only

    def conflict_params(self, grid: GridSpec) -> ConflictParams:
        return ConflictParams(self.delta_conflict or grid.cell_size)

    def safety(self) -> SafetyParams:
        return SafetyParams(self.d_stop, self.d_resume)

    def bases(self, grid: GridSpec) -> Bases:
        return default_bases(grid, self.base_offset)

    @staticmethod
    def from_dict(doc: dict) -> "SimConfig":
        kwargs = dict(doc)
        if "link_lengths" in kwargs and kwargs["link_lengths"] is not None:
            kwargs["link_lengths"] = tuple(kwargs["link_lengths"])
        return SimConfig(**kwargs)


def _auto_links(base, grid: GridSpec) -> tuple[float, float]:
    farthest = max(
        dist(base, cell_center(grid, (r, c)))
        for r in (0, grid.rows - 1)
        for c in (0, grid.cols - 1)
    )
    half = 0.55 * farthest  # 10% reach margin over the farthest cell
    return (half, half)


def _pick_elbow(base, links, grid: GridSpec) -> str:
    """Fixed branch whose elbow stays farther from the table center."""
    center = (grid.width() / 2.0, grid.height() / 2.0)
    probe = ArmSpec(base, links, 1.0)
    best, best_d = ELBOW_UP, -1.0
    for branch in (ELBOW_UP, ELBOW_DOWN):
        angles = ik(probe, center, branch)
        d = dist(elbow_point(probe, angles), center)
        if d > best_d:
            best, best_d = branch, d
    return best


def make_arm_specs(grid: GridSpec, cfg: SimConfig) -> tuple[ArmSpec, ArmSpec]:
    """(robot_spec, human_spec) for a grid; the human arm is faster."""
    bases = cfg.bases(grid)
    specs = []
    for base, speed in (
        (bases.robot, cfg.robot_joint_speed),
        (bases.human, cfg.robot_joint_speed * cfg.human_speed_factor),
    ):
        links = cfg.link_lengths or _auto_links(base, grid)
        specs.append(
            ArmSpec(base, links, speed, cfg.dwell_time, _pick_elbow(base, links, grid))
        )
    return specs[0], specs[1]


def home_angles(spec: ArmSpec, grid: GridSpec) -> tuple[float, float]:
    """Rest pose: arm extended straight away from the table."""
    center = (grid.width() / 2.0, grid.height() / 2.0)
    theta = math.atan2(spec.base[1] - center[1], spec.base[0] - center[0])
    return (theta, 0.0)
