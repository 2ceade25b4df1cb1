"""Planar 2-link arm: analytic kinematics, pick-place trajectories, proximity.

Motion planning is deliberately simple: analytic inverse kinematics, transits
whose fingertip follows a straight line between poses (duration max_j
|dtheta_j| / max_joint_speed) and a fixed dwell at grasp and release.  This
keeps every trajectory deterministic and exactly reproducible while confining
the arm near the workspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Point, segment_segment_distance

ELBOW_UP = "elbow-up"
ELBOW_DOWN = "elbow-down"


class Unreachable(Exception):
    pass


def wrap_angle(a: float) -> float:
    """Normalize to (-pi, pi]."""
    a = math.fmod(a, 2.0 * math.pi)
    if a <= -math.pi:
        a += 2.0 * math.pi
    elif a > math.pi:
        a -= 2.0 * math.pi
    return a


@dataclass(frozen=True)
class ArmSpec:
    base: Point
    link_lengths: tuple[float, float]
    max_joint_speed: float  # rad/s
    dwell_time: float = 0.5  # s per grasp / release
    elbow: str = ELBOW_UP

    def __post_init__(self):
        l1, l2 = self.link_lengths
        if l1 <= 0 or l2 <= 0:
            raise ValueError("link lengths must be positive")
        if self.max_joint_speed <= 0:
            raise ValueError("max_joint_speed must be positive")


@dataclass(frozen=True)
class ArmState:
    joint_angles: tuple[float, float]
    holding: int | None = None


def fk(spec: ArmSpec, angles: tuple[float, float]) -> Point:
    t1, t2 = angles
    l1, l2 = spec.link_lengths
    return (
        spec.base[0] + l1 * math.cos(t1) + l2 * math.cos(t1 + t2),
        spec.base[1] + l1 * math.sin(t1) + l2 * math.sin(t1 + t2),
    )


def elbow_point(spec: ArmSpec, angles: tuple[float, float]) -> Point:
    t1 = angles[0]
    l1 = spec.link_lengths[0]
    return (spec.base[0] + l1 * math.cos(t1), spec.base[1] + l1 * math.sin(t1))


def ik(spec: ArmSpec, target: Point, branch: str | None = None) -> tuple[float, float]:
    """Joint angles reaching the target; raises Unreachable outside the annulus."""
    l1, l2 = spec.link_lengths
    dx = target[0] - spec.base[0]
    dy = target[1] - spec.base[1]
    d = math.hypot(dx, dy)
    if d > l1 + l2 + 1e-12 or d < abs(l1 - l2) - 1e-12:
        raise Unreachable(f"target {target} at distance {d:.4f} outside [{abs(l1-l2):.4f}, {l1+l2:.4f}]")
    cos_t2 = (d * d - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)
    cos_t2 = max(-1.0, min(1.0, cos_t2))
    t2 = math.acos(cos_t2)
    if (branch or spec.elbow) == ELBOW_DOWN:
        t2 = -t2
    t1 = math.atan2(dy, dx) - math.atan2(l2 * math.sin(t2), l1 + l2 * math.cos(t2))
    return (wrap_angle(t1), wrap_angle(t2))


def link_segments(spec: ArmSpec, angles: tuple[float, float]) -> tuple[tuple[Point, Point], tuple[Point, Point]]:
    elbow = elbow_point(spec, angles)
    return ((spec.base, elbow), (elbow, fk(spec, angles)))


def arm_min_distance(
    spec_a: ArmSpec,
    angles_a: tuple[float, float],
    spec_b: ArmSpec,
    angles_b: tuple[float, float],
) -> float:
    """Exact minimum distance between the two arms' four link segments."""
    segs_a = link_segments(spec_a, angles_a)
    segs_b = link_segments(spec_b, angles_b)
    return min(
        segment_segment_distance(sa[0], sa[1], sb[0], sb[1])
        for sa in segs_a
        for sb in segs_b
    )


@dataclass(frozen=True)
class TrajectorySegment:
    duration: float
    start: tuple[float, float]
    end: tuple[float, float]

    def sample(self, t: float) -> tuple[float, float]:
        if self.duration <= 0:
            return self.end
        u = max(0.0, min(1.0, t / self.duration))
        d1 = wrap_angle(self.end[0] - self.start[0])
        d2 = wrap_angle(self.end[1] - self.start[1])
        return (wrap_angle(self.start[0] + u * d1), wrap_angle(self.start[1] + u * d2))


@dataclass(frozen=True)
class Trajectory:
    segments: tuple  # TrajectorySegment (dwell) | CartesianSegment (transit)

    @property
    def duration(self) -> float:
        return sum(s.duration for s in self.segments)

    def sample(self, t: float) -> tuple[float, float]:
        """Joint angles at elapsed time t (clamped to the end pose)."""
        if not self.segments:
            return (0.0, 0.0)
        for seg in self.segments:
            if t <= seg.duration:
                return seg.sample(t)
            t -= seg.duration
        return self.segments[-1].end


@dataclass(frozen=True)
class CartesianSegment:
    """Transit whose fingertip tracks the straight line between the start and
    end poses' tips, clamped to the reachable annulus.  Keeping the tip on a
    chord confines the whole arm near the workspace; pure joint interpolation
    can sweep the fully extended arm far outside it."""

    duration: float
    start: tuple[float, float]
    end: tuple[float, float]
    spec: ArmSpec

    def sample(self, t: float) -> tuple[float, float]:
        if self.duration <= 0:
            return self.end
        u = max(0.0, min(1.0, t / self.duration))
        if u >= 1.0:
            return self.end
        tip_s = fk(self.spec, self.start)
        tip_e = fk(self.spec, self.end)
        x = tip_s[0] + u * (tip_e[0] - tip_s[0])
        y = tip_s[1] + u * (tip_e[1] - tip_s[1])
        l1, l2 = self.spec.link_lengths
        dx = x - self.spec.base[0]
        dy = y - self.spec.base[1]
        d = math.hypot(dx, dy)
        lo, hi = abs(l1 - l2), l1 + l2
        if d < 1e-12:
            return ik(self.spec, (self.spec.base[0] + lo, self.spec.base[1]))
        if d < lo or d > hi:
            scale = max(lo, min(hi, d)) / d
            x = self.spec.base[0] + dx * scale
            y = self.spec.base[1] + dy * scale
        return ik(self.spec, (x, y))


def _transit(spec: ArmSpec, start: tuple[float, float], end: tuple[float, float]) -> CartesianSegment:
    d1 = abs(wrap_angle(end[0] - start[0]))
    d2 = abs(wrap_angle(end[1] - start[1]))
    duration = max(d1, d2) / spec.max_joint_speed
    return CartesianSegment(duration, start, end, spec)


def plan_pick_place(
    spec: ArmSpec,
    start_angles: tuple[float, float],
    source_point: Point,
    target_point: Point,
    retract_to: tuple[float, float] | None = None,
) -> Trajectory:
    """Transit to the source, dwell (grasp), transit to the target, dwell
    (release), optionally retract to a home pose."""
    at_source = ik(spec, source_point)
    at_target = ik(spec, target_point)
    segs = [
        _transit(spec, start_angles, at_source),
        TrajectorySegment(spec.dwell_time, at_source, at_source),
        _transit(spec, at_source, at_target),
        TrajectorySegment(spec.dwell_time, at_target, at_target),
    ]
    if retract_to is not None:
        segs.append(_transit(spec, at_target, retract_to))
    return Trajectory(tuple(segs))
