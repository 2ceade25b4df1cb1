"""Round-based kinematic episode execution with a proximity safety monitor.

Both agents request an action at the start of each round and begin their
trajectories simultaneously.  The robot's trajectory clock pauses whenever
the human comes within d_stop of its links and resumes once the human is
beyond d_resume; the human is never paused.  A round closes when both
trajectories are complete, and the episode ends when both agents go idle.
"""

from __future__ import annotations

import gzip
import json
from dataclasses import dataclass, field

from .arm import ArmSpec, Trajectory, arm_min_distance, link_segments, plan_pick_place
from .config import SafetyParams, SimConfig, home_angles, make_arm_specs
from .world import (
    HUMAN,
    ROBOT,
    BoardState,
    GridSpec,
    TaskAction,
    apply,
    cell_center,
    move_is_feasible,
)

BUSY = "busy"
WAIT = "wait"
IDLE_TICK = "idle"


class NonTermination(Exception):
    pass


def plan_motion(
    spec: ArmSpec,
    start_angles: tuple[float, float],
    action: TaskAction,
    grid: GridSpec,
    retract_to: tuple[float, float] | None = None,
) -> Trajectory:
    """Trajectory executing a single block move from the current arm pose."""
    return plan_pick_place(
        spec,
        start_angles,
        cell_center(grid, action.source),
        cell_center(grid, action.target),
        retract_to=retract_to,
    )


@dataclass
class EpisodeTrace:
    dt: float
    ticks: list = field(default_factory=list)  # (t, r_angles, h_geom, paused, r_advanced, dist, rcat, hcat)
    events: list = field(default_factory=list)  # dicts with a "type" and "t"
    tick_count: int = 0
    category_ticks: dict = field(default_factory=lambda: {
        ROBOT: {BUSY: 0, WAIT: 0, IDLE_TICK: 0},
        HUMAN: {BUSY: 0, WAIT: 0, IDLE_TICK: 0},
    })
    final_board: BoardState | None = None
    completed: bool = False

    @property
    def duration(self) -> float:
        return self.tick_count * self.dt

    def export_ndjson(self, path: str, compress: bool = False) -> None:
        opener = gzip.open if compress else open
        with opener(path, "wt") as fh:
            for tick in self.ticks:
                fh.write(json.dumps({"tick": list(tick)}) + "\n")
            for ev in self.events:
                fh.write(json.dumps({"event": ev}) + "\n")


class _ArmBody:
    """An agent's physical arm: pose, active trajectory and its paused clock."""

    def __init__(self, spec: ArmSpec, start_angles: tuple[float, float]):
        self.spec = spec
        self.angles = start_angles
        self.trajectory: Trajectory | None = None
        self.clock = 0.0

    def begin(self, trajectory: Trajectory) -> None:
        self.trajectory = trajectory
        self.clock = 0.0

    @property
    def active(self) -> bool:
        return self.trajectory is not None

    @property
    def complete(self) -> bool:
        return self.trajectory is not None and self.clock >= self.trajectory.duration - 1e-12

    def advance(self, dt: float) -> None:
        self.clock += dt
        self.angles = self.trajectory.sample(self.clock)

    def finish_round(self) -> None:
        self.trajectory = None
        self.clock = 0.0

    def segments(self):
        return link_segments(self.spec, self.angles)


class ArmHumanProxy:
    """Headless human: a 2-link arm driven by a controller, retracting home
    after each placement so it never camps inside the robot's workspace."""

    kind = "arm"

    def __init__(self, spec: ArmSpec, controller, home: tuple[float, float]):
        self.body = _ArmBody(spec, home)
        self.controller = controller
        self.home = home

    def decide(self, board: BoardState) -> TaskAction | None:
        return self.controller.next_action(board)

    def begin(self, action: TaskAction, grid: GridSpec) -> None:
        traj = plan_motion(self.body.spec, self.body.angles, action, grid, retract_to=self.home)
        self.body.begin(traj)

    def min_distance_to(self, robot_body: _ArmBody) -> float:
        return arm_min_distance(
            robot_body.spec, robot_body.angles, self.body.spec, self.body.angles
        )

    def geometry(self):
        return list(self.body.angles)

    def advance(self, dt: float) -> None:
        self.body.advance(dt)

    def complete(self) -> bool:
        return self.body.complete

    def finish_round(self) -> None:
        if self.body.active:
            self.body.finish_round()


class EpisodeEngine:
    """Deterministic single-episode stepper shared by the headless runner and
    the interactive session server."""

    def __init__(
        self,
        board: BoardState,
        robot_controller,
        human_proxy,
        robot_spec: ArmSpec,
        safety: SafetyParams,
        dt: float,
        tick_budget: int = 1_000_000,
        record_ticks: bool = True,
    ):
        self.board = board
        self.grid = board.grid
        self.robot_controller = robot_controller
        self.human = human_proxy
        self.robot = _ArmBody(robot_spec, home_angles(robot_spec, board.grid))
        self.safety = safety
        self.dt = dt
        self.tick_budget = tick_budget
        self.record_ticks = record_ticks
        self.trace = EpisodeTrace(dt=dt)
        self.time = 0.0
        self.round_active = False
        self.round_index = 0
        self.frozen = False
        self.done = False
        self.waiting_for_input = False
        self._robot_action: TaskAction | None = None
        self._human_action: TaskAction | None = None
        self._robot_applied = False
        self._human_applied = False

    # -- round management --------------------------------------------------

    def _try_start_round(self) -> bool:
        """Collect both decisions and begin trajectories; False while the
        human proxy is waiting for external input."""
        human_action = self.human.decide(self.board)
        if human_action is None:
            self.waiting_for_input = True
            return False
        self.waiting_for_input = False
        robot_action = self.robot_controller.next_action(self.board)
        if robot_action.is_idle and human_action.is_idle:
            self.done = True
            self.trace.completed = True
            self.trace.final_board = self.board
            self.trace.events.append({"type": "episode_end", "t": self.time})
            return False
        self.round_index += 1
        self.round_active = True
        self._robot_action = robot_action
        self._human_action = human_action
        self._robot_applied = False
        self._human_applied = False
        self.trace.events.append({"type": "round_start", "t": self.time, "round": self.round_index})
        if not robot_action.is_idle:
            self.robot.begin(plan_motion(self.robot.spec, self.robot.angles, robot_action, self.grid))
            self.trace.events.append(
                {"type": "action_start", "t": self.time, "agent": ROBOT,
                 "action": _action_doc(robot_action)}
            )
        if not human_action.is_idle:
            self.human.begin(human_action, self.grid)
            self.trace.events.append(
                {"type": "action_start", "t": self.time, "agent": HUMAN,
                 "action": _action_doc(human_action)}
            )
        return True

    def _complete(self, agent: str, action: TaskAction) -> None:
        feasible = move_is_feasible(self.board, action)
        if feasible:
            self.board = apply(self.board, action)
        owner = self.board.block(action.block_id).owner if action.block_id is not None else None
        self.trace.events.append(
            {"type": "action_end", "t": self.time + self.dt, "agent": agent,
             "applied": feasible, "block_owner": owner, "action": _action_doc(action)}
        )

    # -- ticking -----------------------------------------------------------

    def step(self) -> None:
        """Advance simulated time by one dt tick."""
        if self.done:
            return
        if not self.round_active:
            if not self._try_start_round():
                return
        if self.trace.tick_count >= self.tick_budget:
            raise NonTermination(
                f"episode exceeded {self.tick_budget} ticks at t={self.time:.2f}s "
                f"(round {self.round_index})"
            )

        robot_running = self.robot.active and not self.robot.complete
        dist = self.human.min_distance_to(self.robot)

        # Hysteresis: freeze before advancing, so the robot never moves while
        # the human is already inside d_stop.  Once the human has parked for
        # the round it cannot re-approach, so the wider resume threshold (an
        # anti-oscillation band) would deadlock the round; d_stop suffices.
        human_parked = (
            self._human_action is None
            or self._human_action.is_idle
            or self.human_complete()
        )
        resume_at = self.safety.d_stop if human_parked else self.safety.d_resume
        if robot_running:
            if self.frozen:
                if dist > resume_at:
                    self.frozen = False
                    self.trace.events.append({"type": "stop_end", "t": self.time})
            elif dist < self.safety.d_stop:
                self.frozen = True
                self.trace.events.append({"type": "stop_start", "t": self.time})
        elif self.frozen:
            self.frozen = False
            self.trace.events.append({"type": "stop_end", "t": self.time})

        # Human first; the robot's freeze decision used start-of-tick geometry.
        hcat = IDLE_TICK
        if self._human_action is not None and not self._human_action.is_idle:
            if not self.human_complete():
                self.human.advance(self.dt)
                hcat = BUSY
                if self.human_complete() and not self._human_applied:
                    self._human_applied = True
                    self._complete(HUMAN, self._human_action)
            else:
                hcat = WAIT

        rcat = IDLE_TICK
        robot_advanced = False
        if self._robot_action is not None and not self._robot_action.is_idle:
            if not self.robot.complete:
                if self.frozen:
                    rcat = WAIT
                else:
                    self.robot.advance(self.dt)
                    robot_advanced = True
                    rcat = BUSY
                    if self.robot.complete and not self._robot_applied:
                        self._robot_applied = True
                        self._complete(ROBOT, self._robot_action)
            else:
                rcat = WAIT

        self.trace.category_ticks[ROBOT][rcat] += 1
        self.trace.category_ticks[HUMAN][hcat] += 1
        if self.record_ticks:
            self.trace.ticks.append(
                (self.time, list(self.robot.angles), self.human.geometry(),
                 self.frozen, robot_advanced, dist, rcat, hcat)
            )
        self.time += self.dt
        self.trace.tick_count += 1

        robot_done = self._robot_action.is_idle or self.robot.complete
        human_done = self._human_action.is_idle or self.human_complete()
        if robot_done and human_done:
            self.trace.events.append({"type": "round_end", "t": self.time, "round": self.round_index})
            self.round_active = False
            if self.robot.active:
                self.robot.finish_round()
            self.human.finish_round()

    def human_complete(self) -> bool:
        return self.human.complete()

    def run(self) -> EpisodeTrace:
        while not self.done:
            self.step()
            if self.done:
                break
            if self.waiting_for_input:
                raise RuntimeError("headless run requires a self-deciding human proxy")
        return self.trace


def _action_doc(action: TaskAction) -> dict:
    if action.is_idle:
        return {"kind": "idle"}
    return {
        "kind": "move",
        "block_id": action.block_id,
        "source": list(action.source),
        "target": list(action.target),
    }


def run_episode(
    board: BoardState,
    mode: str,
    seed: int,
    cfg: SimConfig | None = None,
    record_ticks: bool = True,
) -> EpisodeTrace:
    """Run one headless episode in 'task-oriented' or 'supportive' mode."""
    from .policy import (
        HumanSimController,
        SupportiveController,
        TaskOrientedController,
        synthesize_policy,
    )

    cfg = cfg or SimConfig()
    grid = board.grid
    robot_spec, human_spec = make_arm_specs(grid, cfg)
    bases = cfg.bases(grid)
    if mode == "supportive":
        policy = synthesize_policy(board, cfg.conflict_params(grid), bases)
        robot_ctrl = SupportiveController(policy, seed)
    elif mode == "task-oriented":
        robot_ctrl = TaskOrientedController(seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    human = ArmHumanProxy(human_spec, HumanSimController(bases), home_angles(human_spec, grid))
    engine = EpisodeEngine(
        board,
        robot_ctrl,
        human,
        robot_spec,
        cfg.safety(),
        cfg.dt,
        tick_budget=cfg.tick_budget,
        record_ticks=record_ticks,
    )
    return engine.run()
