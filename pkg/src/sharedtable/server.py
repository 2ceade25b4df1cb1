"""Interactive sessions: a human plays the human agent against either robot mode.

The session core is transport-free: `Session.handle` consumes one inbound
message and `Session.advance` moves simulated time, both returning outbound
messages.  The WebSocket layer in `create_app` only shuttles JSON frames.

Two human embodiments are supported (chosen in the hello message):
  * "hand": the client drives a hand point; reach duration is hand travel
    distance over the configured hand speed, and the safety monitor measures
    hand-to-robot-link distance.  This is the browser UI's mode.
  * "arm": the human is the same simulated 2-link arm the headless runner
    uses; a scripted client replaying a headless episode's moves reproduces
    its metrics exactly.
"""

from __future__ import annotations

import asyncio
import dataclasses
import json
import os
from collections import deque

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from .arm import ArmSpec
from .config import SimConfig, home_angles, make_arm_specs
from .episode import EpisodeEngine, plan_motion
from .experiment import extract_metrics
from .geometry import Point, dist, lerp, point_segment_distance
from .policy import SupportiveController, TaskOrientedController, synthesize_policy
from .world import (
    HUMAN,
    IDLE,
    ROBOT,
    BoardState,
    GridSpec,
    TaskAction,
    board_to_dict,
    cell_center,
    is_goal,
    load_scenario,
    load_scenario_file,
)

PROTOCOL_VERSION = 1


class SessionError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class _QueueMixin:
    """Round decisions drawn from client-submitted moves."""

    def __init__(self):
        self.queue: deque[TaskAction] = deque()

    def decide(self, board: BoardState) -> TaskAction | None:
        if self.queue:
            return self.queue.popleft()
        if is_goal(board, HUMAN):
            return IDLE
        return None  # waiting for the human player


class ExternalArmHuman(_QueueMixin):
    """Queue-fed version of the headless 2-link human arm."""

    kind = "arm"

    def __init__(self, spec: ArmSpec, home: tuple[float, float]):
        super().__init__()
        from .episode import _ArmBody

        self.body = _ArmBody(spec, home)
        self.home = home

    def begin(self, action: TaskAction, grid: GridSpec) -> None:
        self.body.begin(
            plan_motion(self.body.spec, self.body.angles, action, grid, retract_to=self.home)
        )

    def advance(self, dt: float) -> None:
        self.body.advance(dt)

    def complete(self) -> bool:
        return self.body.complete

    def finish_round(self) -> None:
        if self.body.active:
            self.body.finish_round()

    def min_distance_to(self, robot_body) -> float:
        from .arm import arm_min_distance

        return arm_min_distance(
            robot_body.spec, robot_body.angles, self.body.spec, self.body.angles
        )

    def geometry(self):
        return list(self.body.angles)


class HandHuman(_QueueMixin):
    """Hand-point human: piecewise-linear hand path at constant speed."""

    kind = "hand"

    def __init__(self, start: Point, hand_speed: float):
        super().__init__()
        self.pos = start
        self.hand_speed = hand_speed
        self.streamed: Point | None = None
        self._path: list[Point] = []
        self._lengths: list[float] = []
        self._duration = 0.0
        self._clock = 0.0
        self._active = False

    def begin(self, action: TaskAction, grid: GridSpec) -> None:
        src = cell_center(grid, action.source)
        dst = cell_center(grid, action.target)
        self._path = [self.pos, src, dst]
        self._lengths = [dist(self._path[i], self._path[i + 1]) for i in range(2)]
        self._duration = sum(self._lengths) / self.hand_speed
        self._clock = 0.0
        self._active = True

    def advance(self, dt: float) -> None:
        self._clock += dt
        travelled = min(self._clock * self.hand_speed, sum(self._lengths))
        for i, seg_len in enumerate(self._lengths):
            if travelled <= seg_len or i == len(self._lengths) - 1:
                u = 1.0 if seg_len == 0 else min(1.0, travelled / seg_len)
                self.pos = lerp(self._path[i], self._path[i + 1], u)
                return
            travelled -= seg_len

    def complete(self) -> bool:
        return self._active and self._clock >= self._duration - 1e-12

    def finish_round(self) -> None:
        self._active = False

    def effective_point(self) -> Point:
        return self.streamed if self.streamed is not None else self.pos

    def min_distance_to(self, robot_body) -> float:
        p = self.effective_point()
        return min(
            point_segment_distance(p, seg[0], seg[1]) for seg in robot_body.segments()
        )

    def geometry(self):
        return list(self.effective_point())


def live_metrics(trace) -> dict:
    """Running accumulators mirroring the final TrialMetrics fields."""
    robot_time = human_time = 0.0
    stops = supportive = 0
    for ev in trace.events:
        if ev["type"] == "action_end":
            if ev["agent"] == ROBOT:
                robot_time = ev["t"]
                if ev["applied"] and ev["block_owner"] == HUMAN:
                    supportive += 1
            else:
                human_time = ev["t"]
        elif ev["type"] == "stop_start":
            stops += 1
    wait = trace.category_ticks[HUMAN]["wait"] * trace.dt
    return {
        "elapsed": trace.duration,
        "robot_time": robot_time,
        "human_time": human_time,
        "safety_stops": stops,
        "supportive_actions_taken": supportive,
        "human_wait_time": wait,
        "human_idle_ratio": wait / human_time if human_time > 0 else 0.0,
    }


class Session:
    """One interactive episode; all state transitions flow through handle()
    and advance()."""

    def __init__(self, session_id: str, cfg: SimConfig, scenario_dir: str | None = None):
        self.id = session_id
        self.cfg = cfg
        self.scenario_dir = scenario_dir
        self.phase = "lobby"
        self.engine: EpisodeEngine | None = None
        self.human = None
        self.mode = None
        self._events_sent = 0
        self._ended = False

    # -- message handling --------------------------------------------------

    def handle(self, msg: dict) -> list[dict]:
        try:
            mtype = msg.get("type")
            if mtype == "hello":
                return self._on_hello(msg)
            if self.engine is None:
                raise SessionError("out_of_phase", "hello required first")
            if mtype == "human_move":
                return self._on_move(msg)
            if mtype == "hand_pos":
                return self._on_hand_pos(msg)
            raise SessionError("bad_message", f"unknown message type {mtype!r}")
        except SessionError as exc:
            return [{"type": "error", "code": exc.code, "message": str(exc)}]

    def _resolve_scenario(self, name: str) -> BoardState:
        try:
            if self.scenario_dir:
                path = os.path.join(self.scenario_dir, f"{name}.json")
                if os.path.exists(path):
                    return load_scenario_file(path)
            return load_scenario(name)
        except FileNotFoundError:
            raise SessionError("unknown_scenario", f"no scenario named {name!r}")

    def _on_hello(self, msg: dict) -> list[dict]:
        if self.phase != "lobby" or self.engine is not None:
            raise SessionError("out_of_phase", "session already started")
        mode = msg.get("mode")
        if mode not in ("task-oriented", "supportive"):
            raise SessionError("bad_mode", f"bad robot mode {mode!r}")
        board = self._resolve_scenario(msg.get("scenario", ""))
        human_model = msg.get("human_model", "hand")
        seed = int(msg.get("seed", 0))
        cfg = self.cfg
        grid = board.grid
        robot_spec, human_spec = make_arm_specs(grid, cfg)
        bases = cfg.bases(grid)
        if mode == "supportive":
            policy = synthesize_policy(board, cfg.conflict_params(grid), bases)
            robot_ctrl = SupportiveController(policy, seed)
        else:
            robot_ctrl = TaskOrientedController(seed)
        if human_model == "arm":
            self.human = ExternalArmHuman(human_spec, home_angles(human_spec, grid))
        elif human_model == "hand":
            self.human = HandHuman(bases.human, cfg.hand_speed)
        else:
            raise SessionError("bad_message", f"bad human_model {human_model!r}")
        self.engine = EpisodeEngine(
            board, robot_ctrl, self.human, robot_spec, cfg.safety(), cfg.dt,
            tick_budget=cfg.tick_budget,
        )
        self.mode = mode
        self.phase = "running"
        return [self.snapshot()]

    def _on_move(self, msg: dict) -> list[dict]:
        if self.phase != "running":
            raise SessionError("out_of_phase", "episode is not running")
        board = self.engine.board
        block_id = msg.get("block_id")
        target = tuple(msg.get("target", ()))
        try:
            block = board.block(block_id)
        except Exception:
            raise SessionError("unknown_block", f"no block {block_id!r}")
        if block.owner != HUMAN:
            raise SessionError("not_your_block", f"block {block_id} belongs to the robot")
        if len(target) != 2 or not board.grid.in_bounds(target):
            raise SessionError("bad_message", f"bad target {list(target)!r}")
        if board.occupied(target):
            raise SessionError("occupied_target", f"cell {list(target)} is occupied")
        self.human.queue.append(TaskAction.move(block_id, block.location, target))
        return [self.snapshot()]

    def _on_hand_pos(self, msg: dict) -> list[dict]:
        if not isinstance(self.human, HandHuman):
            return []
        point = msg.get("point")
        if not (isinstance(point, (list, tuple)) and len(point) == 2):
            raise SessionError("bad_message", "hand_pos needs a [x, y] point")
        self.human.streamed = (float(point[0]), float(point[1]))
        return []

    # -- time --------------------------------------------------------------

    def advance(self, sim_seconds: float) -> list[dict]:
        """Advance simulated time and return safety events, a snapshot, and
        the episode end message when the episode finishes."""
        if self.engine is None or self.phase != "running":
            return []
        steps = max(1, round(sim_seconds / self.engine.dt))
        for _ in range(steps):
            self.engine.step()
            if self.engine.done or self.engine.waiting_for_input:
                break
        out = self._new_safety_events()
        if self.engine.done and not self._ended:
            self._ended = True
            self.phase = "finished"
            metrics = extract_metrics(self.engine.trace)
            out.append(
                {"type": "episode_end", "metrics": dataclasses.asdict(metrics)}
            )
        else:
            out.append(self.snapshot())
        return out

    def _new_safety_events(self) -> list[dict]:
        out = []
        events = self.engine.trace.events
        for ev in events[self._events_sent:]:
            if ev["type"] in ("stop_start", "stop_end"):
                out.append(
                    {"type": "safety_event",
                     "event": "start" if ev["type"] == "stop_start" else "end",
                     "t": ev["t"]}
                )
        self._events_sent = len(events)
        return out

    def snapshot(self) -> dict:
        eng = self.engine
        holding = None
        if eng._robot_action is not None and not eng._robot_action.is_idle and eng.robot.active:
            holding = eng._robot_action.block_id
        return {
            "type": "snapshot",
            "tick": eng.trace.tick_count,
            "t": eng.time,
            "phase": self.phase,
            "mode": self.mode,
            "board": board_to_dict(eng.board),
            "robot": {
                "base": list(eng.robot.spec.base),
                "link_lengths": list(eng.robot.spec.link_lengths),
                "angles": list(eng.robot.angles),
                "paused": eng.frozen,
                "holding": holding,
            },
            "human": {"kind": self.human.kind, "geometry": self.human.geometry()},
            "metrics": live_metrics(eng.trace),
        }


def create_app(scenario_dir: str | None = None, cfg: SimConfig | None = None, tick_hz: float = 20.0):
    """FastAPI app exposing sessions over a WebSocket at /ws."""
    cfg = cfg or SimConfig()
    app = FastAPI(title="sharedtable session server")
    counter = {"n": 0}

    @app.get("/scenarios")
    def scenarios():
        names = ["easy", "hard", "fig2"]
        if scenario_dir and os.path.isdir(scenario_dir):
            for fn in sorted(os.listdir(scenario_dir)):
                if fn.endswith(".json"):
                    name = fn[:-5]
                    if name not in names:
                        names.append(name)
        return JSONResponse(names)

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        counter["n"] += 1
        session = Session(f"s{counter['n']}", cfg, scenario_dir)
        interval = 1.0 / tick_hz

        async def ticker():
            while True:
                await asyncio.sleep(interval)
                for msg in session.advance(interval):
                    await ws.send_text(json.dumps(msg))
                if session.phase == "finished":
                    return

        tick_task = None
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError:
                    await ws.send_text(json.dumps(
                        {"type": "error", "code": "bad_message", "message": "invalid JSON"}
                    ))
                    continue
                for out in session.handle(msg):
                    await ws.send_text(json.dumps(out))
                if session.phase == "running" and tick_task is None:
                    tick_task = asyncio.create_task(ticker())
        except WebSocketDisconnect:
            pass
        finally:
            if tick_task is not None:
                tick_task.cancel()

    return app
