"""Batch experiments: metrics extraction, seeded trials, summaries, Wilcoxon."""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import asdict, dataclass

from .config import SimConfig
from .episode import EpisodeTrace, run_episode
from .stats import AllZeroDifferences, wilcoxon_signed_rank
from .world import HUMAN, ROBOT, BoardState, load_scenario

MODES = ("task-oriented", "supportive")

CSV_COLUMNS = [
    "scenario",
    "mode",
    "trial",
    "seed",
    "task_time",
    "robot_time",
    "human_time",
    "safety_stops",
    "human_idle_ratio",
    "supportive_actions_taken",
    "idle_ratio_defined",
]


class IncompleteTrace(Exception):
    pass


@dataclass(frozen=True)
class TrialMetrics:
    task_time: float
    robot_time: float
    human_time: float
    safety_stops: int
    human_idle_ratio: float
    supportive_actions_taken: int
    idle_ratio_defined: bool = True


@dataclass(frozen=True)
class Condition:
    scenario: str
    mode: str
    trials: int
    base_seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")


def extract_metrics(trace: EpisodeTrace) -> TrialMetrics:
    """Per-episode metrics from a completed trace's event and tick logs."""
    if not trace.completed:
        raise IncompleteTrace("episode did not terminate")
    robot_time = 0.0
    human_time = 0.0
    stops = 0
    supportive = 0
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
    wait_time = trace.category_ticks[HUMAN]["wait"] * trace.dt
    if human_time > 0:
        ratio = wait_time / human_time
        defined = True
    else:
        ratio = 0.0
        defined = False
    return TrialMetrics(
        task_time=max(robot_time, human_time),
        robot_time=robot_time,
        human_time=human_time,
        safety_stops=stops,
        human_idle_ratio=ratio,
        supportive_actions_taken=supportive,
        idle_ratio_defined=defined,
    )


def run_trial(
    board: BoardState, mode: str, seed: int, cfg: SimConfig, record_ticks: bool = False
) -> TrialMetrics:
    trace = run_episode(board, mode, seed, cfg, record_ticks=record_ticks)
    return extract_metrics(trace)


NUMERIC_METRICS = [
    "task_time",
    "robot_time",
    "human_time",
    "safety_stops",
    "human_idle_ratio",
    "supportive_actions_taken",
]


def _mean(xs):
    return sum(xs) / len(xs)


def _sample_sd(xs):
    if len(xs) < 2:
        return 0.0
    m = _mean(xs)
    return math.sqrt(sum((x - m) ** 2 for x in xs) / (len(xs) - 1))


def run_batch(conditions: list[Condition], cfg: SimConfig | None = None) -> dict:
    """Run every condition, returning per-trial rows and per-condition summaries.

    Trial i of a condition uses seed base_seed + i.  Conditions sharing a
    scenario are paired trial-by-trial for the Wilcoxon comparisons.
    """
    cfg = cfg or SimConfig()
    rows = []
    per_condition: dict[tuple[str, str], list[TrialMetrics]] = {}
    for cond in conditions:
        board = load_scenario(cond.scenario)
        metrics_list = []
        for i in range(cond.trials):
            seed = cond.base_seed + i
            try:
                m = run_trial(board, cond.mode, seed, cfg)
            except Exception as exc:
                raise RuntimeError(
                    f"trial failed: scenario={cond.scenario} mode={cond.mode} seed={seed}"
                ) from exc
            metrics_list.append(m)
            rows.append(
                {"scenario": cond.scenario, "mode": cond.mode, "trial": i, "seed": seed,
                 **asdict(m)}
            )
        per_condition[(cond.scenario, cond.mode)] = metrics_list

    summary = []
    for (scenario, mode), metrics_list in per_condition.items():
        entry: dict = {"scenario": scenario, "mode": mode, "trials": len(metrics_list)}
        for name in NUMERIC_METRICS:
            xs = [float(getattr(m, name)) for m in metrics_list]
            entry[name] = {"mean": _mean(xs), "sd": _sample_sd(xs)}
        other_mode = MODES[1 - MODES.index(mode)]
        paired = per_condition.get((scenario, other_mode))
        if paired and len(paired) == len(metrics_list):
            tests = {}
            for name in NUMERIC_METRICS:
                pairs = [
                    (float(getattr(a, name)), float(getattr(b, name)))
                    for a, b in zip(metrics_list, paired)
                ]
                try:
                    w, p = wilcoxon_signed_rank(pairs)
                    tests[name] = {"w": w, "p": p}
                except AllZeroDifferences:
                    tests[name] = {"w": None, "p": None}
            entry["wilcoxon_vs_" + other_mode] = tests
        summary.append(entry)
    return {"rows": rows, "summary": summary}


def write_outputs(result: dict, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "trials.csv"), "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in result["rows"]:
            writer.writerow({k: row[k] for k in CSV_COLUMNS})
    with open(os.path.join(out_dir, "summary.json"), "w") as fh:
        json.dump(result["summary"], fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_trials_csv(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        out = []
        for row in csv.DictReader(fh):
            parsed = dict(row)
            for key in ("trial", "seed", "safety_stops", "supportive_actions_taken"):
                parsed[key] = int(row[key])
            for key in ("task_time", "robot_time", "human_time", "human_idle_ratio"):
                parsed[key] = float(row[key])
            parsed["idle_ratio_defined"] = row["idle_ratio_defined"] == "True"
            out.append(parsed)
        return out
