"""Command line entry points: run, batch, synth, serve."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .config import SimConfig
from .episode import run_episode
from .experiment import Condition, extract_metrics, run_batch, write_outputs
from .policy import synthesize_policy
from .world import load_scenario


def _load_config(path: str | None) -> SimConfig:
    if path is None:
        return SimConfig()
    with open(path) as fh:
        return SimConfig.from_dict(json.load(fh))


def cmd_run(args) -> int:
    board = load_scenario(args.scenario)
    cfg = _load_config(args.config)
    trace = run_episode(board, args.mode, args.seed, cfg, record_ticks=args.trace_out is not None)
    if args.trace_out:
        trace.export_ndjson(args.trace_out, compress=args.trace_out.endswith(".gz"))
    metrics = extract_metrics(trace)
    print(json.dumps(dataclasses.asdict(metrics), indent=2))
    return 0


def cmd_batch(args) -> int:
    with open(args.config) as fh:
        doc = json.load(fh)
    cfg = SimConfig.from_dict(doc.get("sim", {}))
    conditions = [
        Condition(c["scenario"], c["mode"], c["trials"], c["base_seed"])
        for c in doc["conditions"]
    ]
    result = run_batch(conditions, cfg)
    write_outputs(result, args.out_dir)
    print(f"wrote {args.out_dir}/trials.csv and {args.out_dir}/summary.json")
    return 0


def cmd_synth(args) -> int:
    board = load_scenario(args.scenario)
    cfg = _load_config(args.config)
    policy = synthesize_policy(
        board, cfg.conflict_params(board.grid), cfg.bases(board.grid)
    )
    for entry in policy.entries:
        a = entry.action
        print(
            json.dumps(
                {
                    "rule": entry.rule,
                    "block_id": a.block_id,
                    "source": list(a.source),
                    "target": list(a.target),
                }
            )
        )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(
        scenario_dir=args.scenario_dir,
        cfg=_load_config(args.config),
        tick_hz=args.tick_hz,
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="sharedtable")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a single headless episode")
    p.add_argument("--scenario", required=True, help="bundled name or path to a scenario JSON")
    p.add_argument("--mode", choices=["task-oriented", "supportive"], required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace-out", help="write the episode trace as NDJSON (.gz to compress)")
    p.add_argument("--config", help="simulator config JSON")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("batch", help="run an experiment batch")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("synth", help="print the ranked policy for a scenario")
    p.add_argument("scenario")
    p.add_argument("--config", help="simulator config JSON")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("serve", help="serve interactive sessions over WebSocket")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--scenario-dir", help="directory of extra scenario JSON files")
    p.add_argument("--tick-hz", type=float, default=20.0)
    p.add_argument("--config", help="simulator config JSON")
    p.set_defaults(func=cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
