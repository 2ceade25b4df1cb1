import type { Snapshot } from "../src/protocol.js";

/** Minimal but fully valid snapshot for a 7x15 board with one block each. */
export function makeSnapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  return {
    type: "snapshot",
    tick: 0,
    t: 0,
    phase: "running",
    mode: "supportive",
    board: {
      grid: { rows: 7, cols: 15, cell_size: 0.1, robot_side: 6, human_side: 0 },
      blocks: [
        { id: 1, owner: "robot", location: [3, 2], destination: [6, 2] },
        { id: 7, owner: "human", location: [2, 5], destination: [0, 5] },
      ],
    },
    robot: {
      base: [0.75, 0.85],
      link_lengths: [0.58, 0.58],
      angles: [-1.2, 0.4],
      paused: false,
      holding: null,
    },
    human: { kind: "hand", geometry: [0.4, 0.2] },
    metrics: {
      elapsed: 0,
      robot_time: 0,
      human_time: 0,
      safety_stops: 0,
      supportive_actions_taken: 0,
      human_wait_time: 0,
      human_idle_ratio: 0,
    },
    ...overrides,
  };
}
