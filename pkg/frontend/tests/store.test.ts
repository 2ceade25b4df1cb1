import { describe, expect, it } from "vitest";

import { expireToasts, initialViewModel, reduce, select } from "../src/store.js";
import { makeSnapshot } from "./fixtures.js";

describe("snapshot application", () => {
  it("newer snapshots replace older ones", () => {
    let vm = reduce(initialViewModel(), makeSnapshot({ tick: 5 }));
    vm = reduce(vm, makeSnapshot({ tick: 9, t: 0.09 }));
    expect(vm.snapshot?.tick).toBe(9);
  });

  it("stale snapshots never overwrite newer ones", () => {
    let vm = reduce(initialViewModel(), makeSnapshot({ tick: 9 }));
    vm = reduce(vm, makeSnapshot({ tick: 4 }));
    expect(vm.snapshot?.tick).toBe(9);
    expect(vm.droppedStale).toBe(1);
  });

  it("equal tick is not stale (resends after human_move ack)", () => {
    let vm = reduce(initialViewModel(), makeSnapshot({ tick: 3 }));
    vm = reduce(vm, makeSnapshot({ tick: 3, t: 0.03 }));
    expect(vm.snapshot?.t).toBe(0.03);
  });

  it("selection survives snapshots while the block exists, then clears", () => {
    let vm = reduce(initialViewModel(), makeSnapshot({ tick: 0 }));
    vm = select(vm, 7);
    vm = reduce(vm, makeSnapshot({ tick: 1 }));
    expect(vm.selection).toEqual({ kind: "block", blockId: 7 });
    const gone = makeSnapshot({ tick: 2 });
    gone.board.blocks = gone.board.blocks.filter((b) => b.id !== 7);
    vm = reduce(vm, gone);
    expect(vm.selection).toEqual({ kind: "none" });
  });
});

describe("safety state", () => {
  it("follows safety events within one reduction", () => {
    let vm = reduce(initialViewModel(), makeSnapshot());
    vm = reduce(vm, { type: "safety_event", event: "start", t: 1.0 });
    expect(vm.safetyActive).toBe(true);
    vm = reduce(vm, { type: "safety_event", event: "end", t: 2.0 });
    expect(vm.safetyActive).toBe(false);
  });

  it("snapshot paused flag also drives the safety state", () => {
    const snap = makeSnapshot({ tick: 1 });
    snap.robot.paused = true;
    const vm = reduce(initialViewModel(), snap);
    expect(vm.safetyActive).toBe(true);
  });
});

describe("episode end and errors", () => {
  it("episode_end stores final metrics and clears transient state", () => {
    let vm = reduce(initialViewModel(), makeSnapshot());
    vm = select(vm, 7);
    vm = reduce(vm, {
      type: "episode_end",
      metrics: {
        task_time: 80.5,
        robot_time: 80.5,
        human_time: 70.1,
        safety_stops: 2,
        human_idle_ratio: 0.05,
        supportive_actions_taken: 1,
        idle_ratio_defined: true,
      },
    });
    expect(vm.finalMetrics?.task_time).toBe(80.5);
    expect(vm.selection).toEqual({ kind: "none" });
  });

  it("server errors surface as toasts and expire", () => {
    let vm = reduce(initialViewModel(), {
      type: "error",
      code: "occupied_target",
      message: "cell [0, 3] is occupied",
    }, 1000);
    expect(vm.toasts).toHaveLength(1);
    expect(vm.toasts[0]!.text).toContain("occupied_target");
    vm = expireToasts(vm, 1000 + 3999);
    expect(vm.toasts).toHaveLength(1);
    vm = expireToasts(vm, 1000 + 4001);
    expect(vm.toasts).toHaveLength(0);
  });
});
