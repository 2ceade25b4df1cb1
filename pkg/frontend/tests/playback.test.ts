import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { parseServerMessage } from "../src/protocol.js";
import { type ViewModel, initialViewModel, reduce } from "../src/store.js";

// A complete session recorded against the real server (supportive robot on
// the easy layout, scripted arm human). Replaying it through the store is
// the client-side half of the end-to-end contract.
const LOG = join(__dirname, "fixtures", "session_log.ndjson");

function replay(): { vm: ViewModel; lines: string[] } {
  const lines = readFileSync(LOG, "utf-8").trim().split("\n");
  let vm = initialViewModel();
  for (const line of lines) {
    const msg = parseServerMessage(line);
    expect(msg).not.toBeNull();
    vm = reduce(vm, msg!);
  }
  return { vm, lines };
}

describe("recorded session playback", () => {
  it("every recorded frame validates against the protocol schemas", () => {
    const { lines } = replay();
    expect(lines.length).toBeGreaterThan(50);
  });

  it("ends in the finished state with final metrics", () => {
    const { vm } = replay();
    expect(vm.finalMetrics).not.toBeNull();
    expect(vm.safetyActive).toBe(false);
  });

  it("final metrics are consistent with the last snapshot's accumulators", () => {
    const lines = readFileSync(LOG, "utf-8").trim().split("\n");
    const msgs = lines.map((l) => parseServerMessage(l)!);
    const snapshots = msgs.filter((m) => m.type === "snapshot");
    const last = snapshots[snapshots.length - 1]!;
    const end = msgs[msgs.length - 1]!;
    expect(end.type).toBe("episode_end");
    if (end.type !== "episode_end" || last.type !== "snapshot") return;
    const final = end.metrics;
    // settled accumulators match exactly; the time totals can only grow in
    // the final partial round the last periodic snapshot did not cover
    expect(final.safety_stops).toBe(last.metrics.safety_stops);
    expect(final.supportive_actions_taken).toBe(last.metrics.supportive_actions_taken);
    expect(final.robot_time).toBeGreaterThanOrEqual(last.metrics.robot_time);
    expect(final.human_time).toBeGreaterThanOrEqual(last.metrics.human_time);
    expect(final.task_time).toBeCloseTo(Math.max(final.robot_time, final.human_time), 9);
  });

  it("snapshot ticks are monotone after stale filtering", () => {
    const lines = readFileSync(LOG, "utf-8").trim().split("\n");
    let vm = initialViewModel();
    let prev = -1;
    for (const line of lines) {
      vm = reduce(vm, parseServerMessage(line)!);
      if (vm.snapshot) {
        expect(vm.snapshot.tick).toBeGreaterThanOrEqual(prev);
        prev = vm.snapshot.tick;
      }
    }
    expect(vm.droppedStale).toBe(0); // the server stream itself is in order
  });
});
