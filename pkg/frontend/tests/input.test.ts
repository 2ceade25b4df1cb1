import { describe, expect, it } from "vitest";

import { HandStream, clickCell, pointToCell } from "../src/input.js";
import { initialViewModel, reduce } from "../src/store.js";
import { makeSnapshot } from "./fixtures.js";

function runningVm() {
  return reduce(initialViewModel(), makeSnapshot());
}

describe("click gestures", () => {
  it("clicking a robot block gives local feedback and sends nothing", () => {
    const { vm, message } = clickCell(runningVm(), [3, 2]);
    expect(message).toBeNull();
    expect(vm.selection).toEqual({ kind: "none" });
    expect(vm.toasts[0]!.text).toContain("robot");
  });

  it("clicking an own block then an empty cell emits exactly one move", () => {
    const first = clickCell(runningVm(), [2, 5]);
    expect(first.message).toBeNull();
    expect(first.vm.selection).toEqual({ kind: "block", blockId: 7 });
    const second = clickCell(first.vm, [0, 5]);
    expect(second.message).toEqual({ type: "human_move", block_id: 7, target: [0, 5] });
    expect(second.vm.selection).toEqual({ kind: "none" });
  });

  it("clicking the selected block deselects it", () => {
    const first = clickCell(runningVm(), [2, 5]);
    const second = clickCell(first.vm, [2, 5]);
    expect(second.message).toBeNull();
    expect(second.vm.selection).toEqual({ kind: "none" });
  });

  it("clicking an occupied cell while selected is local feedback only", () => {
    const first = clickCell(runningVm(), [2, 5]);
    const second = clickCell(first.vm, [3, 2]); // robot block's cell
    expect(second.message).toBeNull();
    expect(second.vm.toasts[0]!.text).toContain("occupied");
  });

  it("empty-cell clicks with no selection are inert", () => {
    const { vm, message } = clickCell(runningVm(), [4, 4]);
    expect(message).toBeNull();
    expect(vm.toasts).toHaveLength(0);
  });

  it("ignores gestures outside the running phase", () => {
    let vm = reduce(initialViewModel(), makeSnapshot({ phase: "finished" }));
    const res = clickCell(vm, [2, 5]);
    expect(res.message).toBeNull();
    expect(res.vm.selection).toEqual({ kind: "none" });
  });
});

describe("pointToCell", () => {
  const grid = { rows: 7, cols: 15, cell_size: 0.1 };

  it("maps cell centers to their cells", () => {
    expect(pointToCell(grid, [0.05, 0.05])).toEqual([0, 0]);
    expect(pointToCell(grid, [1.45, 0.65])).toEqual([6, 14]);
  });

  it("clamps points off the table", () => {
    expect(pointToCell(grid, [-0.2, -0.2])).toEqual([0, 0]);
    expect(pointToCell(grid, [99, 99])).toEqual([6, 14]);
  });
});

describe("hand stream throttle", () => {
  it("caps a 120 Hz pointer stream at the tick rate", () => {
    const stream = new HandStream(50); // 20 Hz
    let sent = 0;
    for (let i = 0; i < 120; i++) {
      // one second of 120 Hz motion
      if (stream.move([i / 120, 0.5], i * (1000 / 120))) sent++;
    }
    expect(sent).toBeLessThanOrEqual(21);
    expect(sent).toBeGreaterThanOrEqual(19);
  });

  it("flush delivers the trailing point once the window reopens", () => {
    const stream = new HandStream(50);
    expect(stream.move([0.1, 0.1], 0)).not.toBeNull();
    expect(stream.move([0.2, 0.2], 10)).toBeNull();
    expect(stream.flush(20)).toBeNull();
    const trailing = stream.flush(60);
    expect(trailing).toEqual({ type: "hand_pos", point: [0.2, 0.2] });
    expect(stream.flush(70)).toBeNull(); // nothing pending twice
  });
});
