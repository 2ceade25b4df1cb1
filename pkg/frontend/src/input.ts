/**
 * Gesture handling: board clicks become block selection / move requests and
 * pointer motion becomes a throttled hand position stream. Illegal gestures
 * produce local feedback only; no malformed message can leave this layer.
 */

import { type Cell, type ClientMessage, type Point, handPos, humanMove } from "./protocol.js";
import {
  type ViewModel,
  blockAt,
  deselect,
  localFeedback,
  select,
} from "./store.js";

export interface GestureResult {
  vm: ViewModel;
  message: ClientMessage | null;
}

/** A click on a board cell: select own block, retarget, or request a move. */
export function clickCell(vm: ViewModel, cell: Cell, now = 0): GestureResult {
  const snap = vm.snapshot;
  if (!snap || snap.phase !== "running") {
    return { vm, message: null };
  }
  const hit = blockAt(vm, cell);
  if (vm.selection.kind === "none") {
    if (!hit) return { vm, message: null };
    if (hit.owner !== "human") {
      return { vm: localFeedback(vm, "that block is the robot's", now), message: null };
    }
    return { vm: select(vm, hit.id), message: null };
  }
  // a block is selected
  if (hit && hit.id === vm.selection.blockId) {
    return { vm: deselect(vm), message: null };
  }
  if (hit) {
    if (hit.owner === "human") {
      return { vm: select(vm, hit.id), message: null };
    }
    return { vm: localFeedback(vm, "cell is occupied", now), message: null };
  }
  const message = humanMove(vm.selection.blockId, cell);
  return { vm: deselect(vm), message };
}

/** Metric point under a pointer event, given the render transform inverse. */
export function pointToCell(grid: { rows: number; cols: number; cell_size: number }, p: Point): Cell {
  const clamp = (v: number, hi: number) => Math.max(0, Math.min(hi, v));
  const c = clamp(Math.floor(p[0] / grid.cell_size), grid.cols - 1);
  const r = clamp(Math.floor(p[1] / grid.cell_size), grid.rows - 1);
  return [r, c];
}

/**
 * Throttles the pointer stream to at most one hand_pos per interval, always
 * keeping the newest point (trailing edge) so the server converges on the
 * true hand position.
 */
export class HandStream {
  private lastSent = -Infinity;
  private pending: Point | null = null;
  constructor(private intervalMs: number) {}

  /** Returns the message to send now, or null if inside the throttle window. */
  move(point: Point, now: number): ClientMessage | null {
    if (now - this.lastSent >= this.intervalMs) {
      this.lastSent = now;
      this.pending = null;
      return handPos(point);
    }
    this.pending = point;
    return null;
  }

  /** Called on a timer to flush the trailing point once the window reopens. */
  flush(now: number): ClientMessage | null {
    if (this.pending && now - this.lastSent >= this.intervalMs) {
      const p = this.pending;
      this.pending = null;
      this.lastSent = now;
      return handPos(p);
    }
    return null;
  }
}
