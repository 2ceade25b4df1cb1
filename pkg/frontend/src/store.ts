/**
 * Single client-side store. The server is authoritative: the store only
 * mirrors snapshots plus transient UI state (selection, toasts, connection).
 * Rendering is a pure function of this state.
 */

import type {
  Cell,
  EpisodeEnd,
  FinalMetrics,
  SafetyEvent,
  ServerError,
  ServerMessage,
  Snapshot,
} from "./protocol.js";

export type Selection =
  | { kind: "none" }
  | { kind: "block"; blockId: number };

export interface Toast {
  text: string;
  at: number; // ms timestamp, for expiry
}

export interface ViewModel {
  connection: "connecting" | "open" | "closed";
  snapshot: Snapshot | null;
  selection: Selection;
  safetyActive: boolean;
  finalMetrics: FinalMetrics | null;
  toasts: Toast[];
  droppedStale: number;
}

export function initialViewModel(): ViewModel {
  return {
    connection: "connecting",
    snapshot: null,
    selection: { kind: "none" },
    safetyActive: false,
    finalMetrics: null,
    toasts: [],
    droppedStale: 0,
  };
}

const TOAST_MS = 4000;

function pushToast(vm: ViewModel, text: string, now: number): ViewModel {
  const toasts = [...vm.toasts, { text, at: now }].slice(-4);
  return { ...vm, toasts };
}

export function expireToasts(vm: ViewModel, now: number): ViewModel {
  const toasts = vm.toasts.filter((t) => now - t.at < TOAST_MS);
  return toasts.length === vm.toasts.length ? vm : { ...vm, toasts };
}

function applySnapshot(vm: ViewModel, snap: Snapshot): ViewModel {
  if (vm.snapshot && snap.tick < vm.snapshot.tick) {
    return { ...vm, droppedStale: vm.droppedStale + 1 };
  }
  let selection = vm.selection;
  if (selection.kind === "block") {
    const sel = selection.blockId;
    const still = snap.board.blocks.some((b) => b.id === sel && b.owner === "human");
    if (!still) selection = { kind: "none" };
  }
  return { ...vm, snapshot: snap, selection, safetyActive: snap.robot.paused };
}

function applySafety(vm: ViewModel, ev: SafetyEvent): ViewModel {
  return { ...vm, safetyActive: ev.event === "start" };
}

function applyEnd(vm: ViewModel, msg: EpisodeEnd): ViewModel {
  return { ...vm, finalMetrics: msg.metrics, selection: { kind: "none" }, safetyActive: false };
}

function applyError(vm: ViewModel, err: ServerError, now: number): ViewModel {
  return pushToast(vm, `${err.code}: ${err.message}`, now);
}

export function reduce(vm: ViewModel, msg: ServerMessage, now = 0): ViewModel {
  switch (msg.type) {
    case "snapshot":
      return applySnapshot(vm, msg);
    case "safety_event":
      return applySafety(vm, msg);
    case "episode_end":
      return applyEnd(vm, msg);
    case "error":
      return applyError(vm, msg, now);
  }
}

export function setConnection(vm: ViewModel, state: ViewModel["connection"]): ViewModel {
  return { ...vm, connection: state };
}

// -- selection helpers used by the input layer -------------------------------

export function blockAt(vm: ViewModel, cell: Cell) {
  const snap = vm.snapshot;
  if (!snap) return undefined;
  return snap.board.blocks.find(
    (b) => b.location[0] === cell[0] && b.location[1] === cell[1],
  );
}

export function select(vm: ViewModel, blockId: number): ViewModel {
  return { ...vm, selection: { kind: "block", blockId } };
}

export function deselect(vm: ViewModel): ViewModel {
  return { ...vm, selection: { kind: "none" } };
}

export function localFeedback(vm: ViewModel, text: string, now = 0): ViewModel {
  return pushToast(vm, text, now);
}
