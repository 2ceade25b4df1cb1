/**
 * Canvas rendering. Pure function of the view model: every frame clears and
 * redraws, so replaying a snapshot log paints identically. The human sits at
 * the bottom of the screen, which means world y (rows toward the robot)
 * increases upward and must be flipped into screen coordinates.
 */

import type { Grid, Snapshot } from "./protocol.js";
import type { ViewModel } from "./store.js";

/** The 2D-context subset used, narrow enough to stub in tests. */
export interface Surface {
  canvasWidth: number;
  canvasHeight: number;
  clear(): void;
  rect(x: number, y: number, w: number, h: number, fill: string): void;
  strokeRect(x: number, y: number, w: number, h: number, stroke: string, width: number): void;
  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width: number): void;
  circle(x: number, y: number, r: number, fill: string): void;
  text(s: string, x: number, y: number, fill: string, px: number): void;
}

const COLORS = {
  table: "#f5efe2",
  gridLine: "#c9c1ad",
  robotBlock: "#3a6ea5",
  humanBlock: "#c96f3b",
  robotDest: "#dbe7f3",
  humanDest: "#f7e3d4",
  selected: "#18a558",
  arm: "#444444",
  armPaused: "#d62828",
  hand: "#c96f3b",
  textDark: "#222222",
  banner: "#d62828",
};

export interface Transform {
  scale: number;
  offsetX: number;
  offsetY: number;
  worldHeight: number;
}

/** Fit the table into the canvas with a margin; world y flips to screen y. */
export function makeTransform(grid: Grid, surface: { canvasWidth: number; canvasHeight: number }): Transform {
  const margin = 0.35; // meters of off-table space kept visible for the arms
  const worldW = grid.cols * grid.cell_size + 2 * margin;
  const worldH = grid.rows * grid.cell_size + 2 * margin;
  const scale = Math.min(surface.canvasWidth / worldW, surface.canvasHeight / worldH);
  return {
    scale,
    offsetX: margin * scale,
    offsetY: margin * scale,
    worldHeight: grid.rows * grid.cell_size,
  };
}

export function toScreen(tf: Transform, x: number, y: number): [number, number] {
  return [tf.offsetX + x * tf.scale, tf.offsetY + (tf.worldHeight - y) * tf.scale];
}

export function fromScreen(tf: Transform, sx: number, sy: number): [number, number] {
  return [(sx - tf.offsetX) / tf.scale, tf.worldHeight - (sy - tf.offsetY) / tf.scale];
}

function cellOrigin(grid: Grid, tf: Transform, r: number, c: number): [number, number] {
  // screen-space top-left corner of the cell
  return toScreen(tf, c * grid.cell_size, (r + 1) * grid.cell_size);
}

function drawBoard(s: Surface, snap: Snapshot, tf: Transform, vm: ViewModel): void {
  const grid = snap.board.grid;
  const cs = grid.cell_size * tf.scale;
  const [ox, oy] = cellOrigin(grid, tf, grid.rows - 1, 0);
  s.rect(ox, oy, grid.cols * cs, grid.rows * cs, COLORS.table);

  for (const b of snap.board.blocks) {
    const [r, c] = b.destination;
    const [x, y] = cellOrigin(grid, tf, r, c);
    s.rect(x, y, cs, cs, b.owner === "robot" ? COLORS.robotDest : COLORS.humanDest);
  }
  for (let r = 0; r <= grid.rows; r++) {
    const [x1, y1] = toScreen(tf, 0, r * grid.cell_size);
    const [x2] = toScreen(tf, grid.cols * grid.cell_size, r * grid.cell_size);
    s.line(x1, y1, x2, y1, COLORS.gridLine, 1);
  }
  for (let c = 0; c <= grid.cols; c++) {
    const [x1, y1] = toScreen(tf, c * grid.cell_size, 0);
    const [, y2] = toScreen(tf, c * grid.cell_size, grid.rows * grid.cell_size);
    s.line(x1, y1, x1, y2, COLORS.gridLine, 1);
  }

  for (const b of snap.board.blocks) {
    const [r, c] = b.location;
    const [x, y] = cellOrigin(grid, tf, r, c);
    const pad = cs * 0.12;
    s.rect(x + pad, y + pad, cs - 2 * pad, cs - 2 * pad,
      b.owner === "robot" ? COLORS.robotBlock : COLORS.humanBlock);
    if (vm.selection.kind === "block" && vm.selection.blockId === b.id) {
      s.strokeRect(x + 1, y + 1, cs - 2, cs - 2, COLORS.selected, 3);
    }
    s.text(String(b.id), x + cs / 2, y + cs / 2, "#ffffff", cs * 0.45);
  }
}

function drawRobotArm(s: Surface, snap: Snapshot, tf: Transform, flagged: boolean): void {
  const { base, link_lengths, angles } = snap.robot;
  const [l1, l2] = link_lengths;
  const [t1, t2] = angles;
  const elbow: [number, number] = [base[0] + l1 * Math.cos(t1), base[1] + l1 * Math.sin(t1)];
  const tip: [number, number] = [
    elbow[0] + l2 * Math.cos(t1 + t2),
    elbow[1] + l2 * Math.sin(t1 + t2),
  ];
  const color = flagged ? COLORS.armPaused : COLORS.arm;
  const [bx, by] = toScreen(tf, base[0], base[1]);
  const [ex, ey] = toScreen(tf, elbow[0], elbow[1]);
  const [tx, ty] = toScreen(tf, tip[0], tip[1]);
  s.line(bx, by, ex, ey, color, 6);
  s.line(ex, ey, tx, ty, color, 6);
  s.circle(bx, by, 8, color);
  s.circle(ex, ey, 5, color);
  s.circle(tx, ty, 5, color);
}

function drawHuman(s: Surface, snap: Snapshot, tf: Transform): void {
  const g = snap.human.geometry;
  if (snap.human.kind === "hand" && g.length === 2) {
    const [x, y] = toScreen(tf, g[0]!, g[1]!);
    s.circle(x, y, 7, COLORS.hand);
  }
  // the arm model is driven by scripted clients; no pose is drawn for it
}

function fmt(v: number): string {
  return v.toFixed(2);
}

function drawMetrics(s: Surface, vm: ViewModel, snap: Snapshot): void {
  const m = vm.finalMetrics;
  const lines = m
    ? [
        `finished  task time ${fmt(m.task_time)} s`,
        `stops ${m.safety_stops}  idle ratio ${fmt(m.human_idle_ratio)}`,
        `supportive moves ${m.supportive_actions_taken}`,
      ]
    : [
        `t ${fmt(snap.metrics.elapsed)} s  mode ${snap.mode}`,
        `stops ${snap.metrics.safety_stops}  idle ratio ${fmt(snap.metrics.human_idle_ratio)}`,
        `supportive moves ${snap.metrics.supportive_actions_taken}`,
      ];
  lines.forEach((line, i) => s.text(line, 10, 18 + 16 * i, COLORS.textDark, 13));
}

/** Full-frame redraw; never throws, bad states degrade to a banner. */
export function render(s: Surface, vm: ViewModel): void {
  s.clear();
  const snap = vm.snapshot;
  if (!snap) {
    s.text(
      vm.connection === "closed" ? "connection lost" : "connecting...",
      s.canvasWidth / 2, s.canvasHeight / 2, COLORS.textDark, 16,
    );
    return;
  }
  const tf = makeTransform(snap.board.grid, s);
  drawBoard(s, snap, tf, vm);
  drawRobotArm(s, snap, tf, vm.safetyActive);
  drawHuman(s, snap, tf);
  drawMetrics(s, vm, snap);
  if (vm.safetyActive) {
    s.text("SAFETY STOP", s.canvasWidth / 2, 20, COLORS.banner, 18);
  }
  vm.toasts.forEach((toast, i) => {
    s.text(toast.text, 10, s.canvasHeight - 12 - 18 * i, COLORS.banner, 13);
  });
}
