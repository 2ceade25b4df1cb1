/**
 * Browser entry point: wires the canvas, pointer events, the throttled hand
 * stream and the WebSocket together around the store. Renders are coalesced
 * to one per animation frame.
 */

import { connect } from "./client.js";
import { HandStream, clickCell, pointToCell } from "./input.js";
import { hello } from "./protocol.js";
import {
  type ViewModel,
  expireToasts,
  initialViewModel,
  reduce,
  setConnection,
} from "./store.js";
import { type Surface, fromScreen, makeTransform, render } from "./render.js";

function canvasSurface(canvas: HTMLCanvasElement): Surface {
  const ctx = canvas.getContext("2d")!;
  return {
    canvasWidth: canvas.width,
    canvasHeight: canvas.height,
    clear: () => ctx.clearRect(0, 0, canvas.width, canvas.height),
    rect: (x, y, w, h, fill) => {
      ctx.fillStyle = fill;
      ctx.fillRect(x, y, w, h);
    },
    strokeRect: (x, y, w, h, stroke, width) => {
      ctx.strokeStyle = stroke;
      ctx.lineWidth = width;
      ctx.strokeRect(x, y, w, h);
    },
    line: (x1, y1, x2, y2, stroke, width) => {
      ctx.strokeStyle = stroke;
      ctx.lineWidth = width;
      ctx.lineCap = "round";
      ctx.beginPath();
      ctx.moveTo(x1, y1);
      ctx.lineTo(x2, y2);
      ctx.stroke();
    },
    circle: (x, y, r, fill) => {
      ctx.fillStyle = fill;
      ctx.beginPath();
      ctx.arc(x, y, r, 0, 2 * Math.PI);
      ctx.fill();
    },
    text: (s, x, y, fill, px) => {
      ctx.fillStyle = fill;
      ctx.font = `${px}px system-ui, sans-serif`;
      ctx.textAlign = "left";
      ctx.textBaseline = "middle";
      ctx.fillText(s, x, y);
    },
  };
}

export function boot(): void {
  const canvas = document.getElementById("board") as HTMLCanvasElement;
  const surface = canvasSurface(canvas);
  const params = new URLSearchParams(location.search);
  const scenario = params.get("scenario") ?? "easy";
  const mode = params.get("mode") === "task-oriented" ? "task-oriented" : "supportive";
  const seed = Number(params.get("seed") ?? "0");
  const tickHz = Number(params.get("tick_hz") ?? "20");

  let vm: ViewModel = initialViewModel();
  let dirty = true;
  const update = (next: ViewModel) => {
    vm = next;
    dirty = true;
  };

  const wsUrl = `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/ws`;
  const client = connect(
    wsUrl,
    (msg) => update(reduce(vm, msg, performance.now())),
    (state) => {
      update(setConnection(vm, state));
      if (state === "open") client.send(hello(scenario, mode, "hand", seed));
    },
  );

  const hand = new HandStream(1000 / tickHz);

  canvas.addEventListener("pointermove", (ev) => {
    if (!vm.snapshot || vm.snapshot.phase !== "running") return;
    const tf = makeTransform(vm.snapshot.board.grid, surface);
    const rect = canvas.getBoundingClientRect();
    const [x, y] = fromScreen(tf, ev.clientX - rect.left, ev.clientY - rect.top);
    const msg = hand.move([x, y], performance.now());
    if (msg) client.send(msg);
  });
  setInterval(() => {
    const msg = hand.flush(performance.now());
    if (msg) client.send(msg);
  }, 1000 / tickHz);

  canvas.addEventListener("click", (ev) => {
    if (!vm.snapshot) return;
    const tf = makeTransform(vm.snapshot.board.grid, surface);
    const rect = canvas.getBoundingClientRect();
    const [x, y] = fromScreen(tf, ev.clientX - rect.left, ev.clientY - rect.top);
    const grid = vm.snapshot.board.grid;
    if (x < 0 || y < 0 || x > grid.cols * grid.cell_size || y > grid.rows * grid.cell_size) {
      return;
    }
    const { vm: next, message } = clickCell(vm, pointToCell(grid, [x, y]), performance.now());
    update(next);
    if (message) client.send(message);
  });

  const frame = () => {
    const expired = expireToasts(vm, performance.now());
    if (expired !== vm) update(expired);
    if (dirty) {
      render(surface, vm);
      dirty = false;
    }
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);
}

boot();
