/**
 * Message schemas for the session server's WebSocket protocol (version 1).
 *
 * Inbound frames are parsed defensively with zod; outbound frames go through
 * builder functions so the client can never emit a malformed message.
 */

import { z } from "zod";

export const PROTOCOL_VERSION = 1;

export const Cell = z.tuple([z.number().int(), z.number().int()]);
export type Cell = z.infer<typeof Cell>;

export const Point = z.tuple([z.number(), z.number()]);
export type Point = z.infer<typeof Point>;

export const BlockSchema = z.object({
  id: z.number().int(),
  owner: z.enum(["robot", "human"]),
  location: Cell,
  destination: Cell,
});
export type Block = z.infer<typeof BlockSchema>;

export const GridSchema = z.object({
  rows: z.number().int().min(2),
  cols: z.number().int().min(1),
  cell_size: z.number().positive(),
  robot_side: z.number().int(),
  human_side: z.number().int(),
});
export type Grid = z.infer<typeof GridSchema>;

export const BoardSchema = z.object({
  grid: GridSchema,
  blocks: z.array(BlockSchema),
});
export type Board = z.infer<typeof BoardSchema>;

export const LiveMetricsSchema = z.object({
  elapsed: z.number(),
  robot_time: z.number(),
  human_time: z.number(),
  safety_stops: z.number().int(),
  supportive_actions_taken: z.number().int(),
  human_wait_time: z.number(),
  human_idle_ratio: z.number(),
});
export type LiveMetrics = z.infer<typeof LiveMetricsSchema>;

export const SnapshotSchema = z.object({
  type: z.literal("snapshot"),
  tick: z.number().int().nonnegative(),
  t: z.number(),
  phase: z.enum(["lobby", "running", "finished"]),
  mode: z.enum(["task-oriented", "supportive"]),
  board: BoardSchema,
  robot: z.object({
    base: Point,
    link_lengths: z.tuple([z.number(), z.number()]),
    angles: z.tuple([z.number(), z.number()]),
    paused: z.boolean(),
    holding: z.number().int().nullable(),
  }),
  human: z.object({
    kind: z.enum(["hand", "arm"]),
    geometry: z.array(z.number()).length(2),
  }),
  metrics: LiveMetricsSchema,
});
export type Snapshot = z.infer<typeof SnapshotSchema>;

export const SafetyEventSchema = z.object({
  type: z.literal("safety_event"),
  event: z.enum(["start", "end"]),
  t: z.number(),
});
export type SafetyEvent = z.infer<typeof SafetyEventSchema>;

export const FinalMetricsSchema = z.object({
  task_time: z.number(),
  robot_time: z.number(),
  human_time: z.number(),
  safety_stops: z.number().int(),
  human_idle_ratio: z.number(),
  supportive_actions_taken: z.number().int(),
  idle_ratio_defined: z.boolean(),
});
export type FinalMetrics = z.infer<typeof FinalMetricsSchema>;

export const EpisodeEndSchema = z.object({
  type: z.literal("episode_end"),
  metrics: FinalMetricsSchema,
});
export type EpisodeEnd = z.infer<typeof EpisodeEndSchema>;

export const ErrorSchema = z.object({
  type: z.literal("error"),
  code: z.enum([
    "bad_message",
    "bad_mode",
    "unknown_scenario",
    "unknown_block",
    "not_your_block",
    "occupied_target",
    "out_of_phase",
  ]),
  message: z.string(),
});
export type ServerError = z.infer<typeof ErrorSchema>;

export const ServerMessageSchema = z.discriminatedUnion("type", [
  SnapshotSchema,
  SafetyEventSchema,
  EpisodeEndSchema,
  ErrorSchema,
]);
export type ServerMessage = z.infer<typeof ServerMessageSchema>;

/** Parse one inbound frame; returns null (never throws) on anything bogus. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    return null;
  }
  const result = ServerMessageSchema.safeParse(doc);
  return result.success ? result.data : null;
}

// -- outbound ---------------------------------------------------------------

export interface Hello {
  type: "hello";
  version: number;
  scenario: string;
  mode: "task-oriented" | "supportive";
  human_model: "hand" | "arm";
  seed: number;
}

export interface HumanMove {
  type: "human_move";
  block_id: number;
  target: Cell;
}

export interface HandPos {
  type: "hand_pos";
  point: Point;
}

export type ClientMessage = Hello | HumanMove | HandPos;

export function hello(
  scenario: string,
  mode: Hello["mode"],
  humanModel: Hello["human_model"] = "hand",
  seed = 0,
): Hello {
  return { type: "hello", version: PROTOCOL_VERSION, scenario, mode, human_model: humanModel, seed };
}

export function humanMove(blockId: number, target: Cell): HumanMove {
  if (!Number.isInteger(blockId) || !Number.isInteger(target[0]) || !Number.isInteger(target[1])) {
    throw new Error("human_move needs integer block id and cell");
  }
  return { type: "human_move", block_id: blockId, target };
}

export function handPos(point: Point): HandPos {
  if (!Number.isFinite(point[0]) || !Number.isFinite(point[1])) {
    throw new Error("hand_pos needs finite coordinates");
  }
  return { type: "hand_pos", point };
}
