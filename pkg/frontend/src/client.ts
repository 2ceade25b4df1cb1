/**
 * WebSocket plumbing: a thin, testable wrapper that feeds validated inbound
 * messages to a callback and serializes outbound ones. In-order delivery is
 * the browser's guarantee; the store handles staleness by tick.
 */

import { type ClientMessage, type ServerMessage, parseServerMessage } from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
}

export class SessionClient {
  constructor(
    private socket: SocketLike,
    private onMessage: (msg: ServerMessage) => void,
    private onState: (state: "open" | "closed") => void,
    private onGarbage?: (raw: unknown) => void,
  ) {
    socket.onopen = () => this.onState("open");
    socket.onclose = () => this.onState("closed");
    socket.onmessage = (ev) => {
      const msg = typeof ev.data === "string" ? parseServerMessage(ev.data) : null;
      if (msg) {
        this.onMessage(msg);
      } else {
        this.onGarbage?.(ev.data);
      }
    };
  }

  send(msg: ClientMessage): void {
    this.socket.send(JSON.stringify(msg));
  }

  close(): void {
    this.socket.close();
  }
}

export function connect(
  url: string,
  onMessage: (msg: ServerMessage) => void,
  onState: (state: "open" | "closed") => void,
): SessionClient {
  return new SessionClient(new WebSocket(url) as unknown as SocketLike, onMessage, onState);
}
