/** Session client: connects, joins as driver or watcher, consumes frames.
 *
 * The UI stays stateless with respect to physics: the client only tracks
 * the last accepted frame and drops anything stale (tick <= last seen).
 */
import {
  clampControl,
  ControlFractions,
  Envelope,
  FrameJson,
} from "./protocol.js";

export type Role = "driver" | "watcher";

type WebSocketLike = {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: any) => void) | null;
  onmessage: ((ev: { data: any }) => void) | null;
  onclose: ((ev?: any) => void) | null;
  onerror: ((ev?: any) => void) | null;
};

export interface ClientOptions {
  /** WebSocket constructor; defaults to the browser global. */
  webSocketCtor?: new (url: string) => WebSocketLike;
}

interface Pending {
  resolve: (msg: Envelope) => void;
  reject: (err: Error) => void;
}

export class ProtocolError extends Error {
  constructor(public code: string, message: string) {
    super(`${code}: ${message}`);
  }
}

export class SessionClient {
  private ws: WebSocketLike | null = null;
  private pending: Pending[] = [];
  private seq = 0;
  private lastTick = -1;

  sessionId: string | null = null;
  role: Role | null = null;
  lastFrame: FrameJson | null = null;

  onFrame: ((frame: FrameJson) => void) | null = null;
  onDisconnect: (() => void) | null = null;

  constructor(private url: string, private options: ClientOptions = {}) {}

  connect(): Promise<void> {
    const Ctor =
      this.options.webSocketCtor ??
      ((globalThis as any).WebSocket as new (url: string) => WebSocketLike);
    if (!Ctor) {
      throw new Error("no WebSocket implementation available");
    }
    return new Promise((resolve, reject) => {
      const ws = new Ctor(this.url);
      ws.onopen = () => {
        this.ws = ws;
        resolve();
      };
      ws.onerror = () => reject(new Error(`connection to ${this.url} failed`));
      ws.onclose = () => {
        this.ws = null;
        for (const p of this.pending.splice(0)) {
          p.reject(new Error("connection closed"));
        }
        this.onDisconnect?.();
      };
      ws.onmessage = (ev) => this.handleMessage(String(ev.data));
    });
  }

  close(): void {
    this.ws?.close();
  }

  private handleMessage(data: string): void {
    let msg: Envelope;
    try {
      msg = JSON.parse(data);
    } catch {
      return;
    }
    if (msg.type === "frame") {
      const frame = msg.payload as FrameJson;
      // displayed ticks are non-decreasing: drop stale or duplicate frames
      if (frame.tick <= this.lastTick) {
        return;
      }
      this.lastTick = frame.tick;
      this.lastFrame = frame;
      this.onFrame?.(frame);
      return;
    }
    const pending = this.pending.shift();
    if (!pending) {
      return;
    }
    if (msg.type === "error") {
      pending.reject(
        new ProtocolError(msg.payload?.code ?? "ERROR", msg.payload?.message ?? "")
      );
    } else {
      pending.resolve(msg);
    }
  }

  private send(type: string, payload: object, session: string | null = null): void {
    if (!this.ws) {
      throw new Error("not connected");
    }
    this.seq += 1;
    this.ws.send(JSON.stringify({ type, session, seq: this.seq, payload }));
  }

  private request(type: string, payload: object, session: string | null = null): Promise<Envelope> {
    return new Promise((resolve, reject) => {
      this.pending.push({ resolve, reject });
      try {
        this.send(type, payload, session);
      } catch (err) {
        this.pending.pop();
        reject(err);
      }
    });
  }

  async hello(): Promise<Envelope> {
    return this.request("hello", { client: "liftsim-web" });
  }

  async createSession(dt?: number): Promise<string> {
    const msg = await this.request("create_session", dt ? { dt } : {});
    this.sessionId = msg.session;
    return msg.session as string;
  }

  /** Join a session; on DRIVER_TAKEN the caller may retry as a watcher. */
  async join(sessionId: string, role: Role): Promise<Role> {
    const msg = await this.request("join", { role }, sessionId);
    this.sessionId = sessionId;
    this.role = msg.payload.role as Role;
    return this.role;
  }

  /** Join as driver, falling back to watcher when the seat is taken. */
  async joinOrWatch(sessionId: string): Promise<Role> {
    try {
      return await this.join(sessionId, "driver");
    } catch (err) {
      if (err instanceof ProtocolError && err.code === "DRIVER_TAKEN") {
        return await this.join(sessionId, "watcher");
      }
      throw err;
    }
  }

  /** Fire-and-forget control message; fractions are clamped to [-1, 1]. */
  sendControl(fractions: ControlFractions): void {
    if (this.role !== "driver" || !this.sessionId) {
      return;
    }
    this.send("control", clampControl(fractions), this.sessionId);
  }

  async requestFullClearance(): Promise<Envelope> {
    return this.request("full_clearance_request", {}, this.sessionId);
  }

  async requestScene(): Promise<Envelope> {
    return this.request("scene_request", {});
  }

  async checkPath(path: object, resolution = 0.25): Promise<Envelope> {
    return this.request("check_path", { path, resolution }, this.sessionId);
  }

  async planPath(from: string | object, to: string | object): Promise<Envelope> {
    return this.request("plan_path", { from, to }, this.sessionId);
  }
}
