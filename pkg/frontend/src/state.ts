// Viewer state machine: one current result, two compare slots, at most one
// generate in flight. Stale responses (an older request resolving after a
// newer one started) are discarded so the rendered mesh always matches the
// displayed report's job id.

import type { JobRecord, MeshReport, Client } from "./api";
import { ApiError } from "./api";
import type { BrickSpec } from "./spec";
import { validateSpec } from "./spec";

export type Status =
  | { phase: "idle" }
  | { phase: "generating" }
  | { phase: "error"; message: string };

export interface ResultSnapshot {
  jobId: string;
  spec: BrickSpec;
  report: MeshReport;
  meshBytes: ArrayBuffer;
}

export interface ViewerState {
  status: Status;
  result: ResultSnapshot | null;
  slots: [ResultSnapshot | null, ResultSnapshot | null];
}

type Listener = (state: ViewerState) => void;

export class ViewerStore {
  private sequence = 0;
  private state: ViewerState = {
    status: { phase: "idle" },
    result: null,
    slots: [null, null],
  };
  private listeners: Listener[] = [];

  constructor(private client: Client) {}

  get current(): ViewerState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(partial: Partial<ViewerState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  get generating(): boolean {
    return this.state.status.phase === "generating";
  }

  /** Validate, POST, fetch mesh + report; returns false when blocked or stale. */
  async generate(spec: BrickSpec): Promise<boolean> {
    const errors = validateSpec(spec);
    if (errors.length > 0) {
      this.set({ status: { phase: "error", message: errors.join("; ") } });
      return false;
    }
    const mySequence = ++this.sequence;
    this.set({ status: { phase: "generating" } });
    try {
      const record: JobRecord = await this.client.generate(spec);
      if (mySequence !== this.sequence) return false; // superseded
      if (record.status !== "done" || record.report === null) {
        this.set({
          status: { phase: "error", message: `${record.error ?? "FAILED"}: generation failed` },
        });
        return false;
      }
      const meshBytes = await this.client.meshStl(record.id);
      if (mySequence !== this.sequence) return false;
      this.set({
        status: { phase: "idle" },
        result: { jobId: record.id, spec: record.spec, report: record.report, meshBytes },
      });
      return true;
    } catch (error) {
      if (mySequence !== this.sequence) return false;
      const message =
        error instanceof ApiError ? error.message : `TRANSPORT: ${String(error)}`;
      this.set({ status: { phase: "error", message } });
      return false;
    }
  }

  /** Save the current result into compare slot 0 or 1 (no recomputation). */
  save(slot: 0 | 1): void {
    if (this.state.result === null) return;
    const slots: [ResultSnapshot | null, ResultSnapshot | null] = [...this.state.slots];
    slots[slot] = this.state.result;
    this.set({ slots });
  }

  clearSlot(slot: 0 | 1): void {
    const slots: [ResultSnapshot | null, ResultSnapshot | null] = [...this.state.slots];
    slots[slot] = null;
    this.set({ slots });
  }

  get compareReady(): boolean {
    return this.state.slots[0] !== null && this.state.slots[1] !== null;
  }
}
