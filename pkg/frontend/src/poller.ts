/**
 * Event polling with sequence-number reconciliation.
 *
 * The server re-evaluates prompt eligibility on every events read, so a
 * client that polls sees a due prompt within one interval.  The ticker is
 * injectable: production uses timers, tests drive polls by hand.
 */

import { ApiClient, EventRecord } from "./api.js";

export type CancelFn = () => void;

export interface Ticker {
  every(intervalMs: number, callback: () => Promise<void> | void): CancelFn;
}

export class IntervalTicker implements Ticker {
  every(intervalMs: number, callback: () => Promise<void> | void): CancelFn {
    const handle = setInterval(() => void callback(), intervalMs);
    return () => clearInterval(handle);
  }
}

/** Test ticker: each `tick()` runs one poll cycle and awaits it. */
export class ManualTicker implements Ticker {
  private callback: (() => Promise<void> | void) | null = null;

  every(_intervalMs: number, callback: () => Promise<void> | void): CancelFn {
    this.callback = callback;
    return () => {
      this.callback = null;
    };
  }

  async tick(): Promise<void> {
    if (this.callback !== null) {
      await this.callback();
    }
  }
}

export class EventPoller {
  private lastSequence = 0;
  private listeners: Array<(record: EventRecord) => void> = [];
  private polling = false;

  constructor(
    private readonly api: ApiClient,
    private readonly sessionId: string,
  ) {}

  onEvent(listener: (record: EventRecord) => void): void {
    this.listeners.push(listener);
  }

  get lastSeq(): number {
    return this.lastSequence;
  }

  async poll(): Promise<void> {
    if (this.polling) {
      return; // one in-flight poll at a time
    }
    this.polling = true;
    try {
      const records = await this.api.getEvents(this.sessionId, this.lastSequence);
      for (const record of records) {
        if (record.seq <= this.lastSequence) {
          continue; // duplicate delivery; reconcile by seq
        }
        this.lastSequence = record.seq;
        for (const listener of this.listeners) {
          listener(record);
        }
      }
    } finally {
      this.polling = false;
    }
  }
}
