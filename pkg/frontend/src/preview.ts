/**
 * Debounced preview requests: at most one request in flight plus one queued
 * coalesced state; responses that were superseded by a newer request are
 * dropped on arrival.
 */

export interface PreviewHandlers<R> {
  onResult(result: R): void;
  onError(error: unknown): void;
}

export class PreviewScheduler<R> {
  private pending: string | null = null;
  private queued: string | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = false;
  private sequence = 0;
  private applied = 0;
  private sent = 0;

  constructor(
    private readonly send: (pipeline: string) => Promise<R>,
    private readonly handlers: PreviewHandlers<R>,
    private readonly debounceMs: number,
  ) {}

  /** Total requests actually dispatched (drag tests assert the bound). */
  get requestCount(): number {
    return this.sent;
  }

  request(pipeline: string): void {
    this.pending = pipeline;
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.timer = setTimeout(() => {
      this.timer = null;
      this.fire();
    }, this.debounceMs);
  }

  dispose(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.pending = null;
    this.queued = null;
  }

  private fire(): void {
    if (this.pending === null) return;
    if (this.inFlight) {
      this.queued = this.pending; // coalesce: only the newest state matters
      this.pending = null;
      return;
    }
    const pipeline = this.pending;
    this.pending = null;
    void this.dispatch(pipeline);
  }

  private async dispatch(pipeline: string): Promise<void> {
    const seq = ++this.sequence;
    this.inFlight = true;
    this.sent += 1;
    try {
      const result = await this.send(pipeline);
      if (seq > this.applied) {
        this.applied = seq;
        this.handlers.onResult(result);
      }
    } catch (err) {
      if (seq > this.applied) {
        this.handlers.onError(err); // previous preview stays on screen
      }
    } finally {
      this.inFlight = false;
      if (this.queued !== null) {
        const next = this.queued;
        this.queued = null;
        void this.dispatch(next);
      }
    }
  }
}
