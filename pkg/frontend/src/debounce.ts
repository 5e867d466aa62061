// Trailing-edge debouncer with injectable timers so tests can fake time.

export type TimerHandle = ReturnType<typeof setTimeout>;

export interface Scheduler {
  set(fn: () => void, ms: number): TimerHandle;
  clear(handle: TimerHandle): void;
}

const realScheduler: Scheduler = {
  set: (fn, ms) => setTimeout(fn, ms),
  clear: (handle) => clearTimeout(handle),
};

export class Debouncer {
  private handle: TimerHandle | null = null;

  constructor(
    private readonly delayMs: number,
    private readonly scheduler: Scheduler = realScheduler,
  ) {}

  schedule(fn: () => void): void {
    this.cancel();
    this.handle = this.scheduler.set(() => {
      this.handle = null;
      fn();
    }, this.delayMs);
  }

  cancel(): void {
    if (this.handle !== null) {
      this.scheduler.clear(this.handle);
      this.handle = null;
    }
  }

  get pending(): boolean {
    return this.handle !== null;
  }
}
