import type { RunRecord } from "./types.js";

const TERMINAL = new Set<string>(["Complete", "Failed"]);

export interface PollOptions {
  intervalMs?: number;
  timeoutMs?: number;
  sleep?: (ms: number) => Promise<void>;
  onUpdate?: (record: RunRecord) => void;
}

function defaultSleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/**
 * Poll a run until it reaches a terminal status (Complete / Failed).
 * Throws when the timeout elapses first.
 */
export async function pollRun(fetchRun: () => Promise<RunRecord>, options: PollOptions = {}): Promise<RunRecord> {
  const intervalMs = options.intervalMs ?? 500;
  const timeoutMs = options.timeoutMs ?? 120_000;
  const sleep = options.sleep ?? defaultSleep;
  const started = Date.now();

  for (;;) {
    const record = await fetchRun();
    options.onUpdate?.(record);
    if (TERMINAL.has(record.status)) {
      return record;
    }
    if (Date.now() - started >= timeoutMs) {
      throw new Error(`run ${record.run_id} is still ${record.status} after ${timeoutMs} ms`);
    }
    await sleep(intervalMs);
  }
}
