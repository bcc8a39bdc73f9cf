// DOM-free rater session state machine.
//
// All state of record lives on the server; this object only tracks the
// current assignment, the playback gate, and progress counters, so a page
// refresh costs nothing beyond re-fetching the open assignment.

import { AnnotationApi, ApiError, Choice, PairAssignment } from "./api.js";

export type SessionState =
  | { kind: "idle" }
  | { kind: "loading" }
  | { kind: "judging"; pair: PairAssignment }
  | { kind: "submitting"; pair: PairAssignment }
  | { kind: "error"; message: string; pair: PairAssignment | null }
  | { kind: "done" };

export interface SessionNotice {
  kind: "skip" | "info";
  message: string;
}

export class RaterSession {
  state: SessionState = { kind: "idle" };
  judged = 0;
  available: number | null = null;
  audioStarted = false;
  lastNotice: SessionNotice | null = null;
  onChange: (() => void) | null = null;

  constructor(
    private readonly api: AnnotationApi,
    readonly raterId: string,
  ) {}

  private update(state: SessionState): void {
    this.state = state;
    if (this.onChange) this.onChange();
  }

  /** Fetch the pool size and the first pair. */
  async start(): Promise<void> {
    try {
      const stats = await this.api.stats();
      this.available = stats.pairs_total;
    } catch {
      this.available = null; // progress shows judged count only
    }
    await this.loadNext();
  }

  async loadNext(): Promise<void> {
    this.audioStarted = false;
    this.update({ kind: "loading" });
    try {
      const pair = await this.api.nextPair(this.raterId);
      this.update(pair === null ? { kind: "done" } : { kind: "judging", pair });
    } catch (err) {
      this.update({ kind: "error", message: describe(err), pair: null });
    }
  }

  /** Called when the audio element first starts playing. */
  markAudioStarted(): void {
    if (this.state.kind === "judging" && !this.audioStarted) {
      this.audioStarted = true;
      if (this.onChange) this.onChange();
    }
  }

  /** Submitting is gated on playback having started at least once. */
  canSubmit(): boolean {
    return this.state.kind === "judging" && this.audioStarted;
  }

  async submit(choice: Choice): Promise<void> {
    if (!this.canSubmit() || this.state.kind !== "judging") return;
    const pair = this.state.pair;
    this.update({ kind: "submitting", pair });
    try {
      await this.api.submitJudgment(pair.pair_id, this.raterId, choice);
      this.judged += 1;
      this.lastNotice = null;
      await this.loadNext();
    } catch (err) {
      if (err instanceof ApiError && (err.status === 409 || err.status === 410)) {
        // judged elsewhere or the pair filled up: skip forward, nothing lost
        this.lastNotice = {
          kind: "skip",
          message:
            err.status === 410
              ? "That pair just received its final judgment from other raters; skipping it."
              : "That pair was already judged in another session; skipping it.",
        };
        await this.loadNext();
      } else {
        // network trouble: keep the pair so the rater can retry in place
        this.update({ kind: "error", message: describe(err), pair });
      }
    }
  }

  /** Leave the error banner, back to the kept pair or a fresh fetch. */
  async retry(): Promise<void> {
    if (this.state.kind !== "error") return;
    const pair = this.state.pair;
    if (pair !== null) {
      this.update({ kind: "judging", pair }); // audioStarted survives
    } else {
      await this.loadNext();
    }
  }

  progressLabel(): string {
    return this.available === null
      ? `${this.judged} judged`
      : `${this.judged} / ${this.available} judged`;
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.status}: ${err.message}`;
  if (err instanceof Error) return err.message;
  return String(err);
}
