// Login flow: fetch a one-shot challenge, step through the probes one at
// a time collecting a single masked letter each, submit once, render the
// verdict. A challenge is never re-fetched on navigation — an expired or
// consumed challenge sends the flow back to a clean restart. Letters are
// cleared the moment the verification request resolves.

import { ApiError, AuthApi, ChallengeBody, VerifyBody } from "./api.js";

export type LoginPhase =
  | "idle"
  | "answering"
  | "submitting"
  | "verdict"
  | "expired"
  | "locked"
  | "error";

export class LoginFlow {
  phase: LoginPhase = "idle";
  challenge: ChallengeBody | null = null;
  index = 0;
  private letters: string[] = [];
  verdict: VerifyBody | null = null;
  deniedUntil: number | null = null;
  errorMessage = "";

  constructor(
    private readonly api: AuthApi,
    readonly accountId: string,
    /** Study mode allows revisiting a probe before submission. */
    readonly allowProbeRetry = false,
  ) {}

  get probeCount(): number {
    return this.challenge?.probes.length ?? 0;
  }

  get currentProbe() {
    if (!this.challenge || this.index >= this.probeCount) return null;
    return this.challenge.probes[this.index];
  }

  /** Prompt text for the probe being answered. */
  promptFor(index: number): string {
    const probe = this.challenge?.probes[index];
    if (!probe) return "";
    return `Enter the letter at position ${probe.position} of your answer to: ${probe.question_text}`;
  }

  get complete(): boolean {
    return (
      this.probeCount > 0 &&
      this.letters.length === this.probeCount &&
      this.letters.every((l) => l.length === 1)
    );
  }

  async start(): Promise<void> {
    this.verdict = null;
    this.letters = [];
    this.index = 0;
    this.challenge = null;
    try {
      this.challenge = await this.api.requestChallenge(this.accountId);
      this.phase = "answering";
    } catch (error) {
      this.handleError(error);
    }
  }

  /** Record one letter and auto-advance to the next probe. */
  enterLetter(letter: string): boolean {
    if (this.phase !== "answering" || !this.challenge) return false;
    const trimmed = letter.trim();
    if (trimmed.length !== 1 || !/[a-zA-Z]/.test(trimmed)) return false;
    if (this.index >= this.probeCount) return false;
    this.letters[this.index] = trimmed;
    this.index += 1;
    return true;
  }

  /** Step back to re-enter a probe's letter (study-mode affordance). */
  retryProbe(index: number): boolean {
    if (!this.allowProbeRetry || this.phase !== "answering") return false;
    if (index < 0 || index >= this.probeCount || index >= this.letters.length) return false;
    this.letters.length = index;
    this.index = index;
    return true;
  }

  async submit(): Promise<void> {
    if (!this.complete || !this.challenge || this.phase !== "answering") return;
    this.phase = "submitting";
    const letters = this.letters;
    this.letters = []; // letters never outlive the in-flight request
    try {
      this.verdict = await this.api.verify(this.accountId, this.challenge.challenge_id, letters);
      this.phase = "verdict";
      this.challenge = null;
    } catch (error) {
      this.challenge = null;
      this.handleError(error);
    }
  }

  /** From a terminal state, begin a fresh login with a new challenge. */
  async restart(): Promise<void> {
    if (this.phase === "answering" || this.phase === "submitting") return;
    await this.start();
  }

  private handleError(error: unknown): void {
    if (error instanceof ApiError) {
      if (error.isExpiredChallenge) {
        this.phase = "expired";
        return;
      }
      if (error.isLockedOut) {
        this.phase = "locked";
        this.deniedUntil = error.deniedUntil ?? null;
        return;
      }
      this.phase = "error";
      this.errorMessage = `${error.code}: ${error.message}`;
      return;
    }
    this.phase = "error";
    this.errorMessage = String(error);
  }
}
