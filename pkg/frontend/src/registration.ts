// Registration flow: pick exactly `enrollCount` questions, enter each
// answer twice (fields are masked by the view layer), submit, and map any
// per-question violations back onto the form. Entered answers live only
// until the submission that enrolls them succeeds.

import { ApiError, AuthApi, Violation } from "./api.js";
import { BankQuestion } from "./bank.js";

export type RegistrationPhase = "picking" | "answering" | "submitting" | "done";

export interface AnswerEntry {
  answer: string;
  confirmation: string;
}

export class RegistrationFlow {
  phase: RegistrationPhase = "picking";
  readonly selected: string[] = [];
  private readonly entries = new Map<string, AnswerEntry>();
  violations: Violation[] = [];
  enrolledQuestionIds: string[] = [];
  submitError = "";

  constructor(
    readonly questions: BankQuestion[],
    readonly enrollCount: number,
  ) {}

  isSelected(questionId: string): boolean {
    return this.selected.includes(questionId);
  }

  /** Toggle a question; selection is capped at enrollCount. */
  toggle(questionId: string): void {
    if (this.phase !== "picking") return;
    const index = this.selected.indexOf(questionId);
    if (index >= 0) {
      this.selected.splice(index, 1);
      this.entries.delete(questionId);
      return;
    }
    if (this.selected.length >= this.enrollCount) return;
    if (!this.questions.some((q) => q.id === questionId)) return;
    this.selected.push(questionId);
  }

  get selectionComplete(): boolean {
    return this.selected.length === this.enrollCount;
  }

  beginAnswering(): void {
    if (this.selectionComplete && this.phase === "picking") {
      this.phase = "answering";
    }
  }

  backToPicking(): void {
    if (this.phase === "answering") this.phase = "picking";
  }

  setEntry(questionId: string, answer: string, confirmation: string): void {
    if (!this.isSelected(questionId)) return;
    this.entries.set(questionId, { answer, confirmation });
  }

  getEntry(questionId: string): AnswerEntry {
    return this.entries.get(questionId) ?? { answer: "", confirmation: "" };
  }

  /** Submit is enabled only with a full selection and no empty fields. */
  get canSubmit(): boolean {
    return (
      this.phase === "answering" &&
      this.selectionComplete &&
      this.selected.every((qid) => {
        const entry = this.entries.get(qid);
        return !!entry && entry.answer.length > 0 && entry.confirmation.length > 0;
      })
    );
  }

  violationsFor(questionId: string): Violation[] {
    return this.violations.filter((v) => v.question_id === questionId);
  }

  get generalViolations(): Violation[] {
    return this.violations.filter((v) => v.question_id === null);
  }

  async submit(api: AuthApi, accountId: string): Promise<boolean> {
    if (!this.canSubmit) return false;
    this.phase = "submitting";
    this.violations = [];
    this.submitError = "";
    const payload = this.selected.map((qid) => {
      const entry = this.entries.get(qid)!;
      return { question_id: qid, answer: entry.answer, confirmation: entry.confirmation };
    });
    try {
      this.enrolledQuestionIds = await api.register(accountId, payload);
      this.phase = "done";
      this.entries.clear(); // answers never outlive the request that enrolled them
      return true;
    } catch (error) {
      this.phase = "answering";
      if (error instanceof ApiError && error.violations.length > 0) {
        this.violations = error.violations;
      } else if (error instanceof ApiError) {
        this.submitError = `${error.code}: ${error.message}`;
      } else {
        this.submitError = String(error);
      }
      return false;
    }
  }
}
