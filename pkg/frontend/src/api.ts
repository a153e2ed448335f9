// Typed client for the authentication service. Exactly the three
// endpoints the service exposes; no letters of any answer ever come back
// from the server, so responses are safe to render directly.

export interface EnrollmentEntry {
  question_id: string;
  answer: string;
  confirmation: string;
}

export interface Violation {
  rule: string;
  question_id: string | null;
  detail: string;
}

export interface Probe {
  question_id: string;
  question_text: string;
  position: number;
}

export interface ChallengeBody {
  challenge_id: string;
  expires_at: number;
  probes: Probe[];
}

export interface VerifyBody {
  outcome: "success" | "failure";
  attempts_remaining: number;
  per_probe: boolean[] | null;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly violations: Violation[] = [],
    readonly deniedUntil?: number,
  ) {
    super(message);
    this.name = "ApiError";
  }

  get isExpiredChallenge(): boolean {
    return this.status === 410;
  }

  get isLockedOut(): boolean {
    return this.status === 423;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseError(response: Response): Promise<ApiError> {
  let body: Record<string, unknown> = {};
  try {
    body = (await response.json()) as Record<string, unknown>;
  } catch {
    // non-JSON error body; fall through with defaults
  }
  return new ApiError(
    response.status,
    typeof body.error === "string" ? body.error : `HTTP${response.status}`,
    typeof body.message === "string" ? body.message : response.statusText,
    Array.isArray(body.violations) ? (body.violations as Violation[]) : [],
    typeof body.denied_until === "number" ? body.denied_until : undefined,
  );
}

export class AuthApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async post<T>(path: string, payload: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  async register(accountId: string, entries: EnrollmentEntry[]): Promise<string[]> {
    const body = await this.post<{ enrolled_question_ids: string[] }>("/accounts", {
      account_id: accountId,
      answers: entries,
    });
    return body.enrolled_question_ids;
  }

  async requestChallenge(accountId: string): Promise<ChallengeBody> {
    return this.post<ChallengeBody>(`/accounts/${encodeURIComponent(accountId)}/challenges`, {});
  }

  async verify(accountId: string, challengeId: string, letters: string[]): Promise<VerifyBody> {
    return this.post<VerifyBody>(`/accounts/${encodeURIComponent(accountId)}/verify`, {
      challenge_id: challengeId,
      letters,
    });
  }
}
