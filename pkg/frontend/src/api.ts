// Typed client for the annotation service HTTP API. The captions in a
// PairAssignment are display-ordered by the server; the client never sees
// which side is canonical.

export type Choice = "A" | "B" | "NotSure";

export interface PairAssignment {
  pair_id: string;
  audio_id: string;
  audio_url: string;
  caption_a: string;
  caption_b: string;
}

export interface ServiceStats {
  pairs_total: number;
  pairs_complete: number;
  judgments: number;
  fleiss_kappa: number | null;
  raters_per_pair: number;
}

/** Non-2xx response; `status` lets callers tell conflicts from late rejections. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function errorOf(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: string };
    if (body.detail) detail = body.detail;
  } catch {
    // keep the status text
  }
  return new ApiError(response.status, detail);
}

export class AnnotationApi {
  constructor(private readonly baseUrl: string = "") {}

  /** The next pair for this rater, or null when none are left. */
  async nextPair(raterId: string): Promise<PairAssignment | null> {
    const response = await fetch(
      `${this.baseUrl}/api/pairs/next?rater=${encodeURIComponent(raterId)}`,
    );
    if (response.status === 204) return null;
    if (!response.ok) throw await errorOf(response);
    return (await response.json()) as PairAssignment;
  }

  /** Submit a display-side choice; the server maps it back to canonical sides. */
  async submitJudgment(pairId: string, raterId: string, choice: Choice): Promise<void> {
    const response = await fetch(`${this.baseUrl}/api/judgments`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ pair_id: pairId, rater_id: raterId, choice }),
    });
    if (!response.ok) throw await errorOf(response);
  }

  async stats(): Promise<ServiceStats> {
    const response = await fetch(`${this.baseUrl}/api/stats`);
    if (!response.ok) throw await errorOf(response);
    return (await response.json()) as ServiceStats;
  }

  /** Raw newline-delimited JSON export of canonical judgments. */
  async exportJudgments(): Promise<string> {
    const response = await fetch(`${this.baseUrl}/api/export`);
    if (!response.ok) throw await errorOf(response);
    return response.text();
  }

  audioUrl(assignment: PairAssignment): string {
    return `${this.baseUrl}${assignment.audio_url}`;
  }
}
