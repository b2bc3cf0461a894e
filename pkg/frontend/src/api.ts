/**
 * Typed client for the tutor HTTP API.
 *
 * Payload shapes mirror the server's domain types field for field; this
 * module is the only place the wire contract appears, so the rest of the
 * UI works with these interfaces alone.
 */

export type Mode = "FC" | "BC";
export type Phase = "Pretest" | "Training" | "Posttest" | "Done";

export interface SessionInfo {
  session_id: string;
  student_id: string;
  phase: Phase;
  condition: string;
  problem_cursor: number;
  group_label: string | null;
}

export interface NodeView {
  formula: string;
  rule_name: string;
  parent_refs: string[];
  action_index: number;
}

export interface ProblemView {
  session_id: string;
  phase: Phase;
  condition: string;
  problem_id: string;
  level: number | null;
  ordinal: number | null;
  mode: Mode;
  givens: string[];
  conclusion: string;
  target: string;
  nodes: NodeView[];
  action_count: number;
  rejected_attempts: number;
  completed: boolean;
  worked_example: boolean;
  we_steps_total: number;
  we_steps_revealed: number;
  we_commentary: string | null;
  prompt_pending: boolean;
}

export interface EventRecord {
  seq: number;
  timestamp_ms: number;
  session_id: string;
  problem_id: string | null;
  event_type: string;
  payload: Record<string, unknown>;
}

export interface StepOutcome {
  accepted: boolean;
  completed: boolean;
}

export interface SwitchOutcome {
  mode: Mode;
  target: string;
}

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

/** Minimal request abstraction so tests can swap in an in-memory server. */
export interface Transport {
  request(method: "GET" | "POST", path: string, body?: unknown): Promise<unknown>;
}

export class HttpTransport implements Transport {
  constructor(private readonly baseUrl: string) {}

  async request(method: "GET" | "POST", path: string, body?: unknown): Promise<unknown> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      const error = payload as { code?: string; message?: string };
      throw new ApiError(error.code ?? "http-error", error.message ?? response.statusText);
    }
    return payload;
  }
}

export class ApiClient {
  constructor(private readonly transport: Transport) {}

  createSession(studentId: string): Promise<SessionInfo> {
    return this.transport.request("POST", "/sessions", {
      student_id: studentId,
    }) as Promise<SessionInfo>;
  }

  getProblem(sessionId: string): Promise<ProblemView> {
    return this.transport.request("GET", `/sessions/${sessionId}/problem`) as Promise<ProblemView>;
  }

  submitStep(sessionId: string, ruleName: string, parentRefs: string[]): Promise<StepOutcome> {
    return this.transport.request("POST", `/sessions/${sessionId}/steps`, {
      rule_name: ruleName,
      parent_refs: parentRefs,
    }) as Promise<StepOutcome>;
  }

  switchStrategy(sessionId: string): Promise<SwitchOutcome> {
    return this.transport.request("POST", `/sessions/${sessionId}/switch`) as Promise<SwitchOutcome>;
  }

  advance(sessionId: string): Promise<Record<string, unknown>> {
    return this.transport.request("POST", `/sessions/${sessionId}/advance`) as Promise<
      Record<string, unknown>
    >;
  }

  getEvents(sessionId: string, since: number): Promise<EventRecord[]> {
    return this.transport.request("GET", `/sessions/${sessionId}/events?since=${since}`) as Promise<
      EventRecord[]
    >;
  }
}

/** Rule identifiers and premise counts; must match the engine's catalog. */
export const RULES: ReadonlyArray<{ name: string; arity: number; label: string }> = [
  { name: "MP", arity: 2, label: "Modus Ponens" },
  { name: "MT", arity: 2, label: "Modus Tollens" },
  { name: "DS", arity: 2, label: "Disjunctive Syllogism" },
  { name: "HS", arity: 2, label: "Hypothetical Syllogism" },
  { name: "SIMP_L", arity: 1, label: "Simplification (left)" },
  { name: "SIMP_R", arity: 1, label: "Simplification (right)" },
  { name: "CONJ", arity: 2, label: "Conjunction" },
  { name: "ADD", arity: 2, label: "Addition" },
  { name: "CD", arity: 2, label: "Constructive Dilemma" },
  { name: "DN_I", arity: 1, label: "Double Negation (intro)" },
  { name: "DN_E", arity: 1, label: "Double Negation (elim)" },
  { name: "DEM", arity: 1, label: "De Morgan" },
  { name: "IMPL", arity: 1, label: "Material Implication" },
  { name: "TRANS", arity: 1, label: "Transposition" },
  { name: "BICOND", arity: 1, label: "Biconditional Exchange" },
  { name: "CONTRA", arity: 2, label: "Contradiction" },
];
