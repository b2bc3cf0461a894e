/**
 * View state derivation.
 *
 * The client holds no proof logic: everything rendered comes from the
 * latest problem payload plus the event stream.  Events only toggle
 * ephemeral flags (prompt banner, refresh hints); derived lines always
 * re-render from the server's node list.
 */

import { EventRecord, ProblemView } from "./api.js";

export interface ViewState {
  problem: ProblemView | null;
  sessionDone: boolean;
  promptVisible: boolean;
  promptText: string;
  /** Set when an event implies the problem payload is stale. */
  needsRefresh: boolean;
  lastError: string | null;
  selection: string[];
  selectedRule: string;
}

export function initialState(): ViewState {
  return {
    problem: null,
    sessionDone: false,
    promptVisible: false,
    promptText: "",
    needsRefresh: false,
    lastError: null,
    selection: [],
    selectedRule: "MP",
  };
}

export function applyProblem(state: ViewState, problem: ProblemView): ViewState {
  return {
    ...state,
    problem,
    needsRefresh: false,
    selection: [],
  };
}

export function applyEvent(state: ViewState, record: EventRecord): ViewState {
  switch (record.event_type) {
    case "prompt_shown":
      return {
        ...state,
        promptVisible: true,
        promptText: String(record.payload["text"] ?? "Consider switching to backward chaining."),
      };
    case "problem_started":
      // A new problem invalidates any banner from the previous one.
      return { ...state, promptVisible: false, needsRefresh: true };
    case "strategy_switched":
      return { ...state, promptVisible: false, needsRefresh: true };
    case "step_applied":
    case "step_rejected":
    case "we_step_revealed":
    case "problem_completed":
    case "phase_advanced":
      return { ...state, needsRefresh: true };
    case "session_completed":
      return { ...state, sessionDone: true, promptVisible: false };
    default:
      return state;
  }
}

export function dismissPrompt(state: ViewState): ViewState {
  return { ...state, promptVisible: false };
}

export function toggleSelection(state: ViewState, ref: string): ViewState {
  const selection = state.selection.includes(ref)
    ? state.selection.filter((existing) => existing !== ref)
    : [...state.selection, ref];
  return { ...state, selection };
}

/** The switch affordance is live exactly in free FC solving. */
export function switchEnabled(state: ViewState): boolean {
  const problem = state.problem;
  if (problem === null || state.sessionDone) {
    return false;
  }
  return problem.mode === "FC" && !problem.worked_example && !problem.completed;
}

/** Rule application is disabled during demonstrations and after completion. */
export function rulePickerEnabled(state: ViewState): boolean {
  const problem = state.problem;
  if (problem === null || state.sessionDone) {
    return false;
  }
  return !problem.worked_example && !problem.completed;
}
