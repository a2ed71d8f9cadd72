/**
 * UI state machine for the question/answer loop.
 *
 * Phases move strictly forward through one round:
 *
 *   entering-question -> showing-formula -> entering-values -> showing-result
 *
 * with error as the off-ramp for transport failures and for questions
 * the service could not answer. Every transition is a pure function
 * from state to state; the only way to reach showing-result is
 * computeResolved() with an ok calculate response, so no result can
 * ever be shown that did not come from the API.
 */

import type {
  AnswerPayload,
  CalculateOk,
  CalculateResponse,
  IdentifierInfo,
  Lang,
} from "./api.js";
import { solveNote } from "./typeset.js";

export type Phase =
  | "entering-question"
  | "showing-formula"
  | "entering-values"
  | "showing-result"
  | "error";

export interface UiState {
  phase: Phase;
  lang: Lang;
  question: string;
  payload: AnswerPayload | null;
  drafts: Record<string, string>;
  result: CalculateOk | null;
  notice: string | null;
  pending: "ask" | "compute" | null;
}

export class StateError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "StateError";
  }
}

export function initialState(): UiState {
  return {
    phase: "entering-question",
    lang: "en",
    question: "",
    payload: null,
    drafts: {},
    result: null,
    notice: null,
    pending: null,
  };
}

export function setLang(state: UiState, lang: Lang): UiState {
  return { ...state, lang };
}

export function setQuestion(state: UiState, question: string): UiState {
  return { ...state, question };
}

/** Identifier rows that need a user-supplied value. */
export function editableIdentifiers(payload: AnswerPayload): IdentifierInfo[] {
  const note = solveNote(payload);
  return payload.identifiers.filter(
    (ident) => ident.known_value === null && ident.symbol !== note?.symbol,
  );
}

export function askStarted(state: UiState): UiState {
  if (state.pending !== null) throw new StateError("a request is already in flight");
  if (!state.question.trim()) throw new StateError("question text is empty");
  return { ...state, pending: "ask", notice: null };
}

export function askResolved(state: UiState, payload: AnswerPayload): UiState {
  if (state.pending !== "ask") throw new StateError("no question in flight");
  const base = { ...state, pending: null, result: null, drafts: {} };
  if (payload.status === "ok" || payload.status === "needs-values") {
    return { ...base, payload, phase: "showing-formula", notice: null };
  }
  return {
    ...base,
    payload,
    phase: "error",
    notice: payload.message ?? "the question could not be answered",
  };
}

export function askFailed(state: UiState, message: string): UiState {
  if (state.pending !== "ask") throw new StateError("no question in flight");
  return { ...state, pending: null, phase: "error", notice: message };
}

/** Arm the value form. Only legal once an answerable payload is shown. */
export function startValueEntry(state: UiState): UiState {
  const status = state.payload?.status;
  if (state.phase !== "showing-formula" || (status !== "ok" && status !== "needs-values")) {
    throw new StateError("value entry needs an answered question");
  }
  return { ...state, phase: "entering-values" };
}

export function setDraft(state: UiState, symbol: string, text: string): UiState {
  if (state.phase !== "entering-values") {
    throw new StateError("not entering values");
  }
  if (!state.payload || !editableIdentifiers(state.payload).some((i) => i.symbol === symbol)) {
    throw new StateError(`no editable field for '${symbol}'`);
  }
  return { ...state, drafts: { ...state.drafts, [symbol]: text } };
}

function numericDraft(text: string | undefined): boolean {
  if (text === undefined) return false;
  const trimmed = text.trim();
  return trimmed !== "" && Number.isFinite(Number(trimmed));
}

export function computeEnabled(state: UiState): boolean {
  if (state.phase !== "entering-values" || state.pending !== null || !state.payload) return false;
  return editableIdentifiers(state.payload).every((ident) =>
    numericDraft(state.drafts[ident.symbol]),
  );
}

/** Numeric bindings for the calculate call, one per editable field. */
export function bindings(state: UiState): Record<string, number> {
  if (!state.payload) return {};
  const out: Record<string, number> = {};
  for (const ident of editableIdentifiers(state.payload)) {
    const text = state.drafts[ident.symbol];
    if (numericDraft(text)) out[ident.symbol] = Number((text as string).trim());
  }
  return out;
}

export function computeStarted(state: UiState): UiState {
  if (!computeEnabled(state)) {
    throw new StateError("compute is not available");
  }
  return { ...state, pending: "compute", notice: null };
}

export function computeResolved(state: UiState, resp: CalculateResponse): UiState {
  if (state.pending !== "compute") throw new StateError("no computation in flight");
  const base = { ...state, pending: null };
  if (resp.status === "ok") {
    return { ...base, phase: "showing-result", result: resp, notice: null };
  }
  return { ...base, phase: "entering-values", notice: resp.message };
}

export function computeFailed(state: UiState, message: string): UiState {
  if (state.pending !== "compute") throw new StateError("no computation in flight");
  return { ...state, pending: null, phase: "error", notice: message };
}

/** Back from the result to the value form, keeping the formula. */
export function editValues(state: UiState): UiState {
  if (state.phase !== "showing-result") throw new StateError("no result on display");
  return { ...state, phase: "entering-values", result: null };
}

/** Start over with a fresh question, keeping the language choice. */
export function newQuestion(state: UiState): UiState {
  return { ...initialState(), lang: state.lang };
}
