/** Chat view state machine. Exactly one stream may be active at a time;
 * delta events append to the visible answer; the final event attaches
 * citations in rank order; an error keeps the partial text and marks the
 * turn so a retry affordance can be offered. */

import type { Citation, ConsultEvent } from "./types.js";

export type TurnStatus = "streaming" | "done" | "error";

export interface Turn {
  question: string;
  answer: string;
  citations: Citation[];
  status: TurnStatus;
  error?: string;
  traceId?: string;
}

export interface SelectedCitation {
  turnIndex: number;
  rank: number;
}

export interface ChatViewState {
  turns: Turn[];
  pendingStream: boolean;
  selectedCitation: SelectedCitation | null;
}

export function initialChatState(): ChatViewState {
  return { turns: [], pendingStream: false, selectedCitation: null };
}

/** Send is enabled only for non-empty input while no stream is active. */
export function canSend(state: ChatViewState, input: string): boolean {
  return input.trim().length > 0 && !state.pendingStream;
}

export function beginTurn(state: ChatViewState, question: string): ChatViewState {
  if (!canSend(state, question)) {
    throw new Error("cannot send: empty input or a stream is already active");
  }
  return {
    turns: [
      ...state.turns,
      { question: question.trim(), answer: "", citations: [], status: "streaming" },
    ],
    pendingStream: true,
    selectedCitation: null,
  };
}

function replaceLast(state: ChatViewState, turn: Turn, pending: boolean): ChatViewState {
  return {
    ...state,
    turns: [...state.turns.slice(0, -1), turn],
    pendingStream: pending,
  };
}

export function applyEvent(state: ChatViewState, event: ConsultEvent): ChatViewState {
  const current = state.turns[state.turns.length - 1];
  if (!current || current.status !== "streaming") {
    throw new Error("no active stream to apply the event to");
  }
  switch (event.type) {
    case "delta":
      return replaceLast(state, { ...current, answer: current.answer + event.text }, true);
    case "final": {
      const citations = [...event.citations].sort((a, b) => a.rank - b.rank);
      return replaceLast(
        state,
        { ...current, citations, status: "done", traceId: event.trace_id },
        false,
      );
    }
    case "error":
      return replaceLast(
        state,
        { ...current, status: "error", error: `${event.code}: ${event.message}` },
        false,
      );
  }
}

export function selectCitation(
  state: ChatViewState,
  turnIndex: number,
  rank: number,
): ChatViewState {
  const turn = state.turns[turnIndex];
  if (!turn || !turn.citations.some((c) => c.rank === rank)) {
    return { ...state, selectedCitation: null };
  }
  return { ...state, selectedCitation: { turnIndex, rank } };
}

export function selectedCitationDetail(state: ChatViewState): Citation | null {
  const selection = state.selectedCitation;
  if (!selection) return null;
  const turn = state.turns[selection.turnIndex];
  return turn?.citations.find((c) => c.rank === selection.rank) ?? null;
}

/** The question of the most recent errored turn, for the retry affordance. */
export function retryableQuestion(state: ChatViewState): string | null {
  const last = state.turns[state.turns.length - 1];
  return last && last.status === "error" ? last.question : null;
}
