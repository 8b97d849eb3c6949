/** UI state and the pure transition rules the components drive. */

import type { ExplanationPayload, SearchResult } from './types.js';

export interface UiState {
  query: string;
  ranker: string;
  converter: string;
  k: number;
  nWords: number;
  results: SearchResult[];
  /** doc_ids in selection order; never more than two. */
  selectedPair: string[];
  activeExplanation: ExplanationPayload | null;
  activeError: string | null;
  lastSeed: number | null;
}

export function initialState(): UiState {
  return {
    query: '',
    ranker: 'bm25',
    converter: 'topk',
    k: 10,
    nWords: 8,
    results: [],
    selectedPair: [],
    activeExplanation: null,
    activeError: null,
    lastSeed: null,
  };
}

/**
 * Change the search context. Any change to query, ranker or k invalidates
 * the explanation on display (its thresholds belonged to the old list);
 * a converter change alone keeps the current chart until the next request.
 */
export function setSearchContext(
  state: UiState,
  patch: Partial<Pick<UiState, 'query' | 'ranker' | 'k' | 'converter' | 'nWords'>>,
): UiState {
  const next = { ...state, ...patch };
  const invalidates =
    (patch.query !== undefined && patch.query !== state.query) ||
    (patch.ranker !== undefined && patch.ranker !== state.ranker) ||
    (patch.k !== undefined && patch.k !== state.k);
  if (invalidates) {
    next.activeExplanation = null;
    next.activeError = null;
    next.lastSeed = null;
  }
  return next;
}

export function setResults(state: UiState, results: SearchResult[]): UiState {
  return { ...state, results, selectedPair: [] };
}

/** Toggle a pair checkbox; a third selection evicts the oldest one. */
export function togglePairSelection(state: UiState, docId: string): UiState {
  let selected: string[];
  if (state.selectedPair.includes(docId)) {
    selected = state.selectedPair.filter((id) => id !== docId);
  } else {
    selected = [...state.selectedPair, docId];
    if (selected.length > 2) {
      selected = selected.slice(selected.length - 2);
    }
  }
  return { ...state, selectedPair: selected };
}

export type ExplainAction =
  | { kind: 'pair'; docA: string; docB: string }
  | { kind: 'single'; docId: string }
  | { kind: 'hint'; message: string };

/**
 * Resolve what an Explain click on `docId` should do.
 *
 * Two boxes ticked and the clicked card among them: a pair request, with
 * the higher-ranked selection as doc_a (the user never has to know the
 * order). A click on an unticked card is always a plain single-document
 * explanation. A click on the only ticked card is an incomplete pair:
 * hint, no request.
 */
export function explainAction(state: UiState, docId: string): ExplainAction {
  const selected = state.selectedPair;
  if (selected.length === 2 && selected.includes(docId)) {
    const byRank = [...selected].sort(
      (a, b) => rankOf(state.results, a) - rankOf(state.results, b),
    );
    return { kind: 'pair', docA: byRank[0], docB: byRank[1] };
  }
  if (selected.length === 1 && selected[0] === docId) {
    return {
      kind: 'hint',
      message: 'select a second result to compare, or untick this one',
    };
  }
  return { kind: 'single', docId };
}

function rankOf(results: SearchResult[], docId: string): number {
  const hit = results.find((r) => r.doc_id === docId);
  return hit ? hit.rank : Number.MAX_SAFE_INTEGER;
}

export function showExplanation(state: UiState, payload: ExplanationPayload): UiState {
  return {
    ...state,
    activeExplanation: payload,
    activeError: null,
    lastSeed: payload.seed,
  };
}

export function showError(state: UiState, message: string): UiState {
  return { ...state, activeExplanation: null, activeError: message };
}
