/** Application wiring: controls, fetch calls, panes. */

import { ApiClient, ApiError, LatestOnly } from './api.js';
import { renderExplanation, renderExplanationError } from './barchart.js';
import { renderErrorBanner, renderResults } from './results.js';
import {
  UiState,
  explainAction,
  initialState,
  setResults,
  setSearchContext,
  showError,
  showExplanation,
  togglePairSelection,
} from './state.js';

const api = new ApiClient('');
const explanationGate = new LatestOnly();
let state: UiState = initialState();

type LastRequest =
  | { kind: 'single'; request: import('./api.js').ExplainRequest }
  | { kind: 'pair'; request: import('./api.js').ExplainPairRequest }
  | { kind: 'intent'; request: import('./api.js').IntentRequest };

let lastRequest: LastRequest | null = null;

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function toast(message: string): void {
  const node = element<HTMLDivElement>('toast');
  node.textContent = message;
  node.classList.add('visible');
  window.setTimeout(() => node.classList.remove('visible'), 2600);
}

function redrawResults(): void {
  const pane = element<HTMLDivElement>('results');
  pane.replaceChildren(
    renderResults(
      { query: state.query, ranker: state.ranker, k: state.k, results: state.results },
      {
        onExplain: (docId) => void runExplain(docId),
        onTogglePair: (docId) => {
          state = togglePairSelection(state, docId);
          redrawResults();
        },
      },
      state.selectedPair,
    ),
  );
}

function redrawExplanation(): void {
  const pane = element<HTMLDivElement>('explanation');
  if (state.activeError) {
    pane.replaceChildren(renderExplanationError(state.activeError));
  } else if (state.activeExplanation) {
    const panel = renderExplanation(state.activeExplanation);
    if (lastRequest !== null && state.lastSeed !== null) {
      panel.appendChild(rerunButton(lastRequest, state.lastSeed));
    }
    pane.replaceChildren(panel);
  } else {
    pane.replaceChildren();
  }
}

/** Re-issue the displayed request with its seed; the chart must not change. */
function rerunButton(last: LastRequest, seed: number): HTMLButtonElement {
  const button = document.createElement('button');
  button.className = 'rerun-button';
  button.textContent = `re-run with seed ${seed}`;
  button.addEventListener('click', () => {
    const seeded: LastRequest =
      last.kind === 'single'
        ? { kind: 'single', request: { ...last.request, seed } }
        : last.kind === 'pair'
          ? { kind: 'pair', request: { ...last.request, seed } }
          : { kind: 'intent', request: { ...last.request, seed } };
    void dispatchExplanation(seeded);
  });
  return button;
}

async function dispatchExplanation(wanted: LastRequest): Promise<void> {
  lastRequest = wanted;
  await renderFromGate(() =>
    explanationGate.run((signal) => {
      if (wanted.kind === 'pair') return api.explainPair(wanted.request, signal);
      if (wanted.kind === 'intent') return api.intent(wanted.request, signal);
      return api.explain(wanted.request, signal);
    }),
  );
}

function readControls(): void {
  state = setSearchContext(state, {
    query: element<HTMLInputElement>('query').value.trim(),
    ranker: element<HTMLSelectElement>('ranker').value,
    converter: element<HTMLSelectElement>('converter').value,
    k: Number(element<HTMLInputElement>('depth').value) || 10,
    nWords: Number(element<HTMLInputElement>('n-words').value) || 8,
  });
}

async function runSearch(): Promise<void> {
  readControls();
  redrawExplanation();
  if (!state.query) {
    toast('enter a query first');
    return;
  }
  try {
    const response = await api.search(state.query, state.ranker, state.k);
    state = setResults(state, response.results);
    redrawResults();
  } catch (error) {
    element<HTMLDivElement>('results').replaceChildren(
      renderErrorBanner(error instanceof ApiError ? error.message : String(error)),
    );
  }
}

async function runExplain(docId: string): Promise<void> {
  readControls();
  const action = explainAction(state, docId);
  if (action.kind === 'hint') {
    toast(action.message);
    return;
  }
  const shared = { q: state.query, ranker: state.ranker, k: state.k, n_words: state.nWords };
  if (action.kind === 'pair') {
    await dispatchExplanation({
      kind: 'pair',
      request: { ...shared, doc_a_id: action.docA, doc_b_id: action.docB },
    });
  } else {
    await dispatchExplanation({
      kind: 'single',
      request: { ...shared, doc_id: action.docId, converter: state.converter },
    });
  }
}

async function runIntent(): Promise<void> {
  readControls();
  if (!state.query) {
    toast('enter a query first');
    return;
  }
  await dispatchExplanation({
    kind: 'intent',
    request: {
      q: state.query,
      ranker: state.ranker,
      converter: state.converter,
      k: state.k,
      n_words: state.nWords,
    },
  });
}

async function renderFromGate(
  task: () => Promise<import('./types.js').ExplanationPayload | null>,
): Promise<void> {
  try {
    const payload = await task();
    if (payload === null) return; // superseded by a newer request
    state = showExplanation(state, payload);
  } catch (error) {
    if (error instanceof DOMException && error.name === 'AbortError') return;
    state = showError(state, error instanceof ApiError ? error.message : String(error));
  }
  redrawExplanation();
}

async function loadMeta(): Promise<void> {
  try {
    const meta = await api.meta();
    const rankerSelect = element<HTMLSelectElement>('ranker');
    rankerSelect.replaceChildren(
      ...meta.rankers.map((name) => new Option(name, name, false, name === 'bm25')),
    );
    const converterSelect = element<HTMLSelectElement>('converter');
    converterSelect.replaceChildren(
      ...meta.converters.map(
        (name) => new Option(name, name, false, name === meta.defaults.converter),
      ),
    );
    element<HTMLInputElement>('depth').value = String(meta.defaults.k);
    element<HTMLSpanElement>('corpus-indicator').textContent =
      `corpus: ${meta.corpus.doc_count} documents`;
  } catch {
    element<HTMLSpanElement>('corpus-indicator').textContent = 'service unreachable';
  }
}

export function bootstrap(): void {
  element<HTMLFormElement>('search-form').addEventListener('submit', (event) => {
    event.preventDefault();
    void runSearch();
  });
  element<HTMLButtonElement>('intent-button').addEventListener('click', () => void runIntent());
  void loadMeta();
}

if (typeof document !== 'undefined' && document.getElementById('search-form')) {
  bootstrap();
}
