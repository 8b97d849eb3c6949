/** Result-list pane: one card per hit with Explain button and pair checkbox. */

import type { SearchResponse, SearchResult } from './types.js';

export interface ResultHandlers {
  onExplain(docId: string): void;
  onTogglePair(docId: string): void;
}

export function renderResults(
  response: SearchResponse,
  handlers: ResultHandlers,
  selectedPair: string[] = [],
): HTMLElement {
  const pane = document.createElement('div');
  pane.className = 'results-pane';

  if (response.results.length === 0) {
    const empty = document.createElement('p');
    empty.className = 'no-results';
    empty.textContent = 'no results';
    pane.appendChild(empty);
    return pane;
  }

  for (const result of response.results) {
    pane.appendChild(renderCard(result, handlers, selectedPair.includes(result.doc_id)));
  }
  return pane;
}

function renderCard(
  result: SearchResult,
  handlers: ResultHandlers,
  selected: boolean,
): HTMLElement {
  const card = document.createElement('article');
  card.className = 'result-card';
  card.dataset.docId = result.doc_id;

  const header = document.createElement('header');

  const checkbox = document.createElement('input');
  checkbox.type = 'checkbox';
  checkbox.className = 'pair-checkbox';
  checkbox.checked = selected;
  checkbox.title = 'select for pair comparison';
  checkbox.addEventListener('change', () => handlers.onTogglePair(result.doc_id));
  header.appendChild(checkbox);

  const title = document.createElement('h4');
  title.className = 'result-title';
  title.textContent = `${result.rank}. ${result.title}`;
  header.appendChild(title);
  card.appendChild(header);

  const snippet = document.createElement('p');
  snippet.className = 'result-snippet';
  snippet.textContent = result.snippet;
  card.appendChild(snippet);

  const footer = document.createElement('footer');
  const score = document.createElement('span');
  score.className = 'result-score';
  score.textContent = `score ${result.score}`;
  footer.appendChild(score);

  const explain = document.createElement('button');
  explain.className = 'explain-button';
  explain.textContent = 'Explain';
  explain.addEventListener('click', () => handlers.onExplain(result.doc_id));
  footer.appendChild(explain);
  card.appendChild(footer);

  return card;
}

export function renderErrorBanner(message: string): HTMLElement {
  const banner = document.createElement('div');
  banner.className = 'error-banner';
  banner.textContent = message;
  return banner;
}
