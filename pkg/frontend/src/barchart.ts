/**
 * Signed horizontal bar chart for explanation payloads.
 *
 * Green bars mark terms pushing toward the relevant class, red bars the
 * irrelevant class; entries arrive pre-sorted by |weight| and are drawn
 * top-down in that order. All numbers shown come verbatim from the
 * payload, so re-rendering the same payload yields identical DOM.
 */

import type { ExplanationPayload } from './types.js';

export const RELEVANT_COLOR = '#2e9e4f';
export const IRRELEVANT_COLOR = '#cc3333';

const SVG_NS = 'http://www.w3.org/2000/svg';
const WIDTH = 460;
const ROW_HEIGHT = 26;
const LABEL_WIDTH = 130;
const VALUE_WIDTH = 90;

export interface ChartOptions {
  title?: string;
}

export function renderExplanation(
  payload: ExplanationPayload,
  options: ChartOptions = {},
): HTMLElement {
  const panel = document.createElement('div');
  panel.className = 'explanation-panel';

  const heading = document.createElement('h3');
  heading.textContent = options.title ?? defaultTitle(payload);
  panel.appendChild(heading);

  panel.appendChild(buildChart(payload));
  panel.appendChild(buildProvenance(payload));
  return panel;
}

export function renderExplanationError(message: string): HTMLElement {
  const panel = document.createElement('div');
  panel.className = 'explanation-panel explanation-error';
  const text = document.createElement('p');
  text.className = 'error-message';
  text.textContent = message;
  panel.appendChild(text);
  return panel;
}

function defaultTitle(payload: ExplanationPayload): string {
  if (payload.doc_id !== undefined) {
    return `why ${payload.doc_id} for “${payload.query}”`;
  }
  return `intent of “${payload.query}”`;
}

function buildChart(payload: ExplanationPayload): SVGSVGElement {
  const entries = payload.entries;
  const maxAbs = entries.reduce((acc, e) => Math.max(acc, Math.abs(e.weight)), 0) || 1;
  const barSpace = WIDTH - LABEL_WIDTH - VALUE_WIDTH;

  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('class', 'explanation-chart');
  svg.setAttribute('width', String(WIDTH));
  svg.setAttribute('height', String(entries.length * ROW_HEIGHT));
  svg.setAttribute('role', 'img');

  entries.forEach((entry, row) => {
    const group = document.createElementNS(SVG_NS, 'g');
    const y = row * ROW_HEIGHT;

    const label = document.createElementNS(SVG_NS, 'text');
    label.setAttribute('class', 'term-label');
    label.setAttribute('x', String(LABEL_WIDTH - 8));
    label.setAttribute('y', String(y + ROW_HEIGHT / 2 + 4));
    label.setAttribute('text-anchor', 'end');
    label.textContent = entry.term;
    group.appendChild(label);

    const relevant = entry.weight > 0;
    const bar = document.createElementNS(SVG_NS, 'rect');
    bar.setAttribute('class', relevant ? 'bar relevant' : 'bar irrelevant');
    bar.setAttribute('fill', relevant ? RELEVANT_COLOR : IRRELEVANT_COLOR);
    const length = Math.max(1, Math.round((Math.abs(entry.weight) / maxAbs) * barSpace));
    bar.setAttribute('x', String(LABEL_WIDTH));
    bar.setAttribute('y', String(y + 5));
    bar.setAttribute('width', String(length));
    bar.setAttribute('height', String(ROW_HEIGHT - 10));
    group.appendChild(bar);

    const value = document.createElementNS(SVG_NS, 'text');
    value.setAttribute('class', relevant ? 'weight relevant' : 'weight irrelevant');
    value.setAttribute('x', String(LABEL_WIDTH + length + 6));
    value.setAttribute('y', String(y + ROW_HEIGHT / 2 + 4));
    value.textContent = String(entry.weight);
    group.appendChild(value);

    svg.appendChild(group);
  });
  return svg;
}

function buildProvenance(payload: ExplanationPayload): HTMLElement {
  const footer = document.createElement('div');
  footer.className = 'provenance';
  const bits = [`seed ${payload.seed}`, `converter ${payload.converter}`];
  if (payload.fit_r2 !== undefined) {
    bits.push(`fit_r2 ${payload.fit_r2}`);
  }
  if (payload.docs_aggregated !== undefined) {
    bits.push(`${payload.docs_aggregated} docs aggregated`);
  }
  footer.textContent = bits.join(' · ');
  return footer;
}
