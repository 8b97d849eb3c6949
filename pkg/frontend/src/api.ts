/** Thin fetch client for the service; all semantics live server-side. */

import type {
  ErrorBody,
  ExplanationPayload,
  MetaPayload,
  SearchResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

async function parse<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let body: ErrorBody | null = null;
  try {
    body = (await response.json()) as ErrorBody;
  } catch {
    /* non-JSON error body */
  }
  if (body && body.error) {
    throw new ApiError(body.error.code, body.error.message, response.status);
  }
  throw new ApiError('http_error', `request failed with ${response.status}`, response.status);
}

export interface ExplainRequest {
  q: string;
  doc_id: string;
  ranker: string;
  converter: string;
  k: number;
  n_words: number;
  seed?: number;
}

export interface ExplainPairRequest {
  q: string;
  doc_a_id: string;
  doc_b_id: string;
  ranker: string;
  k: number;
  n_words: number;
  seed?: number;
}

export interface IntentRequest {
  q: string;
  ranker: string;
  converter: string;
  k: number;
  n_words: number;
  seed?: number;
}

export class ApiClient {
  constructor(private readonly base: string = '') {}

  async meta(): Promise<MetaPayload> {
    return parse(await fetch(`${this.base}/meta`));
  }

  async search(q: string, ranker: string, k: number): Promise<SearchResponse> {
    const params = new URLSearchParams({ q, ranker, k: String(k) });
    return parse(await fetch(`${this.base}/search?${params}`));
  }

  async explain(request: ExplainRequest, signal?: AbortSignal): Promise<ExplanationPayload> {
    return this.post('/explain', request, signal);
  }

  async explainPair(
    request: ExplainPairRequest,
    signal?: AbortSignal,
  ): Promise<ExplanationPayload> {
    return this.post('/explain_pair', request, signal);
  }

  async intent(request: IntentRequest, signal?: AbortSignal): Promise<ExplanationPayload> {
    return this.post('/intent', request, signal);
  }

  private async post<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
    const response = await fetch(`${this.base}${path}`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
      signal,
    });
    return parse(response);
  }
}

/**
 * Keeps a single explanation request in flight: starting a new one aborts
 * the previous, and a response whose ticket is stale is dropped instead of
 * rendered.
 */
export class LatestOnly {
  private ticket = 0;
  private controller: AbortController | null = null;

  async run<T>(task: (signal: AbortSignal) => Promise<T>): Promise<T | null> {
    this.controller?.abort();
    this.controller = new AbortController();
    const myTicket = ++this.ticket;
    try {
      const value = await task(this.controller.signal);
      return myTicket === this.ticket ? value : null;
    } catch (error) {
      if (myTicket !== this.ticket) {
        return null; // superseded; swallow the stale failure
      }
      throw error;
    }
  }
}
