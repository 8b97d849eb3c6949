/** Wire types mirroring the service's JSON contracts. */

export interface SearchResult {
  rank: number;
  doc_id: string;
  title: string;
  snippet: string;
  score: number;
}

export interface SearchResponse {
  query: string;
  ranker: string;
  k: number;
  results: SearchResult[];
}

export type EntryClass = 'RELEVANT' | 'IRRELEVANT';

export interface ExplanationEntry {
  term: string;
  weight: number;
  class: EntryClass;
}

/** One schema for single-document, pairwise and intent explanations. */
export interface ExplanationPayload {
  doc_id?: string;
  query: string;
  converter: string;
  fit_r2?: number;
  seed: number;
  docs_aggregated?: number;
  entries: ExplanationEntry[];
}

export interface MetaPayload {
  rankers: string[];
  converters: string[];
  corpus: { doc_count: number };
  defaults: { k: number; converter: string; n_samples: number; pool_size: number };
}

export interface ErrorBody {
  error: { code: string; message: string };
}
