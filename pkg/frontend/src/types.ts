/** Payload shapes of the search service JSON API. */

export type Mode = "documents" | "clusters" | "concepts";

export interface DocumentHit {
  doc_id: string;
  rank: number;
  title: string;
  source: string;
  url: string | null;
  snippet: string;
  score: number | null;
}

export interface MemberCell {
  doc_id: string;
  rank: number;
  title: string;
  score?: number | null;
}

export interface ClusterResult {
  concept_id: string;
  concept_name: string;
  size: number;
  representative: MemberCell;
  members: MemberCell[];
}

export interface ConceptResult {
  concept_id: string;
  concept_name: string;
  score: number;
  contributing_docs: MemberCell[];
}

export interface SearchResponse {
  query_echo: string;
  mode: Mode;
  elapsed_ms: number;
  results: DocumentHit[] | ClusterResult[] | ConceptResult[];
}

export interface DocDetail {
  doc_id: string;
  title: string;
  body: string;
  source: string;
  url: string | null;
  tags: string[];
  concept_ids: string[];
}

/** Mirrors the API's query flags; unset lambda/mu fall back to server defaults. */
export interface SearchParams {
  model: "jm" | "dirichlet";
  lambda?: number;
  mu?: number;
  n: number;
  j: number;
  corpus: "all" | "rare";
  by: "text" | "concept";
}

export function defaultParams(): SearchParams {
  return { model: "dirichlet", n: 20, j: 50, corpus: "all", by: "text" };
}
