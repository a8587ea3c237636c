import type { ClusterResult, Mode, SearchParams, SearchResponse } from "./types.js";
import { defaultParams } from "./types.js";

export interface ViewState {
  queryText: string;
  mode: Mode;
  params: SearchParams;
  lastResponse: SearchResponse | null;
  /** Invariant: subset of the cluster ids present in lastResponse. */
  expandedClusters: Set<string>;
}

export function initialState(): ViewState {
  return {
    queryText: "",
    mode: "documents",
    params: defaultParams(),
    lastResponse: null,
    expandedClusters: new Set(),
  };
}

export function clusterIds(response: SearchResponse | null): Set<string> {
  if (!response || response.mode !== "clusters") return new Set();
  return new Set((response.results as ClusterResult[]).map((c) => c.concept_id));
}

/** Install a response and prune expansion state to clusters that still exist. */
export function applyResponse(state: ViewState, response: SearchResponse): void {
  state.lastResponse = response;
  const present = clusterIds(response);
  for (const id of [...state.expandedClusters]) {
    if (!present.has(id)) state.expandedClusters.delete(id);
  }
}

/** Toggle one cluster; ignores ids not present in the rendered response. */
export function toggleCluster(state: ViewState, conceptId: string): boolean {
  if (!clusterIds(state.lastResponse).has(conceptId)) return false;
  if (state.expandedClusters.has(conceptId)) {
    state.expandedClusters.delete(conceptId);
    return false;
  }
  state.expandedClusters.add(conceptId);
  return true;
}
