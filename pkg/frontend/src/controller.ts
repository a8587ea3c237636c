import { ApiClient, ApiError } from "./api.js";
import { applyResponse, initialState, toggleCluster, type ViewState } from "./state.js";
import {
  renderDocDetail,
  renderError,
  renderInfo,
  renderResults,
  type Handlers,
} from "./render.js";
import type { Mode } from "./types.js";

/** Wires state, API client, and rendering; at most one in-flight search. */
export class SearchController {
  readonly state: ViewState = initialState();
  private inflight: AbortController | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly resultsEl: HTMLElement,
    private readonly statusEl: HTMLElement,
  ) {}

  private handlers: Handlers = {
    onOpenDoc: (docId) => void this.openDocument(docId),
    onToggleCluster: (conceptId) => {
      toggleCluster(this.state, conceptId);
      this.renderList();
    },
  };

  private setStatus(node: HTMLElement | null): void {
    this.statusEl.replaceChildren(...(node ? [node] : []));
  }

  private renderList(): void {
    if (!this.state.lastResponse) {
      this.resultsEl.replaceChildren();
      return;
    }
    this.resultsEl.replaceChildren(
      renderResults(this.state.lastResponse, this.state.expandedClusters, this.handlers),
    );
  }

  /** Submit a query; empty text never issues a request. */
  async submit(text: string): Promise<void> {
    if (!text.trim()) {
      this.setStatus(renderInfo("Enter a query first."));
      return;
    }
    this.state.queryText = text;
    await this.runSearch();
  }

  /** Switch view mode; re-queries once when a query is present. */
  async setMode(mode: Mode): Promise<void> {
    if (mode === this.state.mode) return;
    this.state.mode = mode;
    if (this.state.queryText.trim()) await this.runSearch();
  }

  private async runSearch(): Promise<void> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const response = await this.api.search(
        this.state.queryText,
        this.state.mode,
        this.state.params,
        controller.signal,
      );
      if (controller.signal.aborted) return;
      applyResponse(this.state, response);
      this.setStatus(null);
      this.renderList();
    } catch (err) {
      if (controller.signal.aborted) return; // superseded by a newer request
      if (err instanceof ApiError) {
        this.setStatus(renderError(err.message));
      } else {
        this.setStatus(renderError("Search service unreachable."));
      }
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  /** Fetch and show one document; the result list stays recoverable. */
  async openDocument(docId: string): Promise<void> {
    try {
      const doc = await this.api.getDoc(docId);
      this.setStatus(null);
      this.resultsEl.replaceChildren(renderDocDetail(doc, () => this.backToResults()));
    } catch (err) {
      // Stale ids (e.g. after an index reload) leave the list view intact.
      const message =
        err instanceof ApiError && err.status === 404
          ? `Document ${docId} not found.`
          : "Could not load the document.";
      this.setStatus(renderError(message));
    }
  }

  backToResults(): void {
    this.setStatus(null);
    this.renderList();
  }
}
