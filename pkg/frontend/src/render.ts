/** DOM builders for the three result views and the document detail view.
 *
 * Every list is rendered in the order the API returned it; nothing here
 * sorts or filters.
 */

import type {
  ClusterResult,
  ConceptResult,
  DocDetail,
  DocumentHit,
  MemberCell,
  SearchResponse,
} from "./types.js";

export interface Handlers {
  onOpenDoc: (docId: string) => void;
  onToggleCluster: (conceptId: string) => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function scoreLabel(score: number | null | undefined): string {
  if (score === null || score === undefined) return "";
  return score.toFixed(4);
}

function docButton(member: MemberCell, handlers: Handlers): HTMLButtonElement {
  const button = el("button", "doc-link");
  button.type = "button";
  button.dataset.docId = member.doc_id;
  button.textContent = member.title;
  button.addEventListener("click", () => handlers.onOpenDoc(member.doc_id));
  return button;
}

export function renderDocuments(hits: DocumentHit[], handlers: Handlers): HTMLElement {
  const list = el("ol", "doc-list");
  for (const hit of hits) {
    const item = el("li", "doc-card");
    item.dataset.docId = hit.doc_id;

    const head = el("div", "doc-head");
    head.append(el("span", "doc-rank", String(hit.rank)));
    head.append(docButton(hit, handlers));
    head.append(el("span", "source-badge", hit.source || "unknown"));
    if (hit.score !== null) head.append(el("span", "doc-score", scoreLabel(hit.score)));
    item.append(head);

    if (hit.snippet) item.append(el("p", "doc-snippet", hit.snippet));
    if (hit.url) {
      const link = el("a", "doc-url", hit.url);
      link.href = hit.url;
      link.target = "_blank";
      link.rel = "noopener";
      item.append(link);
    }
    list.append(item);
  }
  return list;
}

export function renderClusters(
  clusters: ClusterResult[],
  expanded: Set<string>,
  handlers: Handlers,
): HTMLElement {
  const list = el("ol", "cluster-list");
  for (const cluster of clusters) {
    const item = el("li", "cluster");
    item.dataset.conceptId = cluster.concept_id;

    const header = el("button", "cluster-header");
    header.type = "button";
    header.append(el("span", "cluster-title", cluster.concept_name));
    header.append(
      el(
        "span",
        "cluster-meta",
        `${cluster.size} doc${cluster.size === 1 ? "" : "s"} · best rank ${cluster.representative.rank}`,
      ),
    );
    header.append(el("span", "cluster-caret", expanded.has(cluster.concept_id) ? "▾" : "▸"));
    header.addEventListener("click", () => handlers.onToggleCluster(cluster.concept_id));
    item.append(header);

    const rep = el("div", "cluster-rep");
    rep.append(el("span", "member-rank", `r${cluster.representative.rank}`));
    rep.append(docButton(cluster.representative, handlers));
    item.append(rep);

    if (expanded.has(cluster.concept_id)) {
      const members = el("ol", "cluster-members");
      for (const member of cluster.members) {
        const row = el("li", "cluster-member");
        row.append(el("span", "member-rank", `r${member.rank}`));
        row.append(docButton(member, handlers));
        members.append(row);
      }
      item.append(members);
    }
    list.append(item);
  }
  return list;
}

export function renderConcepts(concepts: ConceptResult[], handlers: Handlers): HTMLElement {
  const list = el("ol", "concept-list");
  for (const concept of concepts) {
    const item = el("li", "concept");
    item.dataset.conceptId = concept.concept_id;

    const head = el("div", "concept-head");
    head.append(el("span", "concept-name", concept.concept_name));
    head.append(el("span", "concept-id", concept.concept_id));
    head.append(el("span", "concept-score", scoreLabel(concept.score)));
    item.append(head);

    const docs = el("ul", "concept-docs");
    for (const member of concept.contributing_docs) {
      const row = el("li", "concept-doc");
      row.append(el("span", "member-rank", `r${member.rank}`));
      row.append(docButton(member, handlers));
      docs.append(row);
    }
    item.append(docs);
    list.append(item);
  }
  return list;
}

export function renderNoMatches(): HTMLElement {
  return el("p", "no-matches", "No matches.");
}

export function renderResults(
  response: SearchResponse,
  expanded: Set<string>,
  handlers: Handlers,
): HTMLElement {
  if (response.results.length === 0) return renderNoMatches();
  switch (response.mode) {
    case "documents":
      return renderDocuments(response.results as DocumentHit[], handlers);
    case "clusters":
      return renderClusters(response.results as ClusterResult[], expanded, handlers);
    case "concepts":
      return renderConcepts(response.results as ConceptResult[], handlers);
  }
}

export function renderDocDetail(doc: DocDetail, onBack: () => void): HTMLElement {
  const panel = el("article", "doc-detail");
  const back = el("button", "back-link", "← back to results");
  back.type = "button";
  back.addEventListener("click", onBack);
  panel.append(back);

  panel.append(el("h2", "doc-title", doc.title));
  const meta = el("div", "doc-meta");
  meta.append(el("span", "source-badge", doc.source || "unknown"));
  if (doc.url) {
    const link = el("a", "doc-url", doc.url);
    link.href = doc.url;
    link.target = "_blank";
    link.rel = "noopener";
    meta.append(link);
  }
  panel.append(meta);
  if (doc.concept_ids.length > 0) {
    panel.append(el("p", "doc-concepts", `Concepts: ${doc.concept_ids.join(", ")}`));
  }
  panel.append(el("p", "doc-body", doc.body));
  return panel;
}

export function renderError(message: string): HTMLElement {
  return el("div", "banner error", message);
}

export function renderInfo(message: string): HTMLElement {
  return el("div", "banner info", message);
}
