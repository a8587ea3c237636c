import { ApiClient } from "./api.js";
import { SearchController } from "./controller.js";
import type { Mode } from "./types.js";

const MODES: Mode[] = ["documents", "clusters", "concepts"];

function mustFind<T extends Element>(root: ParentNode, selector: string): T {
  const node = root.querySelector<T>(selector);
  if (!node) throw new Error(`missing element ${selector}`);
  return node;
}

export function bootstrap(root: HTMLElement, apiBase: string): SearchController {
  root.innerHTML = `
    <header class="masthead">
      <h1>raredx</h1>
      <p class="tagline">rare-disease diagnostic search</p>
    </header>
    <form class="search-form">
      <input type="search" name="q" placeholder="Enter patient symptoms…" autofocus>
      <button type="submit">Search</button>
      <button type="button" class="advanced-toggle">Advanced</button>
    </form>
    <fieldset class="advanced" hidden>
      <label>model
        <select name="model">
          <option value="dirichlet" selected>dirichlet</option>
          <option value="jm">jm</option>
        </select>
      </label>
      <label>λ <input name="lambda" type="number" min="0" max="1" step="0.05" placeholder="0.9"></label>
      <label>µ <input name="mu" type="number" min="1" step="100" placeholder="2500"></label>
      <label>n <input name="n" type="number" min="1" value="20"></label>
      <label>j <input name="j" type="number" min="1" value="50"></label>
      <label>corpus
        <select name="corpus">
          <option value="all" selected>all</option>
          <option value="rare">rare only</option>
        </select>
      </label>
      <label>query type
        <select name="by">
          <option value="text" selected>symptom text</option>
          <option value="concept">concept id</option>
        </select>
      </label>
    </fieldset>
    <nav class="mode-tabs">
      ${MODES.map(
        (mode, i) =>
          `<button type="button" data-mode="${mode}" class="${i === 0 ? "active" : ""}">${mode}</button>`,
      ).join("")}
    </nav>
    <div class="status"></div>
    <main class="results"></main>
  `;

  const controller = new SearchController(
    new ApiClient(apiBase),
    mustFind<HTMLElement>(root, ".results"),
    mustFind<HTMLElement>(root, ".status"),
  );

  const form = mustFind<HTMLFormElement>(root, ".search-form");
  const input = mustFind<HTMLInputElement>(root, "input[name=q]");
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void controller.submit(input.value);
  });

  mustFind<HTMLButtonElement>(root, ".advanced-toggle").addEventListener("click", () => {
    const panel = mustFind<HTMLFieldSetElement>(root, ".advanced");
    panel.hidden = !panel.hidden;
  });

  const readParams = () => {
    const params = controller.state.params;
    params.model = mustFind<HTMLSelectElement>(root, "select[name=model]").value as
      | "jm"
      | "dirichlet";
    params.corpus = mustFind<HTMLSelectElement>(root, "select[name=corpus]").value as
      | "all"
      | "rare";
    params.by = mustFind<HTMLSelectElement>(root, "select[name=by]").value as "text" | "concept";
    const num = (name: string) => {
      const raw = mustFind<HTMLInputElement>(root, `input[name=${name}]`).value;
      return raw === "" ? undefined : Number(raw);
    };
    params.lambda = num("lambda");
    params.mu = num("mu");
    params.n = num("n") ?? 20;
    params.j = num("j") ?? 50;
  };
  mustFind<HTMLFieldSetElement>(root, ".advanced").addEventListener("change", readParams);

  for (const tab of root.querySelectorAll<HTMLButtonElement>(".mode-tabs button")) {
    tab.addEventListener("click", () => {
      for (const other of root.querySelectorAll(".mode-tabs button")) {
        other.classList.toggle("active", other === tab);
      }
      void controller.setMode(tab.dataset.mode as Mode);
    });
  }
  return controller;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const apiBase = new URLSearchParams(window.location.search).get("api") ?? "";
  bootstrap(document.getElementById("app") as HTMLElement, apiBase);
}
