/**
 * DOM wiring for the question/answer loop.
 *
 * createApp() builds the whole interface under a root element and
 * returns a small controller whose methods the event listeners (and
 * the tests) drive. All rendering is a projection of the UiState; the
 * only numbers on screen are the ones the API returned.
 */

import { ApiClient, ApiError } from "./api.js";
import type { AnswerPayload, Lang } from "./api.js";
import {
  UiState,
  askFailed,
  askResolved,
  askStarted,
  bindings,
  computeEnabled,
  computeFailed,
  computeResolved,
  computeStarted,
  editValues,
  editableIdentifiers,
  initialState,
  setDraft,
  setLang,
  setQuestion,
  startValueEntry,
} from "./state.js";
import { solveNote, typeset } from "./typeset.js";

export function formatValue(v: number): string {
  if (Number.isInteger(v)) return String(v);
  if (Math.abs(v) >= 1e7 || Math.abs(v) < 1e-4) return v.toExponential(4);
  return v.toFixed(4).replace(/0+$/, "").replace(/\.$/, "");
}

const LANGS: Array<[Lang, string]> = [
  ["en", "English"],
  ["hi", "हिन्दी"],
  ["formula", "Formula"],
];

export interface App {
  readonly state: UiState;
  root: HTMLElement;
  setLang(lang: Lang): void;
  setQuestion(text: string): void;
  ask(): Promise<void>;
  setValue(symbol: string, text: string): void;
  compute(): Promise<void>;
  editValues(): void;
}

export function createApp(root: HTMLElement, api: ApiClient): App {
  root.innerHTML = `
    <form id="ask-form">
      <select id="lang" aria-label="Question language"></select>
      <input id="question" type="text" autocomplete="off"
             placeholder="Ask about a formula" aria-label="Question">
      <button id="ask" type="submit">Ask</button>
    </form>
    <div id="notice" role="alert" hidden></div>
    <section id="formula-card" hidden>
      <div id="formula" class="formula"></div>
      <div id="solve-note" hidden></div>
      <table id="identifiers">
        <tbody></tbody>
      </table>
      <button id="compute" type="button" disabled>Compute</button>
    </section>
    <section id="result" hidden>
      <div id="result-line"></div>
      <ul id="result-constants"></ul>
      <button id="again" type="button">Change values</button>
    </section>
  `;

  const el = <T extends HTMLElement>(selector: string): T => {
    const found = root.querySelector<T>(selector);
    if (!found) throw new Error(`missing element ${selector}`);
    return found;
  };

  const langSelect = el<HTMLSelectElement>("#lang");
  for (const [value, label] of LANGS) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = label;
    langSelect.appendChild(option);
  }

  let state = initialState();
  let renderedPayload: AnswerPayload | null = null;

  const questionInput = el<HTMLInputElement>("#question");
  const askButton = el<HTMLButtonElement>("#ask");
  const noticeBox = el<HTMLDivElement>("#notice");
  const card = el<HTMLElement>("#formula-card");
  const formulaBox = el<HTMLDivElement>("#formula");
  const noteBox = el<HTMLDivElement>("#solve-note");
  const tableBody = el<HTMLTableSectionElement>("#identifiers tbody");
  const computeButton = el<HTMLButtonElement>("#compute");
  const resultSection = el<HTMLElement>("#result");
  const resultLine = el<HTMLDivElement>("#result-line");
  const constantsList = el<HTMLUListElement>("#result-constants");

  function buildRows(payload: AnswerPayload): void {
    tableBody.textContent = "";
    const note = solveNote(payload);
    for (const ident of payload.identifiers) {
      const row = document.createElement("tr");
      row.dataset.symbol = ident.symbol;

      const symbolCell = document.createElement("td");
      symbolCell.className = "ident-symbol";
      symbolCell.innerHTML = typeset(ident.symbol.replace("_", "_{") + (ident.symbol.includes("_") ? "}" : ""));
      row.appendChild(symbolCell);

      const labelCell = document.createElement("td");
      labelCell.className = "ident-label";
      labelCell.textContent = ident.label;
      row.appendChild(labelCell);

      const valueCell = document.createElement("td");
      valueCell.className = "ident-value";
      if (ident.known_value !== null) {
        const value = document.createElement("span");
        value.className = "const-value";
        value.textContent = formatValue(ident.known_value);
        const badge = document.createElement("span");
        badge.className = "kb-badge";
        badge.textContent = "from knowledge base";
        valueCell.append(value, " ", badge);
      } else if (note && ident.symbol === note.symbol) {
        const mark = document.createElement("span");
        mark.className = "solved-mark";
        mark.textContent = "computed";
        valueCell.appendChild(mark);
      } else {
        const input = document.createElement("input");
        input.type = "text";
        input.inputMode = "decimal";
        input.className = "value-input";
        input.setAttribute("aria-label", `value for ${ident.symbol}`);
        input.addEventListener("input", () => {
          app.setValue(ident.symbol, input.value);
        });
        valueCell.appendChild(input);
      }
      row.appendChild(valueCell);

      const unitCell = document.createElement("td");
      unitCell.className = "ident-unit";
      unitCell.textContent = ident.unit ?? "";
      row.appendChild(unitCell);

      tableBody.appendChild(row);
    }
    if (note) {
      noteBox.hidden = false;
      noteBox.innerHTML = `computing the <span class="note-side">${typeset(note.sideLatex)}</span> side`;
    } else {
      noteBox.hidden = true;
    }
  }

  function render(): void {
    askButton.disabled = state.pending !== null;
    if (questionInput.value !== state.question) questionInput.value = state.question;
    if (langSelect.value !== state.lang) langSelect.value = state.lang;

    noticeBox.hidden = state.notice === null;
    noticeBox.textContent = state.notice ?? "";

    const answered =
      state.payload !== null &&
      (state.payload.status === "ok" || state.payload.status === "needs-values") &&
      state.phase !== "entering-question" &&
      state.phase !== "error";
    card.hidden = !answered;
    if (answered && state.payload) {
      if (state.payload !== renderedPayload) {
        formulaBox.innerHTML = state.payload.formula_latex
          ? typeset(state.payload.formula_latex)
          : "";
        buildRows(state.payload);
        renderedPayload = state.payload;
      }
      computeButton.disabled = !computeEnabled(state);
    } else {
      renderedPayload = null;
    }

    const showResult = state.phase === "showing-result" && state.result !== null;
    resultSection.hidden = !showResult;
    if (showResult && state.result) {
      const res = state.result;
      const note = state.payload ? solveNote(state.payload) : null;
      const lhs = res.solved_for
        ? typeset(res.solved_for)
        : note
          ? `<span class="note-side">${typeset(note.sideLatex)}</span>`
          : "";
      resultLine.innerHTML =
        (lhs ? lhs + " = " : "= ") + `<span id="result-value">${formatValue(res.value)}</span>`;
      constantsList.textContent = "";
      for (const [symbol, source] of Object.entries(res.constant_sources)) {
        const item = document.createElement("li");
        const value = res.effective_bindings[symbol];
        item.textContent =
          `${symbol} = ${value === undefined ? "?" : formatValue(value)}` +
          ` (${source}, from knowledge base)`;
        constantsList.appendChild(item);
      }
    }
  }

  const app: App = {
    get state() {
      return state;
    },
    root,

    setLang(lang: Lang): void {
      state = setLang(state, lang);
      render();
    },

    setQuestion(text: string): void {
      state = setQuestion(state, text);
    },

    async ask(): Promise<void> {
      if (state.pending !== null || !state.question.trim()) return;
      state = askStarted(state);
      render();
      try {
        const payload = await api.question(state.question.trim(), state.lang);
        state = askResolved(state, payload);
        if (state.phase === "showing-formula") {
          state = startValueEntry(state);
        }
      } catch (err) {
        state = askFailed(state, err instanceof Error ? err.message : String(err));
      }
      render();
    },

    setValue(symbol: string, text: string): void {
      state = setDraft(state, symbol, text);
      render();
    },

    async compute(): Promise<void> {
      if (!computeEnabled(state) || !state.payload) return;
      const payload = state.payload;
      state = computeStarted(state);
      render();
      try {
        const resp = await api.calculate({
          qid: payload.qid ?? undefined,
          formula: payload.formula_latex ?? undefined,
          bindings: bindings(state),
        });
        state = computeResolved(state, resp);
      } catch (err) {
        state = computeFailed(state, err instanceof ApiError ? err.message : String(err));
      }
      render();
    },

    editValues(): void {
      state = editValues(state);
      render();
    },
  };

  el<HTMLFormElement>("#ask-form").addEventListener("submit", (event) => {
    event.preventDefault();
    void app.ask();
  });
  questionInput.addEventListener("input", () => {
    app.setQuestion(questionInput.value);
  });
  langSelect.addEventListener("change", () => {
    app.setLang(langSelect.value as Lang);
  });
  computeButton.addEventListener("click", () => {
    void app.compute();
  });
  el<HTMLButtonElement>("#again").addEventListener("click", () => {
    app.editValues();
  });

  render();
  return app;
}
