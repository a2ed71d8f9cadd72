// @vitest-environment jsdom
import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import type { AnswerPayload, FetchLike } from "../src/api.js";
import { App, createApp, formatValue } from "../src/app.js";

interface Call {
  url: string;
  body: Record<string, unknown>;
}

interface Harness {
  app: App;
  calls: Call[];
  respond: (body: unknown, status?: number) => void;
}

function harness(): Harness {
  const queue: Array<{ body: unknown; status: number }> = [];
  const calls: Call[] = [];
  const fetchFn: FetchLike = async (url, init) => {
    calls.push({ url, body: JSON.parse(init.body) });
    const next = queue.shift();
    if (!next) throw new Error(`no response queued for ${url}`);
    return {
      ok: next.status >= 200 && next.status < 300,
      status: next.status,
      json: async () => next.body,
    };
  };
  document.body.innerHTML = '<div id="app"></div>';
  const root = document.getElementById("app") as HTMLElement;
  const app = createApp(root, new ApiClient("", fetchFn));
  return {
    app,
    calls,
    respond: (body, status = 200) => queue.push({ body, status }),
  };
}

function visible(selector: string): boolean {
  const node = document.querySelector<HTMLElement>(selector);
  return node !== null && !node.hidden;
}

function text(selector: string): string {
  return document.querySelector<HTMLElement>(selector)?.textContent ?? "";
}

function inputFor(symbol: string): HTMLInputElement {
  const input = document.querySelector<HTMLInputElement>(
    `tr[data-symbol="${symbol}"] input.value-input`,
  );
  if (!input) throw new Error(`no input for ${symbol}`);
  return input;
}

function computeButton(): HTMLButtonElement {
  return document.querySelector("#compute") as HTMLButtonElement;
}

const SPHERE: AnswerPayload = {
  status: "needs-values",
  formula_latex: "V = \\frac{4}{3} \\pi r^{3}",
  identifiers: [{ symbol: "r", label: "radius", known_value: null, unit: null }],
  qid: "Q12507",
  message: null,
};

const GAS_LAW: AnswerPayload = {
  status: "ok",
  formula_latex: "P V = n R T",
  identifiers: [
    { symbol: "P", label: "pressure", known_value: null, unit: "Pa" },
    { symbol: "V", label: "volume", known_value: null, unit: "m^3" },
    { symbol: "n", label: "amount of substance", known_value: null, unit: "mol" },
    { symbol: "R", label: "molar gas constant", known_value: 8.314, unit: "J/(mol·K)" },
    { symbol: "T", label: "absolute temperature", known_value: null, unit: "K" },
  ],
  qid: "Q208554",
  message: null,
};

const PYTHAGOREAN: AnswerPayload = {
  status: "needs-values",
  formula_latex: "c^{2} = a^{2} + b^{2}",
  identifiers: [
    { symbol: "c", label: "", known_value: null, unit: null },
    { symbol: "a", label: "", known_value: null, unit: null },
    { symbol: "b", label: "", known_value: null, unit: null },
  ],
  qid: null,
  message: null,
};

describe("question flow", () => {
  let h: Harness;

  beforeEach(() => {
    h = harness();
  });

  it("renders the sphere answer with a typeset formula and one input row", async () => {
    h.respond(SPHERE);
    h.app.setQuestion("What is the volume of a sphere?");
    await h.app.ask();

    expect(h.calls[0]?.url).toBe("/api/v1/question");
    expect(h.calls[0]?.body).toEqual({
      text: "What is the volume of a sphere?",
      lang: "en",
    });
    expect(visible("#formula-card")).toBe(true);
    expect(document.querySelector("#formula sup")?.textContent).toBe("3");
    expect(text("#formula")).toContain("π");
    const rows = document.querySelectorAll("#identifiers tbody tr");
    expect(rows).toHaveLength(1);
    expect(text('tr[data-symbol="r"] .ident-label')).toBe("radius");
    expect(inputFor("r")).toBeTruthy();
    expect(visible("#result")).toBe(false);
  });

  it("sends the selected language with the question", async () => {
    h.respond(SPHERE);
    h.app.setLang("hi");
    h.app.setQuestion("गोले का आयतन क्या है?");
    await h.app.ask();
    expect(h.calls[0]?.body).toEqual({ text: "गोले का आयतन क्या है?", lang: "hi" });
  });

  it("shows the service message inline for a question it cannot parse", async () => {
    h.respond({
      status: "unparseable",
      formula_latex: null,
      identifiers: [],
      qid: null,
      message: "could not understand the question: 'Tell me a joke'",
    });
    h.app.setQuestion("Tell me a joke");
    await h.app.ask();

    expect(visible("#notice")).toBe(true);
    expect(text("#notice")).toContain("Tell me a joke");
    expect(visible("#formula-card")).toBe(false);
    expect(h.app.state.phase).toBe("error");
  });

  it("marks KB constants read-only with a provenance badge", async () => {
    h.respond(GAS_LAW);
    h.app.setQuestion("What is the formula for the ideal gas law?");
    await h.app.ask();

    const rRow = document.querySelector('tr[data-symbol="R"]') as HTMLElement;
    expect(rRow.querySelector("input")).toBeNull();
    expect(rRow.querySelector(".const-value")?.textContent).toBe("8.314");
    expect(rRow.querySelector(".kb-badge")?.textContent).toBe("from knowledge base");
    expect(text('tr[data-symbol="R"] .ident-unit')).toBe("J/(mol·K)");
    // the other four identifiers stay editable
    expect(document.querySelectorAll("#identifiers input.value-input")).toHaveLength(4);
  });

  it("renders a side note instead of an input for the settled side", async () => {
    h.respond(PYTHAGOREAN);
    h.app.setQuestion("c^2 = a^2 + b^2");
    await h.app.ask();

    expect(document.querySelectorAll("#identifiers input.value-input")).toHaveLength(2);
    expect(document.querySelector('tr[data-symbol="c"] input')).toBeNull();
    expect(text('tr[data-symbol="c"] .solved-mark')).toBe("computed");
    expect(visible("#solve-note")).toBe(true);
    expect(text("#solve-note")).toContain("c");
  });
});

describe("value entry and compute", () => {
  let h: Harness;

  beforeEach(async () => {
    h = harness();
    h.respond(SPHERE);
    h.app.setQuestion("What is the volume of a sphere?");
    await h.app.ask();
  });

  it("keeps compute disabled until the field is numeric", () => {
    expect(computeButton().disabled).toBe(true);
    const input = inputFor("r");
    input.value = "abc";
    input.dispatchEvent(new Event("input"));
    expect(computeButton().disabled).toBe(true);
    input.value = "2";
    input.dispatchEvent(new Event("input"));
    expect(computeButton().disabled).toBe(false);
    input.value = "";
    input.dispatchEvent(new Event("input"));
    expect(computeButton().disabled).toBe(true);
  });

  it("displays the value exactly as the API returned it", async () => {
    h.respond({
      status: "ok",
      value: 33.510321638291124,
      solved_for: "V",
      effective_bindings: { r: 2 },
      constant_sources: {},
    });
    const input = inputFor("r");
    input.value = "2";
    input.dispatchEvent(new Event("input"));
    await h.app.compute();

    expect(h.calls[1]?.url).toBe("/api/v1/calculate");
    expect(h.calls[1]?.body).toEqual({
      qid: "Q12507",
      formula: "V = \\frac{4}{3} \\pi r^{3}",
      bindings: { r: 2 },
    });
    expect(visible("#result")).toBe(true);
    expect(text("#result-value")).toBe("33.5103");
    expect(text("#result-line")).toContain("V");
  });

  it("shows whatever number the API sends, never a local computation", async () => {
    // deliberately wrong value for r=2: if the UI did its own math it
    // would display 33.5103 instead
    h.respond({
      status: "ok",
      value: 99.25,
      solved_for: "V",
      effective_bindings: { r: 2 },
      constant_sources: {},
    });
    const input = inputFor("r");
    input.value = "2";
    input.dispatchEvent(new Event("input"));
    await h.app.compute();

    expect(text("#result-value")).toBe("99.25");
    expect(text("#result")).not.toContain("33.5103");
  });

  it("lists KB-sourced constants next to the result", async () => {
    // fresh round with the gas law
    h.respond(GAS_LAW);
    h.app.setQuestion("What is the formula for the ideal gas law?");
    await h.app.ask();
    for (const symbol of ["P", "V", "T"]) {
      const input = inputFor(symbol);
      input.value = "1";
      input.dispatchEvent(new Event("input"));
    }
    const n = inputFor("n");
    n.value = "2";
    n.dispatchEvent(new Event("input"));
    h.respond({
      status: "ok",
      value: 0.0601,
      solved_for: null,
      effective_bindings: { P: 1, V: 1, T: 1, n: 2, R: 8.314 },
      constant_sources: { R: "molar gas constant" },
    });
    await h.app.compute();

    expect(h.calls[2]?.body).toEqual({
      qid: "Q208554",
      formula: "P V = n R T",
      bindings: { P: 1, V: 1, n: 2, T: 1 },
    });
    const constants = text("#result-constants");
    expect(constants).toContain("R = 8.314");
    expect(constants).toContain("molar gas constant");
    expect(constants).toContain("from knowledge base");
  });

  it("places a domain error inline and returns to the form", async () => {
    h.respond({ status: "error", message: "division by zero in \\frac{1}{x}" }, 400);
    const input = inputFor("r");
    input.value = "0";
    input.dispatchEvent(new Event("input"));
    await h.app.compute();

    expect(visible("#result")).toBe(false);
    expect(text("#notice")).toContain("division by zero");
    expect(h.app.state.phase).toBe("entering-values");
  });

  it("never shows the result section before a calculate response arrives", async () => {
    expect(visible("#result")).toBe(false);
    const input = inputFor("r");
    input.value = "2";
    input.dispatchEvent(new Event("input"));
    expect(visible("#result")).toBe(false); // numeric values alone do not reveal it
    h.respond({
      status: "ok",
      value: 33.5103,
      solved_for: "V",
      effective_bindings: { r: 2 },
      constant_sources: {},
    });
    await h.app.compute();
    expect(visible("#result")).toBe(true);
    h.app.editValues();
    expect(visible("#result")).toBe(false);
  });
});

describe("formatValue", () => {
  it("trims to at most four decimals without inventing precision", () => {
    expect(formatValue(33.510321638291124)).toBe("33.5103");
    expect(formatValue(99.25)).toBe("99.25");
    expect(formatValue(6371)).toBe("6371");
    expect(formatValue(2270.9691)).toBe("2270.9691");
    expect(formatValue(0.00001)).toBe("1.0000e-5");
  });
});
