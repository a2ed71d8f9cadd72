import { describe, expect, it } from "vitest";

import type { AnswerPayload } from "../src/api.js";
import { identifiersIn, solveNote, splitSides, typeset } from "../src/typeset.js";

function payload(formula: string, symbols: string[]): AnswerPayload {
  return {
    status: "needs-values",
    formula_latex: formula,
    identifiers: symbols.map((symbol) => ({
      symbol,
      label: "",
      known_value: null,
      unit: null,
    })),
    qid: null,
    message: null,
  };
}

describe("typeset", () => {
  it("renders the sphere volume formula with fraction, pi and exponent", () => {
    const html = typeset("V = \\frac{4}{3} \\pi r^{3}");
    expect(html).toContain('<span class="frac-num">4</span>');
    expect(html).toContain('<span class="frac-den">3</span>');
    expect(html).toContain("π");
    expect(html).toContain("<sup>3</sup>");
    expect(html).not.toContain("\\frac");
  });

  it("renders subscripts, greek letters and \\mathrm names", () => {
    expect(typeset("R_{0}")).toBe("R<sub>0</sub>");
    expect(typeset("\\sigma_{x}")).toBe("σ<sub>x</sub>");
    expect(typeset("\\mathrm{Re}")).toBe('<span class="rm">Re</span>');
    expect(typeset("\\mathrm{e}^{x}")).toBe('<span class="rm">e</span><sup>x</sup>');
  });

  it("renders prefix functions, \\cdot, \\sqrt and absolute values", () => {
    expect(typeset("\\sin(x)")).toBe('<span class="fn">sin</span>(x)');
    expect(typeset("2 \\cdot 3")).toBe("2 · 3");
    expect(typeset("\\sqrt{2}")).toContain('√<span class="sqrt-arg">2</span>');
    expect(typeset("\\left|x\\right|")).toBe("|x|");
  });

  it("escapes markup instead of executing it", () => {
    expect(typeset("a < b")).toBe("a &lt; b");
    expect(typeset("\\unknowncmd x")).toBe("unknowncmd x");
  });
});

describe("splitSides", () => {
  it("splits an equation chain on top-level equals signs", () => {
    expect(splitSides("C = 2 \\pi r = \\pi d")).toEqual(["C", "2 \\pi r", "\\pi d"]);
  });

  it("keeps single-expression input whole", () => {
    expect(splitSides("2 \\pi r")).toEqual(["2 \\pi r"]);
  });
});

describe("identifiersIn", () => {
  it("collects plain, greek and subscripted symbols in order", () => {
    expect(identifiersIn("c^{2} = a^{2} + b^{2}")).toEqual(["c", "a", "b"]);
    expect(identifiersIn("\\sigma \\sqrt{2 \\pi}")).toEqual(["σ"]);
    expect(identifiersIn("2 \\pi^{2} R_{0} a^{2}")).toEqual(["R_0", "a"]);
  });

  it("treats \\pi and \\mathrm{e} as constants, not identifiers", () => {
    expect(identifiersIn("\\pi \\mathrm{e}")).toEqual([]);
    expect(identifiersIn("\\mathrm{e}^{-x}")).toEqual(["x"]);
  });

  it("sees identifiers inside exponents and fractions", () => {
    expect(identifiersIn("x^{n}")).toEqual(["x", "n"]);
    expect(identifiersIn("\\frac{m}{V}")).toEqual(["m", "V"]);
  });
});

describe("solveNote", () => {
  it("marks the lone-identifier side of the Pythagorean formula", () => {
    const note = solveNote(payload("c^{2} = a^{2} + b^{2}", ["c", "a", "b"]));
    expect(note).toEqual({ symbol: "c", sideLatex: "c^{2}" });
  });

  it("marks the bare left side of the sphere formula", () => {
    const note = solveNote(payload("V = \\frac{4}{3} \\pi r^{3}", ["r"]));
    expect(note).toEqual({ symbol: "V", sideLatex: "V" });
  });

  it("picks the leftmost lone side of an equation chain", () => {
    const note = solveNote(payload("C = 2 \\pi r = \\pi d", ["r", "d"]));
    expect(note).toEqual({ symbol: "C", sideLatex: "C" });
  });

  it("returns null when every side mixes identifiers", () => {
    expect(solveNote(payload("P V = n R T", ["P", "V", "n", "R", "T"]))).toBeNull();
  });

  it("returns null for a formula-free payload and for repeated symbols", () => {
    expect(solveNote(payload("x = x + 1", ["x"]))).toBeNull();
    const missing = payload("", []);
    missing.formula_latex = null;
    expect(solveNote(missing)).toBeNull();
  });
});
