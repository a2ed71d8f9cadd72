/**
 * Client-side typesetting of the canonical formula strings returned by
 * the API.
 *
 * The backend renders every formula into a small canonical LaTeX
 * subset (braced exponents and subscripts, \frac, \sqrt, \left|...\right|,
 * prefix trig/log calls, greek commands, \mathrm for multi-letter
 * names). This module turns that subset into plain HTML, and exposes
 * just enough structure (equation sides, identifier occurrences) for
 * the form to decide which side a computation will settle. No math is
 * evaluated here; anything unrecognised falls back to literal text.
 */

import type { AnswerPayload } from "./api.js";

const GREEK: Record<string, string> = {
  Gamma: "Γ", Delta: "Δ", Theta: "Θ", Lambda: "Λ", Xi: "Ξ", Pi: "Π",
  Sigma: "Σ", Upsilon: "Υ", Phi: "Φ", Psi: "Ψ", Omega: "Ω",
  alpha: "α", beta: "β", gamma: "γ", delta: "δ", epsilon: "ε",
  zeta: "ζ", eta: "η", theta: "θ", iota: "ι", kappa: "κ",
  lambda: "λ", mu: "μ", nu: "ν", xi: "ξ", rho: "ρ", varsigma: "ς",
  sigma: "σ", tau: "τ", upsilon: "υ", phi: "φ", chi: "χ", psi: "ψ",
  omega: "ω", vartheta: "ϑ", varphi: "ϕ",
};

const FUNCTIONS = new Set(["sin", "cos", "tan", "log", "ln", "exp"]);

type Token =
  | { kind: "cmd"; name: string }
  | { kind: "char"; ch: string }
  | { kind: "open" }
  | { kind: "close" }
  | { kind: "sup" }
  | { kind: "sub" }
  | { kind: "space" };

function tokenize(latex: string): Token[] {
  const out: Token[] = [];
  let i = 0;
  while (i < latex.length) {
    const ch = latex[i] as string;
    if (ch === "\\") {
      let j = i + 1;
      while (j < latex.length && /[a-zA-Z]/.test(latex[j] as string)) j++;
      if (j === i + 1) {
        // escaped single character, e.g. "\{"
        out.push({ kind: "cmd", name: latex[j] ?? "" });
        i = j + 1;
      } else {
        out.push({ kind: "cmd", name: latex.slice(i + 1, j) });
        i = j;
      }
    } else if (ch === "{") {
      out.push({ kind: "open" });
      i++;
    } else if (ch === "}") {
      out.push({ kind: "close" });
      i++;
    } else if (ch === "^") {
      out.push({ kind: "sup" });
      i++;
    } else if (ch === "_") {
      out.push({ kind: "sub" });
      i++;
    } else if (/\s/.test(ch)) {
      while (i < latex.length && /\s/.test(latex[i] as string)) i++;
      out.push({ kind: "space" });
    } else {
      out.push({ kind: "char", ch });
      i++;
    }
  }
  return out;
}

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

class Reader {
  private tokens: Token[];
  private pos = 0;

  constructor(tokens: Token[]) {
    this.tokens = tokens;
  }

  peek(): Token | undefined {
    return this.tokens[this.pos];
  }

  next(): Token | undefined {
    return this.tokens[this.pos++];
  }

  done(): boolean {
    return this.pos >= this.tokens.length;
  }

  /** Raw text of a braced group, ignoring markup (used for \mathrm). */
  groupText(): string {
    let text = "";
    if (this.peek()?.kind !== "open") {
      const tok = this.next();
      return tok && tok.kind === "char" ? tok.ch : "";
    }
    this.next();
    let depth = 1;
    while (!this.done() && depth > 0) {
      const tok = this.next() as Token;
      if (tok.kind === "open") depth++;
      else if (tok.kind === "close") depth--;
      if (depth === 0) break;
      if (tok.kind === "char") text += tok.ch;
      else if (tok.kind === "cmd") text += GREEK[tok.name] ?? tok.name;
      else if (tok.kind === "sub") text += "_";
    }
    return text;
  }
}

function renderGroup(r: Reader): string {
  // renders either a braced group or the single next construct
  if (r.peek()?.kind === "open") {
    r.next();
    let html = "";
    let depth = 1;
    const inner: Token[] = [];
    while (!r.done()) {
      const tok = r.next() as Token;
      if (tok.kind === "open") depth++;
      else if (tok.kind === "close") {
        depth--;
        if (depth === 0) break;
      }
      inner.push(tok);
    }
    html = renderTokens(new Reader(inner));
    return html;
  }
  const tok = r.next();
  if (!tok) return "";
  return renderToken(tok, r);
}

function renderToken(tok: Token, r: Reader): string {
  switch (tok.kind) {
    case "space":
      return " ";
    case "char":
      return escapeHtml(tok.ch);
    case "open": {
      // stray group: render contents transparently
      const inner: Token[] = [];
      let depth = 1;
      while (!r.done()) {
        const t = r.next() as Token;
        if (t.kind === "open") depth++;
        else if (t.kind === "close") {
          depth--;
          if (depth === 0) break;
        }
        inner.push(t);
      }
      return renderTokens(new Reader(inner));
    }
    case "close":
      return "";
    case "sup":
      return `<sup>${renderGroup(r)}</sup>`;
    case "sub":
      return `<sub>${renderGroup(r)}</sub>`;
    case "cmd":
      return renderCommand(tok.name, r);
  }
}

function renderCommand(name: string, r: Reader): string {
  if (name === "frac") {
    const num = renderGroup(r);
    const den = renderGroup(r);
    return (
      `<span class="frac"><span class="frac-num">${num}</span>` +
      `<span class="frac-den">${den}</span></span>`
    );
  }
  if (name === "sqrt") {
    return `<span class="sqrt">√<span class="sqrt-arg">${renderGroup(r)}</span></span>`;
  }
  if (name === "mathrm") {
    const text = r.groupText();
    return `<span class="rm">${escapeHtml(text)}</span>`;
  }
  if (name === "left" || name === "right") {
    const tok = r.next();
    return tok && tok.kind === "char" ? escapeHtml(tok.ch) : "";
  }
  if (name === "cdot") return "·";
  if (name === "pi") return "π";
  if (FUNCTIONS.has(name)) return `<span class="fn">${name}</span>`;
  const greek = GREEK[name];
  if (greek) return greek;
  return escapeHtml(name);
}

function renderTokens(r: Reader): string {
  let html = "";
  while (!r.done()) {
    html += renderToken(r.next() as Token, r);
  }
  return html;
}

/** Render one canonical formula string to an HTML fragment. */
export function typeset(latex: string): string {
  return renderTokens(new Reader(tokenize(latex))).trim();
}

/** Split an equation chain into its sides ("=" never nests in the canonical form). */
export function splitSides(latex: string): string[] {
  const sides: string[] = [];
  let depth = 0;
  let current = "";
  for (const ch of latex) {
    if (ch === "{") depth++;
    else if (ch === "}") depth--;
    if (ch === "=" && depth === 0) {
      sides.push(current.trim());
      current = "";
    } else {
      current += ch;
    }
  }
  sides.push(current.trim());
  return sides;
}

/**
 * Distinct identifier symbols in a canonical fragment, in first-seen
 * order, spelled the way the API spells them ("r", "σ", "R_0").
 * \pi and \mathrm{e} are constants, not identifiers.
 */
export function identifiersIn(latex: string): string[] {
  const r = new Reader(tokenize(latex));
  const seen: string[] = [];

  const add = (symbol: string) => {
    if (!seen.includes(symbol)) seen.push(symbol);
  };

  const subscriptText = (): string => {
    r.next(); // the sub token
    const reader = r;
    if (reader.peek()?.kind !== "open") {
      const tok = reader.next();
      if (!tok) return "";
      if (tok.kind === "char") return tok.ch;
      if (tok.kind === "cmd") return GREEK[tok.name] ?? "";
      return "";
    }
    return reader.groupText();
  };

  while (!r.done()) {
    const tok = r.next() as Token;
    let base: string | null = null;
    if (tok.kind === "char" && /[a-zA-Z]/.test(tok.ch)) {
      base = tok.ch;
    } else if (tok.kind === "cmd") {
      if (tok.name === "mathrm") {
        const text = r.groupText();
        if (text !== "e") base = text;
      } else if (tok.name !== "pi" && GREEK[tok.name]) {
        base = GREEK[tok.name] as string;
      }
      // \frac, \sqrt, function names etc: their groups flow through
      // the main loop, so nested identifiers are still collected
    }
    if (base === null) continue;
    if (r.peek()?.kind === "sub") {
      const sub = subscriptText();
      add(sub ? `${base}_${sub}` : base);
    } else {
      add(base);
    }
  }
  return seen;
}

export interface SolveNote {
  symbol: string;
  sideLatex: string;
}

/**
 * Detect the side of the formula the computation settles, if there is
 * an unambiguous one: the leftmost side built from exactly one
 * identifier that appears on no other side (e.g. c in c² = a² + b²,
 * V in V = 4/3 π r³). The form renders that side as a note instead of
 * an input row; the value for it comes back from the API.
 */
export function solveNote(payload: AnswerPayload): SolveNote | null {
  if (!payload.formula_latex) return null;
  const sides = splitSides(payload.formula_latex);
  if (sides.length < 2) return null;
  const idents = sides.map((side) => identifiersIn(side));
  for (let i = 0; i < sides.length; i++) {
    const here = idents[i] as string[];
    if (here.length !== 1) continue;
    const symbol = here[0] as string;
    const elsewhere = idents.some((other, j) => j !== i && other.includes(symbol));
    if (!elsewhere) return { symbol, sideLatex: sides[i] as string };
  }
  return null;
}
