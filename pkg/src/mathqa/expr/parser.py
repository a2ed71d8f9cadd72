"""Recursive-descent parser for a small LaTeX formula subset.

Grammar, roughly:

    equation   :=  [ header '=' ]  expr  ( '=' expr )*
    header     :=  name '(' name ( ',' name )* ')'      # only before the 1st '='
    expr       :=  [ '-' ] term  ( ( '+' | '-' ) [ '-' ] term )*
    term       :=  factor ( ( '*' | '/' ) signed | factor )*   # adjacency = *
    factor     :=  atom ( '^' exponent )*
    atom       :=  number | name | constant | function | frac | sqrt
                |  '(' expr ')' | '[' expr ']' | '{' expr '}' | '|' expr '|'

Presentation-only commands (\\displaystyle, \\left, \\right, sizing, spacing)
are dropped during lexing.  \\mathrm{..} and \\text{..} are unwrapped; a
wrapped word becomes a single identifier.  \\pi and \\mathrm{e} denote
constants, and a bare ``e`` is the constant exactly when it carries an
exponent; everywhere else it is a variable.  Anything outside the subset
(sums, integrals, matrices, unknown commands) raises UnsupportedConstruct.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional

from .errors import LatexSyntaxError, UnsupportedConstruct
from .nodes import BinOp, Call, Const, Equation, Frac, FuncHeader, Ident, Node, Num, Unary

__all__ = ["parse_latex", "GREEK_BY_NAME", "GREEK_BY_CHAR"]

GREEK_BY_NAME = {
    "alpha": "α", "beta": "β", "gamma": "γ", "delta": "δ", "epsilon": "ε",
    "varepsilon": "ε", "zeta": "ζ", "eta": "η", "theta": "θ", "vartheta": "ϑ",
    "iota": "ι", "kappa": "κ", "lambda": "λ", "mu": "μ", "nu": "ν", "xi": "ξ",
    "rho": "ρ", "varrho": "ρ", "sigma": "σ", "varsigma": "ς", "tau": "τ",
    "upsilon": "υ", "phi": "φ", "varphi": "ϕ", "chi": "χ", "psi": "ψ",
    "omega": "ω", "Gamma": "Γ", "Delta": "Δ", "Theta": "Θ", "Lambda": "Λ",
    "Xi": "Ξ", "Pi": "Π", "Sigma": "Σ", "Upsilon": "Υ", "Phi": "Φ",
    "Psi": "Ψ", "Omega": "Ω",
}
GREEK_BY_CHAR = {}
for _name, _char in GREEK_BY_NAME.items():
    GREEK_BY_CHAR.setdefault(_char, _name)

_SKIP_COMMANDS = frozenset({
    "displaystyle", "textstyle", "scriptstyle", "scriptscriptstyle",
    "limits", "nolimits", "thinspace", "negthinspace",
    "quad", "qquad", "enspace",
    "big", "Big", "bigg", "Bigg",
    "bigl", "bigr", "Bigl", "Bigr", "biggl", "biggr", "Biggl", "Biggr",
    "bigm", "Bigm", "biggm", "Biggm",
})
_FUNC_COMMANDS = frozenset({"sin", "cos", "tan", "log", "ln", "exp"})
_FRAC_COMMANDS = frozenset({"frac", "dfrac", "tfrac", "cfrac"})
_WRAP_COMMANDS = frozenset({
    "mathrm", "text", "operatorname", "mathit", "mathbf", "mathsf", "textrm", "textit",
})
_MUL_COMMANDS = frozenset({"cdot", "times"})

_NUMBER_RE = re.compile(r"\d+\.\d+|\d+|\.\d+")
_SYMBOLS = set("^_+-*/=(){}[]|,")


@dataclass
class _Token:
    kind: str  # NUMBER LETTER GREEK COMMAND SYMBOL
    value: str
    pos: int


def _lex(source: str) -> List[_Token]:
    tokens: List[_Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace() or ch == "~":
            i += 1
            continue
        if ch == "\\":
            if i + 1 >= n:
                raise LatexSyntaxError("dangling backslash", i)
            nxt = source[i + 1]
            if not nxt.isalpha():
                # escaped punctuation is spacing: \, \! \; \: and "\ "
                i += 2
                continue
            m = re.match(r"[a-zA-Z]+", source[i + 1:])
            name = m.group(0)
            end = i + 1 + len(name)
            if name in _SKIP_COMMANDS:
                i = end
                continue
            if name in ("left", "right"):
                # sizing is dropped, but a bar delimiter keeps its pairing
                # so nested absolute values stay unambiguous; a null
                # delimiter "\left." contributes nothing
                rest = source[end:].lstrip()
                if rest.startswith("|"):
                    bar = "L|" if name == "left" else "R|"
                    skipped = len(source) - end - len(rest)
                    tokens.append(_Token("SYMBOL", bar, end + skipped))
                    end += skipped + 1
                elif rest.startswith("."):
                    end += (len(source) - end - len(rest)) + 1
                i = end
                continue
            if name in _MUL_COMMANDS:
                tokens.append(_Token("SYMBOL", "*", i))
            elif name == "div":
                tokens.append(_Token("SYMBOL", "/", i))
            elif name in GREEK_BY_NAME:
                tokens.append(_Token("GREEK", GREEK_BY_NAME[name], i))
            elif name in _FUNC_COMMANDS or name in _FRAC_COMMANDS \
                    or name in _WRAP_COMMANDS or name in ("pi", "sqrt"):
                tokens.append(_Token("COMMAND", name, i))
            else:
                raise UnsupportedConstruct("\\" + name, i)
            i = end
            continue
        m = _NUMBER_RE.match(source, i)
        if m:
            tokens.append(_Token("NUMBER", m.group(0), i))
            i = m.end()
            continue
        if ch.isascii() and ch.isalpha():
            tokens.append(_Token("LETTER", ch, i))
            i += 1
            continue
        if ch == "π":
            tokens.append(_Token("COMMAND", "pi", i))
            i += 1
            continue
        if ch in GREEK_BY_CHAR:
            tokens.append(_Token("GREEK", ch, i))
            i += 1
            continue
        if ch in _SYMBOLS:
            tokens.append(_Token("SYMBOL", ch, i))
            i += 1
            continue
        raise UnsupportedConstruct(ch, i)
    return tokens


class _Parser:
    def __init__(self, tokens: List[_Token], source: str):
        self.tokens = tokens
        self.source = source
        self.pos = 0
        self._abs_depth = 0

    # --- token helpers -------------------------------------------------

    def _peek(self, ahead: int = 0) -> Optional[_Token]:
        idx = self.pos + ahead
        return self.tokens[idx] if idx < len(self.tokens) else None

    def _next(self) -> _Token:
        tok = self._peek()
        if tok is None:
            raise LatexSyntaxError("unexpected end of input", len(self.source))
        self.pos += 1
        return tok

    def _at_symbol(self, ch: str) -> bool:
        tok = self._peek()
        return tok is not None and tok.kind == "SYMBOL" and tok.value == ch

    def _expect_symbol(self, ch: str) -> None:
        tok = self._peek()
        if tok is None or tok.kind != "SYMBOL" or tok.value != ch:
            where = tok.pos if tok else len(self.source)
            raise LatexSyntaxError(f"expected {ch!r}", where)
        self.pos += 1

    # --- entry ----------------------------------------------------------

    def parse_equation(self) -> Equation:
        sides: List[Node] = []
        header = self._maybe_header()
        if header is not None:
            sides.append(header)
            self._expect_symbol("=")
        sides.append(self.parse_expr())
        while self._at_symbol("="):
            self._next()
            sides.append(self.parse_expr())
        tok = self._peek()
        if tok is not None:
            raise LatexSyntaxError(f"unexpected {tok.value!r}", tok.pos)
        return Equation(tuple(sides))

    def _maybe_header(self) -> Optional[FuncHeader]:
        saved = self.pos
        try:
            name = self._maybe_plain_name()
            if name is None or not self._at_symbol("("):
                raise LookupError
            self._next()
            params = []
            while True:
                param = self._maybe_plain_name()
                if param is None:
                    raise LookupError
                params.append(param)
                if self._at_symbol(","):
                    self._next()
                    continue
                break
            if not self._at_symbol(")"):
                raise LookupError
            self._next()
            if not self._at_symbol("="):
                raise LookupError
            return FuncHeader(name, tuple(params))
        except (LookupError, LatexSyntaxError):
            self.pos = saved
            return None

    def _maybe_plain_name(self) -> Optional[str]:
        tok = self._peek()
        if tok is None or tok.kind not in ("LETTER", "GREEK"):
            return None
        self._next()
        return self._with_subscript(tok.value)

    # --- expression levels ----------------------------------------------

    def parse_expr(self) -> Node:
        node = self._signed_term()
        while True:
            tok = self._peek()
            if tok is not None and tok.kind == "SYMBOL" and tok.value in ("+", "-"):
                self._next()
                rhs = self._signed_term()
                node = BinOp(tok.value, node, rhs)
            else:
                return node

    def _signed_term(self) -> Node:
        if self._at_symbol("-"):
            self._next()
            return Unary("-", self._parse_term())
        if self._at_symbol("+"):
            self._next()
        return self._parse_term()

    def _parse_term(self) -> Node:
        node = self._parse_factor()
        while True:
            tok = self._peek()
            if tok is not None and tok.kind == "SYMBOL" and tok.value in ("*", "/"):
                self._next()
                rhs = self._signed_factor()
                node = BinOp(tok.value, node, rhs)
            elif self._starts_factor():
                node = BinOp("*", node, self._parse_factor())
            else:
                return node

    def _signed_factor(self) -> Node:
        if self._at_symbol("-"):
            self._next()
            return Unary("-", self._parse_factor())
        return self._parse_factor()

    def _starts_factor(self) -> bool:
        tok = self._peek()
        if tok is None:
            return False
        if tok.kind in ("NUMBER", "LETTER", "GREEK", "COMMAND"):
            return True
        if tok.kind == "SYMBOL":
            if tok.value in ("(", "[", "{", "L|"):
                return True
            if tok.value == "|" and self._abs_depth == 0:
                return True
        return False

    def _parse_factor(self) -> Node:
        node = self._parse_atom()
        exponents: List[Node] = []
        while self._at_symbol("^"):
            self._next()
            exponents.append(self._parse_exponent())
        if exponents:
            # chained superscripts associate to the right
            exp = exponents.pop()
            while exponents:
                exp = BinOp("^", exponents.pop(), exp)
            node = BinOp("^", node, exp)
        return node

    def _parse_exponent(self) -> Node:
        if self._at_symbol("{"):
            self._next()
            node = self.parse_expr()
            self._expect_symbol("}")
            return node
        tok = self._peek()
        if tok is None:
            raise LatexSyntaxError("missing exponent", len(self.source))
        if tok.kind == "NUMBER":
            self._next()
            return Num(float(tok.value))
        if tok.kind in ("LETTER", "GREEK"):
            self._next()
            return Ident(tok.value)
        if tok.kind == "COMMAND" and tok.value == "pi":
            self._next()
            return Const("pi")
        raise LatexSyntaxError("exponent must be a brace group or single token", tok.pos)

    # --- atoms ------------------------------------------------------------

    def _parse_atom(self) -> Node:
        tok = self._peek()
        if tok is None:
            raise LatexSyntaxError("unexpected end of input", len(self.source))
        if tok.kind == "NUMBER":
            self._next()
            return Num(float(tok.value))
        if tok.kind in ("LETTER", "GREEK"):
            self._next()
            name = self._with_subscript(tok.value)
            if name == "e" and self._at_symbol("^"):
                return Const("e")
            return Ident(name)
        if tok.kind == "COMMAND":
            return self._parse_command_atom(tok)
        if tok.kind == "SYMBOL":
            if tok.value == "(":
                self._next()
                node = self.parse_expr()
                self._expect_symbol(")")
                return node
            if tok.value == "[":
                self._next()
                node = self.parse_expr()
                self._expect_symbol("]")
                return node
            if tok.value == "{":
                self._next()
                node = self.parse_expr()
                self._expect_symbol("}")
                return node
            if tok.value == "L|":
                self._next()
                node = self.parse_expr()
                self._expect_symbol("R|")
                return Call("abs", node)
            if tok.value == "|" and self._abs_depth == 0:
                self._next()
                self._abs_depth += 1
                try:
                    node = self.parse_expr()
                finally:
                    self._abs_depth -= 1
                self._expect_symbol("|")
                return Call("abs", node)
        raise LatexSyntaxError(f"unexpected {tok.value!r}", tok.pos)

    def _parse_command_atom(self, tok: _Token) -> Node:
        name = tok.value
        if name == "pi":
            self._next()
            return Const("pi")
        if name in _FRAC_COMMANDS:
            self._next()
            numerator = self._parse_group_or_token()
            denominator = self._parse_group_or_token()
            return Frac(numerator, denominator)
        if name == "sqrt":
            self._next()
            index = None
            if self._at_symbol("["):
                self._next()
                index = self.parse_expr()
                self._expect_symbol("]")
            arg = self._parse_group_or_token()
            if index is None:
                return Call("sqrt", arg)
            return BinOp("^", arg, Frac(Num(1.0), index))
        if name in _FUNC_COMMANDS:
            self._next()
            power = None
            if self._at_symbol("^"):
                self._next()
                power = self._parse_exponent()
            arg = self._parse_factor()
            node: Node = Call(name, arg)
            if power is not None:
                node = BinOp("^", node, power)
            return node
        if name in _WRAP_COMMANDS:
            self._next()
            word = self._parse_wrapped_word(tok.pos)
            if word == "e":
                return Const("e")
            base = self._with_subscript(word)
            return Ident(base)
        raise LatexSyntaxError(f"unexpected \\{name}", tok.pos)

    def _parse_group_or_token(self) -> Node:
        """One argument of \\frac or \\sqrt: a brace group or a single token."""
        if self._at_symbol("{"):
            self._next()
            node = self.parse_expr()
            self._expect_symbol("}")
            return node
        tok = self._peek()
        if tok is None:
            raise LatexSyntaxError("missing argument", len(self.source))
        if tok.kind == "NUMBER":
            self._next()
            return Num(float(tok.value))
        if tok.kind in ("LETTER", "GREEK"):
            self._next()
            return Ident(tok.value)
        if tok.kind == "COMMAND" and tok.value == "pi":
            self._next()
            return Const("pi")
        raise LatexSyntaxError("argument must be a brace group or single token", tok.pos)

    def _parse_wrapped_word(self, at: int) -> str:
        if self._at_symbol("{"):
            self._next()
            parts = []
            while not self._at_symbol("}"):
                tok = self._peek()
                if tok is None:
                    raise LatexSyntaxError("unterminated group", at)
                if tok.kind in ("LETTER", "GREEK", "NUMBER"):
                    parts.append(tok.value)
                    self._next()
                else:
                    raise UnsupportedConstruct(tok.value, tok.pos)
            self._next()
            if not parts:
                raise LatexSyntaxError("empty text group", at)
            return "".join(parts)
        tok = self._peek()
        if tok is not None and tok.kind in ("LETTER", "GREEK"):
            self._next()
            return tok.value
        where = tok.pos if tok else len(self.source)
        raise LatexSyntaxError("expected a letter or brace group", where)

    def _with_subscript(self, base: str) -> str:
        if not self._at_symbol("_"):
            return base
        self._next()
        if self._at_symbol("{"):
            sub = self._parse_wrapped_word(self._peek().pos if self._peek() else 0)
            # _parse_wrapped_word consumed "{..}" starting at "{"
            return f"{base}_{sub}"
        tok = self._peek()
        if tok is None:
            raise LatexSyntaxError("missing subscript", len(self.source))
        if tok.kind in ("LETTER", "GREEK", "NUMBER"):
            self._next()
            return f"{base}_{tok.value}"
        if tok.kind == "COMMAND" and tok.value in _WRAP_COMMANDS:
            self._next()
            word = self._parse_wrapped_word(tok.pos)
            return f"{base}_{word}"
        raise LatexSyntaxError("bad subscript", tok.pos)


def parse_latex(source: str) -> Equation:
    """Parse a LaTeX formula (an expression or an equation chain).

    Raises LatexSyntaxError for structurally broken input and
    UnsupportedConstruct for anything outside the subset.
    """
    if not isinstance(source, str):
        raise TypeError("formula source must be a string")
    tokens = _lex(source)
    if not tokens:
        raise LatexSyntaxError("empty formula", 0)
    return _Parser(tokens, source).parse_equation()
