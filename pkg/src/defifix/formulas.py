"""First-order formulas over the language of rings: AST, parser, printer,
and brute-force evaluation over finite fields.

Grammar (precedence from loosest to tightest):

    formula := "exists" var "." formula | "forall" var "." formula | disj
    disj    := conj ("|" conj)*
    conj    := impl ("&" impl)*
    impl    := lit (("->" | "<->") lit)?
    lit     := "~" lit | "(" formula ")" | atom
    atom    := term ("=" | "!=") term | NAME "(" term ("," term)* ")"
    term    := polynomial over "+ - * ^" , variables, integer constants,
               and division by nonzero integer constants (rationals)

"a != b" is sugar for "~(a = b)" and the printer emits it back in that
form. Conjunction and disjunction chains are stored as n-ary nodes in
source order; parenthesized groups stay nested, so parse(print(f)) is a
structural identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import EvaluationError, FormulaSyntaxError, InfiniteFieldError
from .fields import FieldDescriptor, FieldElement, enumerate_elements
from .terms import Term

Formula = Union[
    "Equal", "PredicateApp", "Not", "And", "Or", "Implies", "Iff", "Exists", "ForAll"
]


@dataclass(frozen=True)
class Equal:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class PredicateApp:
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Not:
    body: Formula


@dataclass(frozen=True)
class And:
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Or:
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Implies:
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff:
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula


@dataclass(frozen=True)
class ForAll:
    var: str
    body: Formula


def conj(parts) -> Formula:
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else And(parts)


def disj(parts) -> Formula:
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else Or(parts)


# -- tokenizer ---------------------------------------------------------------

_KEYWORDS = {"exists", "forall"}


@dataclass(frozen=True)
class _Token:
    kind: str  # NAME INT PUNCT END
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        start_line, start_col = line, col
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if text[i : i + 3] == "<->":
            tokens.append(_Token("PUNCT", "<->", start_line, start_col))
            i, col = i + 3, col + 3
            continue
        if text[i : i + 2] in ("->", "!="):
            tokens.append(_Token("PUNCT", text[i : i + 2], start_line, start_col))
            i, col = i + 2, col + 2
            continue
        if c in "()+-*^=,.|&~/":
            tokens.append(_Token("PUNCT", c, start_line, start_col))
            i, col = i + 1, col + 1
            continue
        raise FormulaSyntaxError(f"unexpected character {c!r}", line, col)
    tokens.append(_Token("END", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            found = tok.text or "end of input"
            raise FormulaSyntaxError(f"expected {text!r}, found {found!r}", tok.line, tok.col)
        return self.next()

    def error(self, message: str):
        tok = self.peek()
        raise FormulaSyntaxError(message, tok.line, tok.col)

    # -- formula levels ----------------------------------------------------

    def formula(self) -> Formula:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text in _KEYWORDS:
            self.next()
            var = self.peek()
            if var.kind != "NAME" or var.text in _KEYWORDS:
                self.error("expected a variable name after quantifier")
            self.next()
            self.expect(".")
            body = self.formula()
            return Exists(var.text, body) if tok.text == "exists" else ForAll(var.text, body)
        return self.disj()

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.peek().text == "|":
            self.next()
            parts.append(self.conj())
        return disj(parts)

    def conj(self) -> Formula:
        parts = [self.impl()]
        while self.peek().text == "&":
            self.next()
            parts.append(self.impl())
        return conj(parts)

    def impl(self) -> Formula:
        left = self.lit()
        tok = self.peek()
        if tok.text == "->":
            self.next()
            return Implies(left, self.lit())
        if tok.text == "<->":
            self.next()
            return Iff(left, self.lit())
        return left

    def lit(self) -> Formula:
        tok = self.peek()
        if tok.text == "~":
            self.next()
            return Not(self.lit())
        if tok.text == "(":
            # Could open a parenthesized term ("(x+1)*y = 0") or a
            # parenthesized formula; try the atom reading first.
            saved = self.pos
            try:
                return self.atom()
            except FormulaSyntaxError:
                self.pos = saved
            self.next()
            inner = self.formula()
            self.expect(")")
            return inner
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if (
            tok.kind == "NAME"
            and tok.text not in _KEYWORDS
            and self.tokens[self.pos + 1].text == "("
        ):
            name = self.next().text
            self.expect("(")
            args = [self.term()]
            while self.peek().text == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
            return PredicateApp(name, tuple(args))
        lhs = self.term()
        op = self.peek()
        if op.text == "=":
            self.next()
            return Equal(lhs, self.term())
        if op.text == "!=":
            self.next()
            return Not(Equal(lhs, self.term()))
        self.error("expected '=' or '!=' after term")

    # -- term levels ---------------------------------------------------------

    def term(self) -> Term:
        t = self.product()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            rhs = self.product()
            t = t + rhs if op == "+" else t - rhs
        return t

    def product(self) -> Term:
        t = self.factor()
        while self.peek().text in ("*", "/"):
            op = self.next().text
            rhs = self.factor()
            if op == "*":
                t = t * rhs
            else:
                if not rhs.is_constant or rhs.is_zero:
                    self.error("division only by nonzero integer constants")
                t = t * Term.constant(Fraction(1, 1) / Fraction(rhs.constant_value()))
        return t

    def factor(self) -> Term:
        tok = self.peek()
        if tok.text == "-":
            self.next()
            return -self.factor()
        base = self.base()
        if self.peek().text == "^":
            self.next()
            exp = self.peek()
            if exp.kind != "INT":
                self.error("expected an integer exponent")
            self.next()
            return base ** int(exp.text)
        return base

    def base(self) -> Term:
        tok = self.peek()
        if tok.kind == "INT":
            self.next()
            return Term.constant(int(tok.text))
        if tok.kind == "NAME" and tok.text not in _KEYWORDS:
            self.next()
            return Term.variable(tok.text)
        if tok.text == "(":
            self.next()
            inner = self.term()
            self.expect(")")
            return inner
        self.error("expected a term")


def parse(text: str) -> Formula:
    parser = _Parser(text)
    f = parser.formula()
    tok = parser.peek()
    if tok.kind != "END":
        raise FormulaSyntaxError(f"unexpected trailing input {tok.text!r}", tok.line, tok.col)
    return f


def parse_term(text: str) -> Term:
    """Parse a bare polynomial term (the grammar's term level only)."""
    parser = _Parser(text)
    t = parser.term()
    tok = parser.peek()
    if tok.kind != "END":
        raise FormulaSyntaxError(f"unexpected trailing input {tok.text!r}", tok.line, tok.col)
    return t


# -- printer -----------------------------------------------------------------

_QUANT, _OR, _AND, _IMPL, _LIT = 0, 1, 2, 3, 4


def _level(f: Formula) -> int:
    if isinstance(f, (Exists, ForAll)):
        return _QUANT
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    if isinstance(f, (Implies, Iff)):
        return _IMPL
    return _LIT


def _wrap(f: Formula, minimum: int) -> str:
    text = print_formula(f)
    return f"({text})" if _level(f) < minimum else text


def print_formula(f: Formula) -> str:
    """Canonical text; parse(print_formula(f)) is structurally f."""
    if isinstance(f, (Exists, ForAll)):
        word = "exists" if isinstance(f, Exists) else "forall"
        body = print_formula(f.body)
        if _QUANT < _level(f.body) < _LIT:
            body = f"({body})"
        return f"{word} {f.var}. {body}"
    if isinstance(f, Or):
        return " | ".join(_wrap(p, _AND) for p in f.parts)
    if isinstance(f, And):
        return " & ".join(_wrap(p, _IMPL) for p in f.parts)
    if isinstance(f, Implies):
        return f"{_wrap(f.lhs, _LIT)} -> {_wrap(f.rhs, _LIT)}"
    if isinstance(f, Iff):
        return f"{_wrap(f.lhs, _LIT)} <-> {_wrap(f.rhs, _LIT)}"
    if isinstance(f, Not):
        if isinstance(f.body, Equal):
            return f"{f.body.lhs} != {f.body.rhs}"
        return f"~{_wrap(f.body, _LIT)}"
    if isinstance(f, Equal):
        return f"{f.lhs} = {f.rhs}"
    if isinstance(f, PredicateApp):
        return f"{f.name}(" + ", ".join(str(a) for a in f.args) + ")"
    raise TypeError(f"not a formula: {f!r}")


# -- structural helpers --------------------------------------------------------


def free_variables(f: Formula) -> set[str]:
    if isinstance(f, Equal):
        return f.lhs.free_variables() | f.rhs.free_variables()
    if isinstance(f, PredicateApp):
        out: set[str] = set()
        for a in f.args:
            out |= a.free_variables()
        return out
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, (And, Or)):
        out = set()
        for p in f.parts:
            out |= free_variables(p)
        return out
    if isinstance(f, (Implies, Iff)):
        return free_variables(f.lhs) | free_variables(f.rhs)
    if isinstance(f, (Exists, ForAll)):
        return free_variables(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def all_variables(f: Formula) -> set[str]:
    """Free and bound variable names together."""
    if isinstance(f, Equal):
        return f.lhs.free_variables() | f.rhs.free_variables()
    if isinstance(f, PredicateApp):
        out: set[str] = set()
        for a in f.args:
            out |= a.free_variables()
        return out
    if isinstance(f, Not):
        return all_variables(f.body)
    if isinstance(f, (And, Or)):
        out = set()
        for p in f.parts:
            out |= all_variables(p)
        return out
    if isinstance(f, (Implies, Iff)):
        return all_variables(f.lhs) | all_variables(f.rhs)
    if isinstance(f, (Exists, ForAll)):
        return all_variables(f.body) | {f.var}
    raise TypeError(f"not a formula: {f!r}")


def desugar(f: Formula) -> Formula:
    """Rewrite Implies/Iff into ~, &, | (recursively)."""
    if isinstance(f, (Equal, PredicateApp)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, And):
        return And(tuple(desugar(p) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(desugar(p) for p in f.parts))
    if isinstance(f, Implies):
        return Or((Not(desugar(f.lhs)), desugar(f.rhs)))
    if isinstance(f, Iff):
        left, right = desugar(f.lhs), desugar(f.rhs)
        return Or((And((left, right)), And((Not(left), Not(right)))))
    if isinstance(f, Exists):
        return Exists(f.var, desugar(f.body))
    if isinstance(f, ForAll):
        return ForAll(f.var, desugar(f.body))
    raise TypeError(f"not a formula: {f!r}")


def substitute_terms(f: Formula, mapping: dict[str, Term]) -> Formula:
    """Substitute terms for free variables; quantifiers shadow as usual.

    The caller is responsible for ensuring bound variables do not capture
    substituted names (use fresh bound names when in doubt).
    """
    if isinstance(f, Equal):
        return Equal(f.lhs.substitute(mapping), f.rhs.substitute(mapping))
    if isinstance(f, PredicateApp):
        return PredicateApp(f.name, tuple(a.substitute(mapping) for a in f.args))
    if isinstance(f, Not):
        return Not(substitute_terms(f.body, mapping))
    if isinstance(f, And):
        return And(tuple(substitute_terms(p, mapping) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(substitute_terms(p, mapping) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(substitute_terms(f.lhs, mapping), substitute_terms(f.rhs, mapping))
    if isinstance(f, Iff):
        return Iff(substitute_terms(f.lhs, mapping), substitute_terms(f.rhs, mapping))
    if isinstance(f, (Exists, ForAll)):
        inner = {v: t for v, t in mapping.items() if v != f.var}
        node = Exists if isinstance(f, Exists) else ForAll
        return node(f.var, substitute_terms(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


# -- semantics -----------------------------------------------------------------

Interpretation = dict[str, set]


def evaluate(
    f: Formula,
    K: FieldDescriptor,
    assignment: dict[str, FieldElement] | None = None,
    interp: Interpretation | None = None,
) -> bool:
    """Truth value under an assignment; quantifiers range over all of K
    (finite fields only). Predicate symbols are looked up in `interp` as
    sets of elements (unary) or of element tuples."""
    assignment = dict(assignment or {})
    interp = interp or {}

    def run(f: Formula) -> bool:
        if isinstance(f, Equal):
            return f.lhs.evaluate(assignment, K) == f.rhs.evaluate(assignment, K)
        if isinstance(f, PredicateApp):
            if f.name not in interp:
                raise EvaluationError(f"predicate {f.name!r} has no interpretation")
            values = tuple(a.evaluate(assignment, K) for a in f.args)
            table = interp[f.name]
            if len(values) == 1:
                return values[0] in table or values in table
            return values in table
        if isinstance(f, Not):
            return not run(f.body)
        if isinstance(f, And):
            return all(run(p) for p in f.parts)
        if isinstance(f, Or):
            return any(run(p) for p in f.parts)
        if isinstance(f, Implies):
            return (not run(f.lhs)) or run(f.rhs)
        if isinstance(f, Iff):
            return run(f.lhs) == run(f.rhs)
        if isinstance(f, (Exists, ForAll)):
            if not K.is_finite:
                raise InfiniteFieldError("quantifier evaluation needs a finite field")
            shadowed = assignment.get(f.var)
            had = f.var in assignment
            try:
                for a in enumerate_elements(K):
                    assignment[f.var] = a
                    if run(f.body):
                        if isinstance(f, Exists):
                            return True
                    elif isinstance(f, ForAll):
                        return False
                return isinstance(f, ForAll)
            finally:
                if had:
                    assignment[f.var] = shadowed
                else:
                    assignment.pop(f.var, None)
        raise TypeError(f"not a formula: {f!r}")

    return run(f)


def definable_set(
    f: Formula,
    K: FieldDescriptor,
    free_var: str,
    interp: Interpretation | None = None,
) -> set[FieldElement]:
    """{a in K : f holds at free_var=a}, by brute force."""
    fv = free_variables(f)
    if fv != {free_var}:
        raise EvaluationError(
            f"expected exactly one free variable {free_var!r}, found {sorted(fv)}"
        )
    if not K.is_finite:
        raise InfiniteFieldError("definable_set needs a finite field")
    out = set()
    for a in enumerate_elements(K):
        if evaluate(f, K, {free_var: a}, interp):
            out.add(a)
    return out
