"""Recursive-descent parser for the formula language.

    sof     := ["EX" rdecl ("," rdecl)* "."] form
    form    := quant | binary
    quant   := ("E"|"A") VAR+ "." form
    binary  := unit (("&"|"|"|"->") unit)*      & > | > ->
    unit    := "(" form ")" | "~" unit | atom
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ArityError, ParseError
from .ast import (RESERVED_PREFIX, And, Dep, Eq, Exc, Exists, Forall, Inc,
                  Indep, Lit, Not, Or, SOFormula, UGame, free_variables,
                  rename_bound, relation_symbols)

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<arrow>->)
  | (?P<neq>!=)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<sym>[()&|~=.,;/])
""", re.VERBOSE)

TEAM_KEYWORDS = {"inc", "exc", "dep", "indep", "ugame"}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            if kind == "sym":
                kind = tok
            toks.append(Token(kind, tok, line, pos - line_start + 1))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1))
    return toks


class _SOQuant:
    def __init__(self, decls, body):
        self.decls, self.body = decls, body


class _Guarded:
    def __init__(self, guard, inner):
        self.guard, self.inner = guard, inner


class Parser:
    def __init__(self, text: str, allow_reserved=False, second_order=False):
        self.toks = tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved
        self.second_order = second_order

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        return ParseError(f"{msg} (found {found!r})", tok.line, tok.col)

    def expect(self, kind) -> Token:
        if self.tok.kind != kind:
            raise self.error(f"expected {kind!r}")
        t = self.tok
        self.i += 1
        return t

    def accept(self, kind) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def name(self, what="variable") -> str:
        t = self.expect("name") if self.tok.kind == "name" else None
        if t is None:
            raise self.error(f"expected {what}")
        if t.text.startswith(RESERVED_PREFIX) and not self.allow_reserved:
            raise ParseError(f"names starting with {RESERVED_PREFIX!r} are reserved", t.line, t.col)
        return t.text

    # grammar
    def parse_top(self):
        node = self.form()
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")
        return node

    def form(self):
        t = self.tok
        if t.kind == "name" and t.text in ("E", "A") and self.peek().kind == "name":
            self.i += 1
            vars = [self.name()]
            while self.tok.kind == "name":
                vars.append(self.name())
            self.expect(".")
            body = self.form()
            q = Exists if t.text == "E" else Forall
            for v in reversed(vars):
                body = q(v, body)
            return body
        if t.kind == "name" and t.text == "EX" and self.peek().kind == "name":
            if not self.second_order:
                raise self.error("second-order quantifier outside a second-order formula")
            self.i += 1
            decls = [self.rdecl()]
            while self.accept(","):
                decls.append(self.rdecl())
            self.expect(".")
            return _SOQuant(decls, self.form())
        return self.implication()

    def rdecl(self):
        n = self.name("relation name")
        self.expect("/")
        a = self.expect("int")
        return (n, int(a.text))

    def implication(self):
        left = self.disjunction()
        if self.tok.kind == "arrow":
            self.i += 1
            right = self.implication()
            if self.second_order:
                # resolved later, once the guard shape is known
                return _Guarded(left, right)
            return _arrow_node(left, right, self)
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.tok.kind == "|":
            self.i += 1
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unit()
        while self.tok.kind == "&":
            self.i += 1
            left = And(left, self.unit())
        return left

    def unit(self):
        t = self.tok
        if t.kind == "(":
            self.i += 1
            node = self.form()
            self.expect(")")
            return node
        if t.kind == "~":
            self.i += 1
            if self.tok.kind == "name" and self.peek().kind == "(" and self.tok.text not in TEAM_KEYWORDS:
                lit = self.atom()
                return lit.negate()
            return Not(self.unit())
        if t.kind == "name" and t.text in ("E", "A", "EX") and self.peek().kind == "name":
            return self.form()
        return self.atom()

    def terms(self):
        out = [self.name()]
        while self.accept(","):
            out.append(self.name())
        return tuple(out)

    def atom(self):
        t = self.tok
        if t.kind != "name":
            raise self.error("expected an atom")
        if self.peek().kind == "(":
            self.i += 2
            try:
                if t.text in TEAM_KEYWORDS:
                    node = self.team_atom(t)
                else:
                    if t.text.startswith(RESERVED_PREFIX) and not self.allow_reserved:
                        raise ParseError(f"names starting with {RESERVED_PREFIX!r} are reserved", t.line, t.col)
                    node = Lit(t.text, self.terms())
            except ArityError as e:
                if isinstance(e, ParseError) and e.line is not None:
                    raise
                raise ArityError(str(e), t.line, t.col) from None
            self.expect(")")
            return node
        left = self.name()
        if self.tok.kind == "=":
            self.i += 1
            return Eq(left, self.name())
        if self.tok.kind == "neq":
            self.i += 1
            return Eq(left, self.name(), False)
        raise self.error("expected '=' or '!=' after a variable")

    def team_atom(self, t):
        kw = t.text
        if kw == "ugame":
            k = int(self.expect("int").text)
            self.expect(";")
            return UGame(k, self.terms())
        left = self.terms()
        self.expect(";")
        if kw == "dep":
            right = self.terms()
            if len(right) != 1:
                raise ArityError("dep takes a single determined variable", t.line, t.col)
            return Dep(left, right[0])
        right = self.terms()
        return {"inc": Inc, "exc": Exc, "indep": Indep}[kw](left, right)


def _arrow_node(left, right, parser):
    from .nnf import arrow
    from ..errors import InvalidGuard
    if isinstance(left, (_SOQuant, _Guarded)) or isinstance(right, _Guarded):
        raise parser.error("misplaced second-order quantifier")
    try:
        return arrow(left, right)
    except InvalidGuard as e:
        raise parser.error(str(e)) from None


def _desugar(node, parser):
    """Turn leftover guard markers into arrows and reject nested SO quantifiers."""
    if isinstance(node, _SOQuant):
        raise ParseError("second-order quantifiers are only allowed at the top or right after a guard")
    if isinstance(node, _Guarded):
        return _arrow_node(_desugar(node.guard, parser), _desugar(node.inner, parser), parser)
    if isinstance(node, (And, Or)):
        return type(node)(_desugar(node.left, parser), _desugar(node.right, parser))
    if isinstance(node, (Exists, Forall)):
        return type(node)(node.var, _desugar(node.body, parser))
    if isinstance(node, Not):
        return Not(_desugar(node.body, parser))
    return node


def _normalize(phi, extra_free=()):
    return rename_bound(phi, set(free_variables(phi)) | set(extra_free))


def parse_formula(text: str, vocabulary=None, allow_reserved=False):
    """Parse a team-logic formula.

    Binders that shadow a free variable or an enclosing binder are renamed.
    ``vocabulary`` (a mapping or Vocabulary) is checked against relation arities.
    """
    p = Parser(text, allow_reserved=allow_reserved)
    phi = p.parse_top()
    try:
        syms = relation_symbols(phi)
    except ArityError as e:
        raise ArityError(str(e), 1, 1) from None
    if vocabulary is not None:
        _check_vocabulary(syms, vocabulary)
    return _normalize(phi)


def _check_vocabulary(syms, vocabulary):
    arity_of = vocabulary.arity if hasattr(vocabulary, "arity") else vocabulary.__getitem__
    for n, a in syms.items():
        try:
            want = arity_of(n)
        except Exception:
            continue
        if want != a:
            raise ArityError(f"relation {n!r} has arity {want} but is used with {a} arguments", 1, 1)


def parse_so_formula(text: str, free: str = "X", free_arity: int | None = None,
                     vocabulary=None, allow_reserved=False) -> SOFormula:
    """Parse ``EX R/k, ... . matrix`` or the guarded ``A x̄. (X(x̄) -> EX R̄. matrix)``."""
    from .nnf import to_nnf
    p = Parser(text, allow_reserved=allow_reserved, second_order=True)
    top = p.parse_top()

    guard = None
    node = top
    qvars = []
    while isinstance(node, Forall):
        qvars.append(node.var)
        node = node.body
    g = node.guard if isinstance(node, _Guarded) else None
    if (qvars and isinstance(g, Lit) and g.positive and g.symbol == free
            and g.terms == tuple(qvars) and len(set(qvars)) == len(qvars)):
        guard = tuple(qvars)
        node = node.inner
    else:
        node = top

    if isinstance(node, _SOQuant):
        decls, matrix = node.decls, node.body
    else:
        decls, matrix = [], node
    matrix = to_nnf(_desugar(matrix, p))
    try:
        syms = relation_symbols(matrix)
    except ArityError as e:
        raise ArityError(str(e), 1, 1) from None
    if guard is not None:
        syms.setdefault(free, len(guard))
    if free_arity is None:
        if free not in syms:
            raise ParseError(f"cannot infer the arity of {free}; it does not occur in the formula")
        free_arity = syms[free]
    if vocabulary is not None:
        _check_vocabulary({n: a for n, a in syms.items() if n != free and n not in dict(decls)}, vocabulary)
    matrix = _normalize(matrix, guard or ())
    try:
        return SOFormula(free, free_arity, tuple(decls), matrix, guard)
    except ArityError as e:
        raise ArityError(str(e), 1, 1) from None
