"""Recursive-descent parser for processes, session types and environments.

The concrete grammar is documented in docs/formats.md.  ``P | Q`` has the
lowest precedence; the bodies of prefixes, ``rec`` and ``if`` are
prefix-level, so a parallel composition there needs parentheses.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .ops import is_closed, is_contractive
from .terms import (
    Apply, Binary, BoolV, Bra, Branch, Chan, END, If, In, INACT, IntV, Lit, Mu,
    Out, Par, Polarity, PRec, PVar, Rec, Recv, Select, Send, Sel, SymV, TVar,
    Unary, Var,
)


class ParseError(Exception):
    def __init__(self, msg, line=0, col=0):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


KEYWORDS = {"rec", "loop", "if", "then", "else", "invariant", "mu", "end",
            "not", "true", "false"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><<|>>|<=|>=|&&|\|\||[-+*=<>!?(){}\[\],;:.|&'])
""", re.VERBOSE)


@dataclass
class Tok:
    kind: str  # int, ident, op, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            toks.append(Tok(kind, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rindex("\n") + 1
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - line_start + 1))
    return toks


_BINARY_LEVELS = [
    ("||",),
    ("&&",),
    ("=", "<", "<=", ">", ">="),
    ("+", "-"),
    ("*",),
]


class Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers
    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text) -> bool:
        t = self.tok
        return t.kind in ("op", "ident") and t.text == text

    def error(self, msg, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ParseError(f"{msg} (found {found!r})", tok.line, tok.col)

    def expect(self, text) -> Tok:
        if not self.at(text):
            self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def accept(self, text) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def ident(self, what="identifier") -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.error(f"expected {what}")
        self.i += 1
        return t.text

    def done(self):
        if self.tok.kind != "eof":
            self.error("unexpected trailing input")

    # -- channels
    def chan(self) -> Chan:
        name = self.ident("channel name")
        if self.at("+"):
            self.i += 1
            return Chan(name, Polarity.PLUS)
        if self.at("-"):
            self.i += 1
            return Chan(name, Polarity.MINUS)
        self.error("expected polarity '+' or '-' after channel name")

    # -- processes
    def process(self):
        p = self.prefix()
        while self.accept("|"):
            p = Par(p, self.prefix())
        return p

    def prefix(self):
        t = self.tok
        if t.kind == "int":
            if t.text != "0":
                self.error("expected process")
            self.i += 1
            return INACT
        if self.accept("("):
            p = self.process()
            self.expect(")")
            return p
        if self.accept("rec"):
            x = self.ident("process variable")
            inv = None
            if self.accept("invariant"):
                inv = self.label_set("{", "}")
            self.expect(".")
            return Rec(x, self.prefix(), inv)
        if self.accept("loop"):
            x = self.ident("process variable")
            self.expect("(")
            idx = self.ident("loop index")
            self.expect("<")
            bound = self.expr()
            self.expect(")")
            self.expect("{")
            body = self.process()
            self.expect("}")
            self.expect("then")
            self.expect("{")
            after = self.process()
            self.expect("}")
            return PRec(x, idx, bound, body, after)
        if self.accept("if"):
            c = self.expr()
            self.expect("then")
            p = self.prefix()
            self.expect("else")
            return If(c, p, self.prefix())
        if t.kind == "ident" and t.text not in KEYWORDS:
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text == "(":
                return self.pvar()
            k = self.chan()
            return self.action(k)
        self.error("expected process")

    def pvar(self):
        x = self.ident("process variable")
        self.expect("(")
        chans = []
        if not self.at(")"):
            chans.append(self.chan())
            while self.accept(","):
                chans.append(self.chan())
        self.expect(")")
        return PVar(x, tuple(chans))

    def action(self, k):
        if self.accept("!"):
            self.expect("(")
            e = self.expr()
            self.expect(")")
            self.expect(".")
            return Send(k, e, self.prefix())
        if self.accept("?"):
            self.expect("(")
            x = self.ident("data variable")
            self.expect(")")
            self.expect(".")
            return Recv(k, x, self.prefix())
        if self.accept("<<"):
            lab = self.ident("label")
            self.expect(".")
            return Sel(k, lab, self.prefix())
        if self.accept(">>"):
            start = self.tok
            self.expect("{")
            arms = []
            seen = set()
            while True:
                lt = self.tok
                lab = self.ident("label")
                if lab in seen:
                    raise ParseError(f"duplicate branch label {lab!r}", lt.line, lt.col)
                seen.add(lab)
                self.expect(":")
                arms.append((lab, self.process()))
                if not self.accept(","):
                    break
            self.expect("}")
            if not arms:
                self.error("empty branch", start)
            return Bra(k, tuple(arms))
        self.error("expected one of '!', '?', '<<', '>>' after channel")

    def label_set(self, open_, close):
        self.expect(open_)
        out = []
        if not self.at(close):
            out.append(self.ident("label"))
            while self.accept(","):
                out.append(self.ident("label"))
        self.expect(close)
        return frozenset(out)

    # -- expressions
    def expr(self, level=0):
        if level == len(_BINARY_LEVELS):
            return self.unary()
        left = self.expr(level + 1)
        while self.tok.kind == "op" and self.tok.text in _BINARY_LEVELS[level]:
            op = self.tok.text
            self.i += 1
            left = Binary(op, left, self.expr(level + 1))
        return left

    def unary(self):
        if self.accept("not"):
            return Unary("not", self.unary())
        if self.at("-"):
            if self.peek().kind == "int":
                self.i += 1
                n = int(self.tok.text)
                self.i += 1
                return Lit(IntV(-n))
            self.i += 1
            return Unary("-", self.unary())
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Lit(IntV(int(t.text)))
        if self.accept("true"):
            return Lit(BoolV(True))
        if self.accept("false"):
            return Lit(BoolV(False))
        if self.at("'"):
            return Lit(self.value())
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.i += 1
            if self.accept("("):
                args = []
                if not self.at(")"):
                    args.append(self.expr())
                    while self.accept(","):
                        args.append(self.expr())
                self.expect(")")
                return Apply(t.text, tuple(args))
            return Var(t.text)
        self.error("expected expression")

    def value(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return IntV(int(t.text))
        if self.at("-") and self.peek().kind == "int":
            self.i += 1
            n = int(self.tok.text)
            self.i += 1
            return IntV(-n)
        if self.accept("true"):
            return BoolV(True)
        if self.accept("false"):
            return BoolV(False)
        if self.accept("'"):
            name = self.ident("constructor name")
            args = []
            if self.accept("("):
                if not self.at(")"):
                    args.append(self.value())
                    while self.accept(","):
                        args.append(self.value())
                self.expect(")")
            return SymV(name, tuple(args))
        self.error("expected value")

    # -- types
    def stype(self):
        t = self.tok
        if self.accept("end"):
            return END
        if self.accept("!"):
            self.expect(".")
            return Out(self.stype())
        if self.accept("?"):
            self.expect(".")
            return In(self.stype())
        if self.at("&") or self.at("+"):
            ctor = Branch if self.tok.text == "&" else Select
            self.i += 1
            self.expect("{")
            arms = []
            seen = set()
            while True:
                lt = self.tok
                lab = self.ident("label")
                if lab in seen:
                    raise ParseError(f"duplicate label {lab!r}", lt.line, lt.col)
                seen.add(lab)
                resp = frozenset()
                if self.at("["):
                    self.i += 1
                    braced = self.accept("{")
                    items = []
                    if not self.at("}" if braced else "]"):
                        items.append(self.ident("label"))
                        while self.accept(","):
                            items.append(self.ident("label"))
                    if braced:
                        self.expect("}")
                    self.expect("]")
                    resp = frozenset(items)
                self.expect(".")
                arms.append((lab, resp, self.stype()))
                if not self.accept(","):
                    break
            self.expect("}")
            return ctor(tuple(arms))
        if self.accept("mu"):
            v = self.ident("type variable")
            self.expect(".")
            return Mu(v, self.stype())
        if self.accept("("):
            s = self.stype()
            self.expect(")")
            return s
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.i += 1
            return TVar(t.text)
        self.error("expected session type")


def _check_type(t, tok):
    if not is_contractive(t):
        raise ParseError("type is not contractive", tok.line, tok.col)
    if not is_closed(t):
        raise ParseError("type has free type variables", tok.line, tok.col)
    return t


def parse_process(text: str):
    ps = Parser(text)
    p = ps.process()
    ps.done()
    return p


def parse_expr(text: str):
    ps = Parser(text)
    e = ps.expr()
    ps.done()
    return e


def parse_type(text: str):
    ps = Parser(text)
    start = ps.tok
    t = ps.stype()
    ps.done()
    return _check_type(t, start)


def parse_env(text: str) -> dict:
    """Entries ``k+ : T``, optionally separated by ``,`` or ``;``."""
    ps = Parser(text)
    env = {}
    while ps.tok.kind != "eof":
        start = ps.tok
        k = ps.chan()
        if k in env:
            raise ParseError(f"duplicate entry for {k}", start.line, start.col)
        ps.expect(":")
        tstart = ps.tok
        env[k] = _check_type(ps.stype(), tstart)
        ps.accept(",") or ps.accept(";")
    return env


def parse_value(text: str):
    ps = Parser(text)
    v = ps.value()
    ps.done()
    return v


def parse_values(text: str) -> tuple:
    """A comma-separated value list such as ``0,1,true,'item(2)``."""
    ps = Parser(text)
    if ps.tok.kind == "eof":
        raise ParseError("empty value list", 1, 1)
    out = [ps.value()]
    while ps.accept(","):
        out.append(ps.value())
    ps.done()
    return tuple(out)
