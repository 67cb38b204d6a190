"""Concrete ASCII syntax for terms, and the two-line term file format.

    expr    := unary (infix unary)*          infix: cap cup dotcap dotcup
    unary   := prefix unary | primary        prefix: not ex all ex1 ex0 all1 all0 E I s p
    primary := top | bot | NAME | '(' expr ')' | 'C' '(' expr ',' expr ')'

Infix operators share one precedence level and associate to the left.
"""
from __future__ import annotations

import re
from pathlib import Path

from .terms import BOT, TOP, Term, TermError, Vocabulary, check_vocabulary

PREFIX = frozenset(("not", "ex", "all", "ex1", "ex0", "all1", "all0", "E", "I", "s", "p"))
INFIX = frozenset(("cap", "cup", "dotcap", "dotcup"))

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<punct>[(),]))")


class TermSyntaxError(TermError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def tokenize(text: str):
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        out.append((m.group("name") or m.group("punct"), pos))
        pos = m.end()
    out.append(("<end>", len(text)))
    return out


class _Parser:
    def __init__(self, text, vocab):
        self.toks = tokenize(text)
        self.i = 0
        self.vocab = vocab

    def peek(self):
        return self.toks[self.i][0]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            raise TermSyntaxError(f"expected {expected!r}, found {tok!r}", pos)
        self.i += 1
        return tok

    def expr(self):
        left = self.unary()
        while self.peek() in INFIX:
            op = self.take()
            left = Term(op, (left, self.unary()))
        return left

    def unary(self):
        if self.peek() in PREFIX:
            op = self.take()
            return Term(op, (self.unary(),))
        return self.primary()

    def primary(self):
        tok, pos = self.toks[self.i]
        if tok == "(":
            self.take()
            t = self.expr()
            self.take(")")
            return t
        if tok == "top":
            self.take()
            return TOP
        if tok == "bot":
            self.take()
            return BOT
        if tok == "C":
            self.take()
            self.take("(")
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take(")")
            return Term("C", (a, b))
        if tok in INFIX or tok in (")", ",", "<end>"):
            raise TermSyntaxError(f"unexpected {tok!r}", pos)
        self.take()
        if tok not in self.vocab:
            raise TermSyntaxError(f"undeclared relation symbol {tok!r}", pos)
        return self.vocab.rel(tok)


def parse_term(text: str, vocab) -> Term:
    if not isinstance(vocab, Vocabulary):
        vocab = Vocabulary(vocab)
    p = _Parser(text, vocab)
    t = p.expr()
    tok, pos = p.toks[p.i]
    if tok != "<end>":
        raise TermSyntaxError(f"trailing input {tok!r}", pos)
    return t


def _operand(t: Term) -> str:
    s = print_term(t)
    return f"({s})" if t.op in INFIX else s


def print_term(t: Term) -> str:
    if t.op == "rel":
        return t.name
    if t.op in ("top", "bot"):
        return t.op
    if t.op == "C":
        return f"C({print_term(t.args[0])}, {print_term(t.args[1])})"
    if t.op in INFIX:
        return f"{print_term(t.args[0])} {t.op} {_operand(t.args[1])}"
    return f"{t.op} {_operand(t.args[0])}"


# -- term files -------------------------------------------------------------

def parse_vocab(text: str) -> Vocabulary:
    syms = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "/" not in part:
            raise TermError(f"bad vocabulary entry {part!r}, expected NAME/ARITY")
        name, ar = part.rsplit("/", 1)
        name = name.strip()
        if name in syms:
            raise TermError(f"duplicate symbol {name!r}")
        try:
            syms[name] = int(ar)
        except ValueError:
            raise TermError(f"bad arity in {part!r}") from None
    return Vocabulary(syms)


def loads_term_file(text: str) -> tuple[Term, Vocabulary]:
    vocab = None
    term_lines = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vocab:"):
            vocab = parse_vocab(line[len("vocab:"):])
        elif line.startswith("term:"):
            term_lines = [line[len("term:"):]]
        elif term_lines is not None:
            term_lines.append(line)
        else:
            raise TermError(f"unexpected line {raw!r}")
    if vocab is None or term_lines is None:
        raise TermError("term file needs a 'vocab:' line and a 'term:' line")
    return parse_term(" ".join(term_lines), vocab), vocab


def read_term_file(path) -> tuple[Term, Vocabulary]:
    return loads_term_file(Path(path).read_text(encoding="utf-8"))


def dumps_term_file(term: Term, vocab=None, header: str | None = None) -> str:
    if vocab is None:
        vocab = Vocabulary(term.symbols())
    check_vocabulary(term, vocab)
    lines = [f"# {header}"] if header else []
    lines.append(f"vocab: {vocab.text()}")
    lines.append(f"term: {print_term(term)}")
    return "\n".join(lines) + "\n"
