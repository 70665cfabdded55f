"""Recogniser for literal-only constant expressions inside macro arguments.

Grammar (no names, no calls, no casts)::

    expr    := unary (BINOP unary)*
    unary   := ("-" | "!")* primary
    primary := LITERAL | "(" expr ")"
"""
from __future__ import annotations

import re

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<float>(?:\d[\d_]*\.\d[\d_]*(?:[eE][+-]?\d[\d_]*)?|\d[\d_]*[eE][+-]?\d[\d_]*)(?:f32|f64)?|\d[\d_]*(?:f32|f64))
  | (?P<int>(?:0x[0-9a-fA-F_]+|0o[0-7_]+|0b[01_]+|\d[\d_]*)(?:[ui](?:8|16|32|64|128|size))?)
  | (?P<bool>\b(?:true|false)\b)
  | (?P<char>b?'(?:\\(?:[nrt0\\'"]|x[0-9a-fA-F]{2}|u\{[0-9a-fA-F]{1,6}\})|[^\\'])')
  | (?P<op><<|>>|==|!=|<=|>=|&&|\|\||[-+*/%&|^<>!()])
  | (?P<other>.)
    """,
    re.X | re.S,
)
_BINOPS = frozenset({"+", "-", "*", "/", "%", "&", "|", "^", "<<", ">>", "==", "!=", "<", ">", "<=", ">=", "&&", "||"})
_LITERALS = ("float", "int", "bool", "char")


def tokenize(text: str) -> list[tuple[str, str]] | None:
    """Token list, or ``None`` if the text contains anything outside the grammar's alphabet."""
    out = []
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "other":
            return None
        out.append(("lit" if kind in _LITERALS else "op", m.group()))
    return out


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.toks = tokens
        self.i = 0

    def peek(self) -> tuple[str, str] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def expr(self) -> bool:
        if not self.unary():
            return False
        while (t := self.peek()) is not None and t[0] == "op" and t[1] in _BINOPS:
            self.i += 1
            if not self.unary():
                return False
        return True

    def unary(self) -> bool:
        while self.peek() in (("op", "-"), ("op", "!")):
            self.i += 1
        return self.primary()

    def primary(self) -> bool:
        t = self.peek()
        if t is None:
            return False
        if t[0] == "lit":
            self.i += 1
            return True
        if t == ("op", "("):
            self.i += 1
            if not self.expr() or self.peek() != ("op", ")"):
                return False
            self.i += 1
            return True
        return False


def is_constant_expression(text: str) -> bool:
    toks = tokenize(text)
    if not toks:
        return False
    p = _Parser(toks)
    return p.expr() and p.i == len(toks)


def split_top_level(text: str) -> list[str]:
    """Split macro arguments on commas that are not nested in brackets or literals."""
    parts, cur, depth = [], [], 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "\"'":
            m = re.compile(r'"(?:\\.|[^"\\])*"' if ch == '"' else r"'(?:\\.|[^'\\])'").match(text, i)
            if m:
                cur.append(m.group())
                i = m.end()
                continue
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
        i += 1
    tail = "".join(cur)
    if tail.strip() or parts:
        parts.append(tail)
    return [p.strip() for p in parts]
