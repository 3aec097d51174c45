"""Syntax of the binary-diamond modal language: AST, parser, printer, desugaring.

Core connectives are negation, disjunction, and the binary diamond ``o``;
everything else (conjunction, implication, biconditional, constants, the two
hooks, and the box) is derived and expanded by :func:`desugar`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

#: Reserved letter backing the T / F constants; excluded from user inventories.
TOP_LETTER = "_top"

#: Identifier names with a fixed meaning in the concrete syntax.
RESERVED_WORDS = frozenset({"o", "T", "F"})

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


class Formula:
    """Base class of all formula nodes. Instances are immutable and hashable."""

    __slots__ = ()

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {render(self)!r}>"


@dataclass(frozen=True, repr=False)
class Letter(Formula):
    name: str

    def __post_init__(self):
        if not IDENT_RE.fullmatch(self.name) or self.name in RESERVED_WORDS:
            raise ValueError(f"invalid letter name: {self.name!r}")


@dataclass(frozen=True, repr=False)
class Neg(Formula):
    sub: Formula


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Comp(Formula):
    """Binary diamond: existential decomposition along the ternary relation."""

    left: Formula
    right: Formula


# -- derived connectives ----------------------------------------------------

@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Top(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    pass


@dataclass(frozen=True, repr=False)
class HookR(Formula):
    """``a @> b``: at x, every decomposition Rxyz with y sat a has z sat b."""

    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class HookL(Formula):
    """``b <@ a``: at x, every decomposition Rxyz with z sat a has y sat b."""

    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Box(Formula):
    sub: Formula


def conj(parts: list[Formula]) -> Formula:
    """Left-folded conjunction; empty list gives Top."""
    if not parts:
        return Top()
    acc = parts[0]
    for p in parts[1:]:
        acc = And(acc, p)
    return acc


def disj(parts: list[Formula]) -> Formula:
    """Left-folded disjunction; empty list gives Bottom."""
    if not parts:
        return Bottom()
    acc = parts[0]
    for p in parts[1:]:
        acc = Or(acc, p)
    return acc


def desugar(f: Formula) -> Formula:
    """Expand derived connectives, returning a tree of core nodes only.

    Hooks become their negative diamond forms, the box becomes its
    three-conjunct hook definition, and T is encoded as excluded middle over
    the reserved letter. Idempotent: core nodes are fixed points.
    """
    if isinstance(f, Letter):
        return f
    if isinstance(f, Neg):
        return Neg(desugar(f.sub))
    if isinstance(f, Or):
        return Or(desugar(f.left), desugar(f.right))
    if isinstance(f, Comp):
        return Comp(desugar(f.left), desugar(f.right))
    if isinstance(f, And):
        a, b = desugar(f.left), desugar(f.right)
        return Neg(Or(Neg(a), Neg(b)))
    if isinstance(f, Implies):
        return Or(Neg(desugar(f.left)), desugar(f.right))
    if isinstance(f, Iff):
        a, b = desugar(f.left), desugar(f.right)
        fwd = Or(Neg(a), b)
        bwd = Or(Neg(b), a)
        return Neg(Or(Neg(fwd), Neg(bwd)))
    if isinstance(f, Top):
        p0 = Letter(TOP_LETTER)
        return Or(p0, Neg(p0))
    if isinstance(f, Bottom):
        p0 = Letter(TOP_LETTER)
        return Neg(Or(p0, Neg(p0)))
    if isinstance(f, HookR):
        return Neg(Comp(desugar(f.left), Neg(desugar(f.right))))
    if isinstance(f, HookL):
        return Neg(Comp(Neg(desugar(f.left)), desugar(f.right)))
    if isinstance(f, Box):
        once = HookR(Top(), f.sub)
        return desugar(And(And(once, HookL(f.sub, Top())), HookL(once, Top())))
    raise TypeError(f"not a Formula: {f!r}")


def node_count(f: Formula) -> int:
    """Number of AST nodes, counting derived nodes as single nodes."""
    if isinstance(f, (Letter, Top, Bottom)):
        return 1
    if isinstance(f, (Neg, Box)):
        return 1 + node_count(f.sub)
    return 1 + node_count(f.left) + node_count(f.right)


def letters(f: Formula) -> set[str]:
    """Letter names occurring in f, counting the reserved letter behind T/F."""
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Letter):
            out.add(g.name)
        elif isinstance(g, (Top, Bottom)):
            out.add(TOP_LETTER)
        elif isinstance(g, (Neg, Box)):
            stack.append(g.sub)
        else:
            stack.append(g.left)
            stack.append(g.right)
    return out


# -- concrete syntax ---------------------------------------------------------
#
# Precedence, loosest to tightest:
#   <->  ->  @>/<@  |  &  o  prefix(~, [])
# <-> and -> are right-associative, the hooks non-associative, and |, &, o
# left-associative.

_PREC_IFF = 1
_PREC_IMPLIES = 2
_PREC_HOOK = 3
_PREC_OR = 4
_PREC_AND = 5
_PREC_COMP = 6
_PREC_PREFIX = 7
_PREC_ATOM = 8


class FormulaSyntaxError(ValueError):
    """Parse failure, carrying the byte offset and the acceptable tokens."""

    def __init__(self, text: str, pos: int, expected: set[str], found: str):
        self.offset = len(text[:pos].encode("utf-8"))
        self.expected = frozenset(expected)
        self.found = found
        exp = ", ".join(sorted(self.expected))
        super().__init__(
            f"syntax error at byte {self.offset}: expected {exp}, found {found}"
        )


_SYMBOLS = ("<->", "->", "@>", "<@", "[]", "~", "&", "|", "(", ")")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, value, position) triples; kind is the token's category."""
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        m = IDENT_RE.match(text, i)
        if m:
            word = m.group(0)
            if word == "o":
                toks.append(("o", word, i))
            elif word == "T":
                toks.append(("T", word, i))
            elif word == "F":
                toks.append(("F", word, i))
            else:
                toks.append(("ident", word, i))
            i = m.end()
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append((sym, sym, i))
                i += len(sym)
                break
        else:
            raise FormulaSyntaxError(text, i, {"a token"}, repr(c))
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> str:
        return self.toks[self.pos][0]

    def advance(self) -> tuple[str, str, int]:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str) -> None:
        if self.peek() != kind:
            self.fail({kind})
        self.advance()

    def fail(self, expected: set[str]):
        kind, value, pos = self.toks[self.pos]
        found = "end of input" if kind == "end" else repr(value)
        raise FormulaSyntaxError(self.text, pos, expected, found)

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() != "end":
            self.fail({"end of input"})
        return f

    def iff(self) -> Formula:
        left = self.implies()
        if self.peek() == "<->":
            self.advance()
            return Iff(left, self.iff())
        return left

    def implies(self) -> Formula:
        left = self.hook()
        if self.peek() == "->":
            self.advance()
            return Implies(left, self.implies())
        return left

    def hook(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "@>":
            self.advance()
            return HookR(left, self.disjunction())
        if self.peek() == "<@":
            self.advance()
            return HookL(left, self.disjunction())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.advance()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.composition()
        while self.peek() == "&":
            self.advance()
            f = And(f, self.composition())
        return f

    def composition(self) -> Formula:
        f = self.unary()
        while self.peek() == "o":
            self.advance()
            f = Comp(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind = self.peek()
        if kind == "~":
            self.advance()
            return Neg(self.unary())
        if kind == "[]":
            self.advance()
            return Box(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, value, _ = self.toks[self.pos]
        if kind == "ident":
            self.advance()
            return Letter(value)
        if kind == "T":
            self.advance()
            return Top()
        if kind == "F":
            self.advance()
            return Bottom()
        if kind == "(":
            self.advance()
            f = self.iff()
            self.expect(")")
            return f
        self.fail({"a letter", "T", "F", "~", "[]", "("})


def parse(text: str) -> Formula:
    """Parse concrete syntax into a Formula; derived tokens give derived nodes."""
    return _Parser(text).parse()


def _render(f: Formula) -> tuple[str, int]:
    if isinstance(f, Letter):
        return f.name, _PREC_ATOM
    if isinstance(f, Top):
        return "T", _PREC_ATOM
    if isinstance(f, Bottom):
        return "F", _PREC_ATOM
    if isinstance(f, Neg):
        return "~" + _child(f.sub, _PREC_PREFIX), _PREC_PREFIX
    if isinstance(f, Box):
        return "[]" + _child(f.sub, _PREC_PREFIX), _PREC_PREFIX
    if isinstance(f, Comp):
        return _binary(f, "o", _PREC_COMP, "left")
    if isinstance(f, And):
        return _binary(f, "&", _PREC_AND, "left")
    if isinstance(f, Or):
        return _binary(f, "|", _PREC_OR, "left")
    if isinstance(f, HookR):
        return _binary(f, "@>", _PREC_HOOK, "none")
    if isinstance(f, HookL):
        return _binary(f, "<@", _PREC_HOOK, "none")
    if isinstance(f, Implies):
        return _binary(f, "->", _PREC_IMPLIES, "right")
    if isinstance(f, Iff):
        return _binary(f, "<->", _PREC_IFF, "right")
    raise TypeError(f"not a Formula: {f!r}")


def _binary(f, op: str, prec: int, assoc: str) -> tuple[str, int]:
    lneed = prec if assoc == "left" else prec + 1
    rneed = prec if assoc == "right" else prec + 1
    return f"{_child(f.left, lneed)} {op} {_child(f.right, rneed)}", prec


def _child(f: Formula, need: int) -> str:
    s, prec = _render(f)
    return s if prec >= need else f"({s})"


def render(f: Formula) -> str:
    """Minimal-parenthesis text; parse(render(f)) is structurally equal to f."""
    return _render(f)[0]
