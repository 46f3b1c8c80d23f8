"""Syntax of a propositional language extended with questions.

Declarative formulas (d-wffs) are built from atoms with ``~`` (negation),
``/\\`` (conjunction), ``\\/`` (disjunction) and ``->`` (implication).
A question ``?{A1, ..., An}`` packs n >= 2 pairwise distinct d-wffs, its
direct answers.  Constituent order is significant: ``?{p, ~p}`` and
``?{~p, p}`` are different questions with the same answer set.

Concrete grammar (ASCII, whitespace insignificant)::

    formula  := question | dwff
    question := "?" "{" dwff ("," dwff)+ "}"
    dwff     := implication          (right associative)
    atoms    := [a-z][a-zA-Z0-9_]*

Precedence: ``~`` > ``/\\`` > ``\\/`` > ``->``.  ``render_formula``
emits a fully parenthesised canonical form that parses back to the
same tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Union


class FormulaError(ValueError):
    """Base class for malformed formulas."""


class ParseError(FormulaError):
    """Input text does not conform to the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class QuestionArityError(FormulaError):
    """A question needs at least two direct answers."""


class EquiformAnswersError(FormulaError):
    """Direct answers of a question must be pairwise distinct."""


class NestedQuestionError(FormulaError):
    """Questions may only have declarative constituents."""


@dataclass(frozen=True)
class Atom:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    body: "Dwff"

    def __repr__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True)
class Conj:
    left: "Dwff"
    right: "Dwff"

    def __repr__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True)
class Disj:
    left: "Dwff"
    right: "Dwff"

    def __repr__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True)
class Impl:
    left: "Dwff"
    right: "Dwff"

    def __repr__(self) -> str:
        return render_formula(self)


Dwff = Union[Atom, Neg, Conj, Disj, Impl]
_DWFF_TYPES = (Atom, Neg, Conj, Disj, Impl)


@dataclass(frozen=True)
class Question:
    """An erotetic formula ?{A1, ..., An} over its ordered direct answers."""

    constituents: tuple[Dwff, ...]

    def __post_init__(self):
        object.__setattr__(self, "constituents", tuple(self.constituents))
        if len(self.constituents) < 2:
            raise QuestionArityError(
                f"question needs at least two answers, got {len(self.constituents)}"
            )
        for c in self.constituents:
            if isinstance(c, Question):
                raise NestedQuestionError("questions cannot be nested")
            if not isinstance(c, _DWFF_TYPES):
                raise FormulaError(f"question constituent is not a formula: {c!r}")
        if len(set(self.constituents)) != len(self.constituents):
            raise EquiformAnswersError("question has equiform constituents")

    def __repr__(self) -> str:
        return render_formula(self)


Formula = Union[Dwff, Question]


def is_dwff(f: Formula) -> bool:
    return isinstance(f, _DWFF_TYPES)


def direct_answers(q: Question) -> tuple[Dwff, ...]:
    """The constituents of ``q`` in declared order."""
    return q.constituents


def declarative_disjunction(q: Question) -> Dwff:
    """A1 v ... v An, left associated, in constituent order."""
    return reduce(Disj, q.constituents)


def atoms(f: Formula) -> frozenset[str]:
    """Names of the atoms occurring in ``f``."""
    found: set[str] = set()
    stack: list[Formula] = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            found.add(g.name)
        elif isinstance(g, Neg):
            stack.append(g.body)
        elif isinstance(g, (Conj, Disj, Impl)):
            stack.append(g.left)
            stack.append(g.right)
        else:
            stack.extend(g.constituents)
    return frozenset(found)


def atoms_of(formulas: Iterable[Formula]) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for f in formulas:
        out |= atoms(f)
    return out


def subformulas(f: Formula) -> frozenset[Formula]:
    """All subformulas of ``f``, including ``f`` itself.

    The constituents of a question count as its subformulas.
    """
    found: set[Formula] = set()
    stack: list[Formula] = [f]
    while stack:
        g = stack.pop()
        if g in found:
            continue
        found.add(g)
        if isinstance(g, Neg):
            stack.append(g.body)
        elif isinstance(g, (Conj, Disj, Impl)):
            stack.append(g.left)
            stack.append(g.right)
        elif isinstance(g, Question):
            stack.extend(g.constituents)
    return frozenset(found)


_CONNECTIVE = {Conj: "/\\", Disj: "\\/", Impl: "->"}


def render_formula(f: Formula) -> str:
    """Canonical text for ``f``; round-trips through :func:`parse_formula`."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Neg):
        return "~" + render_formula(f.body)
    if isinstance(f, (Conj, Disj, Impl)):
        op = _CONNECTIVE[type(f)]
        return f"({render_formula(f.left)} {op} {render_formula(f.right)})"
    if isinstance(f, Question):
        return "?{" + ", ".join(render_formula(c) for c in f.constituents) + "}"
    raise FormulaError(f"not a formula: {f!r}")


def formula_key(f: Formula) -> str:
    """Sort key used whenever sets of formulas are rendered or iterated."""
    return render_formula(f)


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<ident>[a-z][a-zA-Z0-9_]*)
      | (?P<and>/\\)
      | (?P<or>\\/)
      | (?P<impl>->)
      | (?P<not>~)
      | (?P<query>\?)
      | (?P<lbrace>\{)
      | (?P<rbrace>\})
      | (?P<lparen>\()
      | (?P<rparen>\))
      | (?P<comma>,)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> Iterator[tuple[str, str, int]]:
    """Yield (kind, lexeme, position) triples; raises ParseError on junk."""
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        assert kind is not None
        if kind != "ws":
            yield kind, m.group(), pos
        pos = m.end()
    yield "eof", "", len(text)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(tokenize(text))
        self.index = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.index]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect(self, kind: str) -> tuple[str, str, int]:
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        return tok

    def formula(self) -> Formula:
        if self.peek()[0] == "query":
            return self.question()
        return self.implication()

    def question(self) -> Question:
        self.expect("query")
        self.expect("lbrace")
        _, _, start = self.peek()
        constituents = [self.implication()]
        while self.peek()[0] == "comma":
            self.next()
            constituents.append(self.implication())
        self.expect("rbrace")
        try:
            return Question(tuple(constituents))
        except FormulaError as exc:
            exc.position = start  # type: ignore[attr-defined]
            raise

    def implication(self) -> Dwff:
        left = self.disjunction()
        if self.peek()[0] == "impl":
            self.next()
            return Impl(left, self.implication())
        return left

    def disjunction(self) -> Dwff:
        out = self.conjunction()
        while self.peek()[0] == "or":
            self.next()
            out = Disj(out, self.conjunction())
        return out

    def conjunction(self) -> Dwff:
        out = self.negation()
        while self.peek()[0] == "and":
            self.next()
            out = Conj(out, self.negation())
        return out

    def negation(self) -> Dwff:
        kind, lexeme, pos = self.peek()
        if kind == "not":
            self.next()
            return Neg(self.negation())
        if kind == "ident":
            self.next()
            return Atom(lexeme)
        if kind == "lparen":
            self.next()
            inner = self.implication()
            self.expect("rparen")
            return inner
        if kind == "query":
            raise NestedQuestionError("questions cannot be nested")
        raise ParseError(f"expected a formula, found {lexeme or 'end of input'!r}", pos)


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into its unique syntax tree."""
    parser = _Parser(text)
    f = parser.formula()
    kind, lexeme, pos = parser.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {lexeme!r}", pos)
    return f


def parse_dwff(text: str) -> Dwff:
    """Parse ``text`` and require a declarative formula."""
    f = parse_formula(text)
    if not is_dwff(f):
        raise FormulaError(f"expected a declarative formula, got {render_formula(f)}")
    return f
