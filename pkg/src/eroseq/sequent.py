"""Defeasible sequents: background | antecedent |-<defeaters> succedent.

A sequent carries four finite sets: a background set (context the
inference is beholden to, written left of ``|``), an antecedent, a
defeater set (a set of sets of d-wffs, written under the turnstile) and
a succedent.  The sequent is *defeated* when the declarativized
background-and-antecedent entails some member of the defeater set;
otherwise the left-hand side and the defeater set are *compatible*.

Text format, used by the CLI and test fixtures::

    <background> | <antecedent> |- <{{p},{q}}> <succedent>

where each formula list is comma separated, ``.`` denotes an empty
list, and the defeater set is written ``{{p},{q}}`` or ``{}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import semantics
from .formula import (
    Dwff,
    Formula,
    ParseError,
    Question,
    declarative_disjunction,
    formula_key,
    is_dwff,
    parse_formula,
    render_formula,
)

DefeaterSet = frozenset[frozenset[Dwff]]


class DefeaterError(ValueError):
    """Malformed defeater set (empty member or erotetic content)."""


def defeater_set(members: Iterable[Iterable[Dwff]]) -> DefeaterSet:
    """Normalize and validate a defeater set.

    Members are finite nonempty sets of d-wffs; the empty member set is
    rejected at construction rather than given a reading.
    """
    out = []
    for member in members:
        m = frozenset(member)
        if not m:
            raise DefeaterError("defeater sets may not contain the empty set")
        for f in m:
            if not is_dwff(f):
                raise DefeaterError(
                    f"defeater members must be d-wffs, got {render_formula(f)}"
                )
        out.append(m)
    return frozenset(out)


@dataclass(frozen=True)
class Sequent:
    background: frozenset[Formula]
    antecedent: frozenset[Formula]
    defeaters: DefeaterSet
    succedent: frozenset[Formula]

    def __post_init__(self):
        object.__setattr__(self, "background", frozenset(self.background))
        object.__setattr__(self, "antecedent", frozenset(self.antecedent))
        object.__setattr__(self, "defeaters", defeater_set(self.defeaters))
        object.__setattr__(self, "succedent", frozenset(self.succedent))

    def __repr__(self) -> str:
        return render_sequent(self)

    def left_formulas(self) -> frozenset[Formula]:
        return self.background | self.antecedent


def sequent(
    background: Iterable[Formula] = (),
    antecedent: Iterable[Formula] = (),
    defeaters: Iterable[Iterable[Dwff]] = (),
    succedent: Iterable[Formula] = (),
) -> Sequent:
    return Sequent(
        frozenset(background), frozenset(antecedent), defeater_set(defeaters), frozenset(succedent)
    )


def declarativize(formulas: Iterable[Formula]) -> frozenset[Dwff]:
    """Replace each question by the disjunction of its direct answers."""
    out: set[Dwff] = set()
    for f in formulas:
        if isinstance(f, Question):
            out.add(declarative_disjunction(f))
        else:
            out.add(f)
    return frozenset(out)


def is_defeated(s: Sequent, route: str = "semantic") -> bool:
    """Whether some defeater member follows from the declarativized left side.

    ``route="semantic"`` decides entailment by valuation enumeration;
    ``route="search"`` looks for an actual derivation of
    ``. | E(background u antecedent) |-<{}> X`` for each member X.  The
    two must agree on every instance.
    """
    decl = declarativize(s.left_formulas())
    if route == "semantic":
        return any(semantics.mc_entails(decl, member) for member in s.defeaters)
    if route == "search":
        from . import prover  # local import: prover builds on this module

        return any(
            prover.derive(sequent(antecedent=decl, succedent=member)) is not None
            for member in s.defeaters
        )
    raise ValueError(f"unknown defeat route {route!r}")


def compatible(formulas: Iterable[Formula], defeaters: Iterable[Iterable[Dwff]]) -> bool:
    """Failure of defeat between a combined left-hand set and a defeater set."""
    decl = declarativize(formulas)
    return not any(semantics.mc_entails(decl, member) for member in defeater_set(defeaters))


def _render_formula_list(formulas: frozenset[Formula]) -> str:
    if not formulas:
        return "."
    return ", ".join(sorted(map(render_formula, formulas)))


def _render_defeaters(defeaters: DefeaterSet) -> str:
    members = sorted(
        ("{" + ", ".join(sorted(map(render_formula, member))) + "}" for member in defeaters),
    )
    return "{" + ", ".join(members) + "}"


def render_sequent(s: Sequent) -> str:
    return (
        f"{_render_formula_list(s.background)} | {_render_formula_list(s.antecedent)}"
        f" |-<{_render_defeaters(s.defeaters)}> {_render_formula_list(s.succedent)}"
    )


def _split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside any brace or parenthesis nesting."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "{(":
            depth += 1
        elif ch in "})":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def _parse_formula_list(text: str) -> frozenset[Formula]:
    text = text.strip()
    if text == ".":
        return frozenset()
    if not text:
        raise ParseError("empty formula list (write '.' for an empty list)", 0)
    return frozenset(parse_formula(part) for part in _split_top_level(text))


def _parse_defeaters(text: str) -> DefeaterSet:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ParseError("defeater set must be braced, e.g. {{p},{q}} or {}", 0)
    inner = text[1:-1].strip()
    if not inner:
        return frozenset()
    members = []
    for part in _split_top_level(inner):
        part = part.strip()
        if not (part.startswith("{") and part.endswith("}")):
            raise ParseError(f"defeater member must be braced: {part!r}", 0)
        body = part[1:-1].strip()
        if not body:
            raise DefeaterError("defeater sets may not contain the empty set")
        member = []
        for chunk in _split_top_level(body):
            f = parse_formula(chunk)
            if not is_dwff(f):
                raise DefeaterError(f"defeater members must be d-wffs, got {chunk.strip()}")
            member.append(f)
        members.append(member)
    return defeater_set(members)


def parse_sequent(text: str) -> Sequent:
    """Parse the sequent text format."""
    left, sep, right = text.partition("|-")
    if not sep:
        raise ParseError("missing turnstile '|-'", len(text))
    background_text, bar, antecedent_text = left.partition("|")
    if not bar:
        raise ParseError("missing background separator '|'", 0)
    right = right.strip()
    if not right.startswith("<"):
        raise ParseError("missing defeater set '<{...}>' after '|-'", 0)
    close = right.find(">")
    if close < 0:
        raise ParseError("unterminated defeater set", 0)
    return Sequent(
        _parse_formula_list(background_text),
        _parse_formula_list(antecedent_text),
        _parse_defeaters(right[1:close]),
        _parse_formula_list(right[close + 1 :]),
    )


def sequent_key(s: Sequent) -> str:
    return render_sequent(s)


__all__ = [
    "DefeaterError",
    "DefeaterSet",
    "Sequent",
    "compatible",
    "declarativize",
    "defeater_set",
    "formula_key",
    "is_defeated",
    "parse_sequent",
    "render_sequent",
    "sequent",
    "sequent_key",
]
