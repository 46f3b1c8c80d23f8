"""Bridge to the axiomatic sequent system for question evocation.

That system works on e-sequents ``X |- ?{A1,...,An}`` (declarative
antecedent, single question succedent).  This module recognizes its
axioms, applies its four primitive rules R1-R4, and maps e-sequents to
their correlates in the defeasible calculus: the sequent with empty
background and exactly the answer singletons as defeater set, which is
the smallest pair of sets with which the antecedent/succedent pair can
be derived here.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .formula import (
    Atom,
    Conj,
    Disj,
    Dwff,
    Impl,
    Neg,
    ParseError,
    Question,
    is_dwff,
    parse_formula,
    render_formula,
)
from .semantics import is_tautology
from .sequent import Sequent, sequent


class PmceRuleError(ValueError):
    """A primitive-rule application breaks one of its provisos."""


class MinimalityError(ValueError):
    """A strictly smaller provable variant of a correlate exists."""


@dataclass(frozen=True)
class ESequent:
    antecedent: frozenset[Dwff]
    question: Question

    def __post_init__(self):
        object.__setattr__(self, "antecedent", frozenset(self.antecedent))
        for f in self.antecedent:
            if not is_dwff(f):
                raise ValueError("e-sequent antecedents are declarative")
        if not isinstance(self.question, Question):
            raise ValueError("e-sequent succedent must be a single question")

    def __repr__(self) -> str:
        return render_esequent(self)


def render_esequent(s: ESequent) -> str:
    left = ", ".join(sorted(map(render_formula, s.antecedent))) or "."
    return f"{left} |- {render_formula(s.question)}"


def parse_esequent(text: str) -> ESequent:
    left, sep, right = text.partition("|-")
    if not sep:
        raise ParseError("missing turnstile '|-'", len(text))
    left = left.strip()
    antecedent: list[Dwff] = []
    if left != ".":
        depth = 0
        start = 0
        parts = []
        for i, ch in enumerate(left):
            if ch in "{(":
                depth += 1
            elif ch in "})":
                depth -= 1
            elif ch == "," and depth == 0:
                parts.append(left[start:i])
                start = i + 1
        parts.append(left[start:])
        for part in parts:
            f = parse_formula(part)
            if not is_dwff(f):
                raise ParseError("e-sequent antecedents are declarative", 0)
            antecedent.append(f)
    q = parse_formula(right)
    if not isinstance(q, Question):
        raise ParseError("e-sequent succedent must be a single question", 0)
    return ESequent(frozenset(antecedent), q)


def is_literal(f: Dwff) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Neg) and isinstance(f.body, Atom))


def _literals(f: Dwff) -> list[Dwff] | None:
    """The literals of a literal or a disjunction of literals, else None."""
    if is_literal(f):
        return [f]
    if isinstance(f, Disj):
        left, right = _literals(f.left), _literals(f.right)
        if left is not None and right is not None:
            return left + right
    return None


def _complementary(a: Dwff, b: Dwff) -> bool:
    return Neg(a) == b or Neg(b) == a


def is_pmce_axiom(s: ESequent) -> bool:
    """Axiom recognition for the axiomatic evocation system.

    The antecedent must be empty, every constituent a literal or a
    disjunction of pairwise non-complementary literals, and the
    disjunction of all constituents must involve a complementary pair.
    """
    if s.antecedent:
        return False
    all_literals: list[Dwff] = []
    for constituent in s.question.constituents:
        literals = _literals(constituent)
        if literals is None:
            return False
        if any(_complementary(a, b) for a, b in combinations(literals, 2)):
            return False
        all_literals.extend(literals)
    return any(_complementary(a, b) for a, b in combinations(all_literals, 2))


def _question(constituents: Sequence[Dwff], rule: str) -> Question:
    try:
        return Question(tuple(constituents))
    except ValueError as exc:
        raise PmceRuleError(f"{rule}: conclusion question ill-formed: {exc}") from exc


def apply_r1(premises: Sequence[ESequent]) -> ESequent:
    """From X |- ?{A...,B} and X |- ?{A...,C} conclude X |- ?{A..., B /\\ C}."""
    if len(premises) != 2:
        raise PmceRuleError("R1 takes two premises")
    s1, s2 = premises
    if s1.antecedent != s2.antecedent:
        raise PmceRuleError("R1: premises must share one antecedent")
    head1, b = s1.question.constituents[:-1], s1.question.constituents[-1]
    head2, c = s2.question.constituents[:-1], s2.question.constituents[-1]
    if head1 != head2:
        raise PmceRuleError("R1: premises must agree on all but the last answer")
    conjunction = Conj(b, c)
    if conjunction in head1:
        raise PmceRuleError("R1: the formed conjunction equals an existing answer")
    return ESequent(s1.antecedent, _question(head1 + (conjunction,), "R1"))


def apply_r2(premises: Sequence[ESequent], replacement: Dwff) -> ESequent:
    """Replace the last answer B by C when B <-> C is a classical theorem."""
    if len(premises) != 1:
        raise PmceRuleError("R2 takes one premise")
    (s,) = premises
    head, b = s.question.constituents[:-1], s.question.constituents[-1]
    if not is_tautology(Conj(Impl(b, replacement), Impl(replacement, b))):
        raise PmceRuleError("R2: the replacement is not classically equivalent")
    if replacement in head:
        raise PmceRuleError("R2: the replacement equals an existing answer")
    return ESequent(s.antecedent, _question(head + (replacement,), "R2"))


def apply_r3(premises: Sequence[ESequent]) -> ESequent:
    """From X |- ?{B->A1,...,B->An} conclude X, B |- ?{A1,...,An}."""
    if len(premises) != 1:
        raise PmceRuleError("R3 takes one premise")
    (s,) = premises
    constituents = s.question.constituents
    if not all(isinstance(c, Impl) for c in constituents):
        raise PmceRuleError("R3: every answer must be an implication")
    antecedents = {c.left for c in constituents}
    if len(antecedents) != 1:
        raise PmceRuleError("R3: the implications must share one antecedent")
    (b,) = antecedents
    return ESequent(
        s.antecedent | {b}, _question(tuple(c.right for c in constituents), "R3")
    )


def apply_r4(premises: Sequence[ESequent], question: Question) -> ESequent:
    """Reorder: the new question must have exactly the same answer set."""
    if len(premises) != 1:
        raise PmceRuleError("R4 takes one premise")
    (s,) = premises
    if frozenset(s.question.constituents) != frozenset(question.constituents):
        raise PmceRuleError("R4: answer sets differ")
    return ESequent(s.antecedent, question)


def apply_pmce_rule(rule: str, premises: Sequence[ESequent], **witness) -> ESequent:
    """Apply one of the primitive rules R1-R4; provisos raise PmceRuleError."""
    if rule == "R1":
        return apply_r1(premises)
    if rule == "R2":
        if "replacement" not in witness:
            raise PmceRuleError("R2 needs a replacement formula")
        return apply_r2(premises, witness["replacement"])
    if rule == "R3":
        return apply_r3(premises)
    if rule == "R4":
        if "question" not in witness:
            raise PmceRuleError("R4 needs the reordered question")
        return apply_r4(premises, witness["question"])
    raise PmceRuleError(f"unknown rule {rule!r} (expected R1, R2, R3 or R4)")


def lk_correlate(s: ESequent, verify_minimal: bool = False) -> Sequent:
    """The canonical correlate: empty background, answer singletons defeated.

    With ``verify_minimal`` (bounded to questions with at most four
    answers) it is checked by enumeration that, when the correlate is
    provable, no variant with a strictly smaller background or defeater
    set is provable too.
    """
    correlate = sequent(
        antecedent=s.antecedent,
        defeaters=[[a] for a in s.question.constituents],
        succedent=[s.question],
    )
    if verify_minimal:
        _verify_minimality(s, correlate)
    return correlate


def _verify_minimality(s: ESequent, correlate: Sequent) -> None:
    from .prover import prove

    if len(s.question.constituents) > 4:
        raise ValueError("minimality check is bounded to four answers")
    if not prove(correlate).is_proof:
        return
    members = sorted(correlate.defeaters, key=lambda m: sorted(map(render_formula, m)))
    for k in range(len(members)):
        for smaller in combinations(members, k):
            variant = Sequent(
                correlate.background,
                correlate.antecedent,
                frozenset(smaller),
                correlate.succedent,
            )
            if prove(variant).is_proof:
                raise MinimalityError(
                    f"provable variant with smaller defeater set: {variant!r}"
                )
