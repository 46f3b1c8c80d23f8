"""Trusted kernel: rule checking for derivations of defeasible sequents.

Every derivation node names its rule, its premises and a small
annotation (principal formula, weakened formula, chosen answer targets,
...) that makes checking deterministic.  ``conclude`` computes the one
conclusion a rule instance licenses; ``validate_step`` compares that
against a claimed conclusion; ``validate_derivation`` checks a whole
tree; ``classify`` separates proofs (all sequents undefeated) from
paraproofs.

Axioms are atomic singletons ``. | p |-<{}> p``.  All multi-premise
rules are multiplicative: backgrounds, antecedents, succedents and
defeater sets of the premises are joined as sets.  Weakening with a
formula already present is accepted as a no-op at the set level.

Side conditions carried by the erotetic rules:

* right question introduction (QR1) requires an all-declarative
  antecedent and charges the singleton of every direct answer to the
  conclusion's defeater set;
* left question elimination (QL1) requires one identical all-declarative
  succedent across its premises and records the eliminated question's
  answers in the conclusion's background;
* the question-to-question rules (QR2, QL2) record the constituents of
  the question they discharge in the background, and their annotation
  fixes, for each answer B_j of the introduced question, which answer
  A_i of the discharging question its premise targets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Callable, Iterator, Sequence

from .formula import (
    Atom,
    Conj,
    Disj,
    Dwff,
    Formula,
    Impl,
    Neg,
    Question,
    formula_key,
    is_dwff,
    parse_formula,
    render_formula,
)
from .sequent import (
    DefeaterSet,
    Sequent,
    defeater_set,
    is_defeated,
    parse_sequent,
    render_sequent,
)


class Rule(Enum):
    AXIOM = "Axiom"
    CUT = "Cut"
    LW = "LW"
    RW = "RW"
    DE = "DE"
    BE = "BE"
    CONJ_L = "ConjL"
    CONJ_R = "ConjR"
    DISJ_L = "DisjL"
    DISJ_R = "DisjR"
    IMPL_L = "ImplL"
    IMPL_R = "ImplR"
    NEG_L = "NegL"
    NEG_R = "NegR"
    QR1 = "QR1"
    QL1 = "QL1"
    QR2 = "QR2"
    QL2 = "QL2"


class RuleViolation(ValueError):
    """A rule instance breaks one or more of its obligations."""

    def __init__(self, violations: Sequence[str]):
        super().__init__("; ".join(violations))
        self.violations = tuple(violations)


class InvalidDerivationError(ValueError):
    """A derivation tree contains invalid rule applications."""

    def __init__(self, violations: Sequence[str]):
        super().__init__("; ".join(violations))
        self.violations = tuple(violations)


@dataclass(frozen=True)
class Annotation:
    """Witness data that makes a rule application checkable."""

    formula: Formula | None = None  # weakened formula (LW/RW/BE), cut formula, axiom atom
    principal: Dwff | None = None  # principal formula of a declarative logical rule
    question: Question | None = None  # question introduced/eliminated (QR1/QL1/QR2/QL2)
    source: Question | None = None  # antecedent question discharged by QR2/QL2
    targets: tuple[int, ...] | None = None  # per-B-premise answer index into source
    sets: DefeaterSet | None = None  # defeater expansion added by DE

    def __post_init__(self):
        if self.targets is not None:
            object.__setattr__(self, "targets", tuple(self.targets))
        if self.sets is not None:
            object.__setattr__(self, "sets", defeater_set(self.sets))


EMPTY = Annotation()


@dataclass(frozen=True)
class Derivation:
    """A finitely branching tree of rule applications."""

    conclusion: Sequent
    rule: Rule
    premises: tuple["Derivation", ...] = ()
    annotation: Annotation = EMPTY

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def __repr__(self) -> str:
        return f"<{self.rule.value}: {render_sequent(self.conclusion)}>"


def iter_nodes(d: Derivation, path: str = "root") -> Iterator[tuple[str, Derivation]]:
    """Yield (path, node) pairs in prefix order; premise i extends the path by .i."""
    yield path, d
    for i, premise in enumerate(d.premises):
        yield from iter_nodes(premise, f"{path}.{i}")


def is_cut_free(d: Derivation) -> bool:
    return all(node.rule is not Rule.CUT for _, node in iter_nodes(d))


def uses_rule(d: Derivation, rule: Rule) -> bool:
    return any(node.rule is rule for _, node in iter_nodes(d))


def _all_declarative(formulas: frozenset[Formula]) -> bool:
    return all(is_dwff(f) for f in formulas)


def _union(parts) -> frozenset:
    return frozenset().union(*parts) if parts else frozenset()


def _need(condition: bool, message: str, violations: list[str]) -> None:
    if not condition:
        violations.append(message)


def _conclude_axiom(premises, ann, v):
    a = ann.formula
    _need(isinstance(a, Atom), "non-atomic axiom", v)
    if v:
        raise RuleViolation(v)
    return Sequent(frozenset(), frozenset([a]), frozenset(), frozenset([a]))


def _conclude_cut(premises, ann, v):
    p1, p2 = premises
    f = ann.formula
    _need(f is not None, "missing cut formula", v)
    if f is not None:
        _need(f in p1.succedent, "cut formula missing from first premise succedent", v)
        _need(f in p2.antecedent, "cut formula missing from second premise antecedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(
        p1.background | p2.background,
        p1.antecedent | (p2.antecedent - {f}),
        p1.defeaters | p2.defeaters,
        (p1.succedent - {f}) | p2.succedent,
    )


def _conclude_weakening(rule, premises, ann, v):
    (p,) = premises
    f = ann.formula
    _need(f is not None, "missing weakened formula", v)
    if v:
        raise RuleViolation(v)
    if rule is Rule.LW:
        return Sequent(p.background, p.antecedent | {f}, p.defeaters, p.succedent)
    if rule is Rule.RW:
        return Sequent(p.background, p.antecedent, p.defeaters, p.succedent | {f})
    return Sequent(p.background | {f}, p.antecedent, p.defeaters, p.succedent)  # BE


def _conclude_de(premises, ann, v):
    (p,) = premises
    _need(ann.sets is not None, "missing defeater expansion", v)
    if v:
        raise RuleViolation(v)
    return Sequent(p.background, p.antecedent, p.defeaters | ann.sets, p.succedent)


def _principal(ann, want, v) -> Dwff | None:
    f = ann.principal
    if not isinstance(f, want):
        v.append("missing principal formula")
        return None
    return f


def _conclude_conj_l(premises, ann, v):
    (p,) = premises
    f = _principal(ann, Conj, v)
    if f is not None:
        _need({f.left, f.right} <= p.antecedent, "active formulas missing from antecedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(
        p.background, (p.antecedent - {f.left, f.right}) | {f}, p.defeaters, p.succedent
    )


def _conclude_conj_r(premises, ann, v):
    p1, p2 = premises
    f = _principal(ann, Conj, v)
    if f is not None:
        _need(f.left in p1.succedent, "left conjunct missing from first premise succedent", v)
        _need(f.right in p2.succedent, "right conjunct missing from second premise succedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(
        p1.background | p2.background,
        p1.antecedent | p2.antecedent,
        p1.defeaters | p2.defeaters,
        (p1.succedent - {f.left}) | (p2.succedent - {f.right}) | {f},
    )


def _conclude_disj_l(premises, ann, v):
    p1, p2 = premises
    f = _principal(ann, Disj, v)
    if f is not None:
        _need(f.left in p1.antecedent, "left disjunct missing from first premise antecedent", v)
        _need(f.right in p2.antecedent, "right disjunct missing from second premise antecedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(
        p1.background | p2.background,
        (p1.antecedent - {f.left}) | (p2.antecedent - {f.right}) | {f},
        p1.defeaters | p2.defeaters,
        p1.succedent | p2.succedent,
    )


def _conclude_disj_r(premises, ann, v):
    (p,) = premises
    f = _principal(ann, Disj, v)
    if f is not None:
        _need({f.left, f.right} <= p.succedent, "active formulas missing from succedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(
        p.background, p.antecedent, p.defeaters, (p.succedent - {f.left, f.right}) | {f}
    )


def _conclude_impl_l(premises, ann, v):
    p1, p2 = premises
    f = _principal(ann, Impl, v)
    if f is not None:
        _need(f.left in p1.succedent, "implication antecedent missing from first premise succedent", v)
        _need(f.right in p2.antecedent, "implication consequent missing from second premise antecedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(
        p1.background | p2.background,
        p1.antecedent | (p2.antecedent - {f.right}) | {f},
        p1.defeaters | p2.defeaters,
        (p1.succedent - {f.left}) | p2.succedent,
    )


def _conclude_impl_r(premises, ann, v):
    (p,) = premises
    f = _principal(ann, Impl, v)
    if f is not None:
        _need(f.left in p.antecedent, "implication antecedent missing from premise antecedent", v)
        _need(f.right in p.succedent, "implication consequent missing from premise succedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(
        p.background, p.antecedent - {f.left}, p.defeaters, (p.succedent - {f.right}) | {f}
    )


def _conclude_neg_l(premises, ann, v):
    (p,) = premises
    f = _principal(ann, Neg, v)
    if f is not None:
        _need(f.body in p.succedent, "negated formula missing from premise succedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(p.background, p.antecedent | {f}, p.defeaters, p.succedent - {f.body})


def _conclude_neg_r(premises, ann, v):
    (p,) = premises
    f = _principal(ann, Neg, v)
    if f is not None:
        _need(f.body in p.antecedent, "negated formula missing from premise antecedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(p.background, p.antecedent - {f.body}, p.defeaters, p.succedent | {f})


def _conclude_qr1(premises, ann, v):
    (p,) = premises
    q = ann.question
    _need(isinstance(q, Question), "missing question annotation", v)
    _need(_all_declarative(p.antecedent), "non-declarative antecedent for QR1", v)
    if isinstance(q, Question):
        answers = frozenset(q.constituents)
        _need(answers <= p.succedent, "direct answers missing from premise succedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(
        p.background,
        p.antecedent,
        p.defeaters | frozenset(frozenset([a]) for a in q.constituents),
        (p.succedent - frozenset(q.constituents)) | {q},
    )


def _conclude_ql1(premises, ann, v):
    q = ann.question
    _need(isinstance(q, Question), "missing question annotation", v)
    if not isinstance(q, Question):
        raise RuleViolation(v)
    _need(len(premises) == len(q.constituents), "wrong arity for QL1", v)
    if v:
        raise RuleViolation(v)
    shared = premises[0].succedent
    _need(
        all(p.succedent == shared for p in premises),
        "QL1 premises must share one succedent",
        v,
    )
    _need(_all_declarative(shared), "non-declarative succedent for QL1", v)
    for p, a in zip(premises, q.constituents):
        _need(a in p.antecedent, f"answer {render_formula(a)} missing from its premise antecedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(
        _union(p.background for p in premises) | frozenset(q.constituents),
        _union(p.antecedent - {a} for p, a in zip(premises, q.constituents)) | {q},
        _union(p.defeaters for p in premises),
        shared,
    )


def _check_targets(ann, v) -> bool:
    ok = (
        isinstance(ann.source, Question)
        and isinstance(ann.question, Question)
        and ann.targets is not None
        and len(ann.targets) == len(ann.question.constituents)
        and all(0 <= t < len(ann.source.constituents) for t in ann.targets)
    )
    _need(ok, "missing or ill-formed question/target annotation", v)
    return ok


def _conclude_qr2(premises, ann, v):
    if not _check_targets(ann, v):
        raise RuleViolation(v)
    src, q, targets = ann.source, ann.question, ann.targets
    answers = frozenset(q.constituents)
    _need(len(premises) == 1 + len(q.constituents), "wrong arity for QR2", v)
    if v:
        raise RuleViolation(v)
    alpha, betas = premises[0], premises[1:]
    _need(src in alpha.antecedent, "discharging question missing from first premise antecedent", v)
    _need(answers <= alpha.succedent, "introduced answers missing from first premise succedent", v)
    for j, (beta, b) in enumerate(zip(betas, q.constituents)):
        _need(b in beta.antecedent, f"answer {render_formula(b)} missing from its premise antecedent", v)
        a = src.constituents[targets[j]]
        _need(a in beta.succedent, f"target {render_formula(a)} missing from its premise succedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(
        _union(p.background for p in premises) | answers,
        alpha.antecedent | _union(b.antecedent - {c} for b, c in zip(betas, q.constituents)),
        _union(p.defeaters for p in premises),
        (alpha.succedent - answers)
        | {q}
        | _union(b.succedent - {src.constituents[t]} for b, t in zip(betas, targets)),
    )


def _conclude_ql2(premises, ann, v):
    if not _check_targets(ann, v):
        raise RuleViolation(v)
    src, q, targets = ann.source, ann.question, ann.targets
    n, m = len(src.constituents), len(q.constituents)
    _need(len(premises) == n + m, "wrong arity for QL2", v)
    if v:
        raise RuleViolation(v)
    firsts, seconds = premises[:n], premises[n:]
    for p, a in zip(firsts, src.constituents):
        _need(a in p.antecedent, f"answer {render_formula(a)} missing from its premise antecedent", v)
        _need(q in p.succedent, "succedent question missing from a first-group premise", v)
    for p, b, t in zip(seconds, q.constituents, targets):
        _need(b in p.antecedent, f"answer {render_formula(b)} missing from its premise antecedent", v)
        a = src.constituents[t]
        _need(a in p.succedent, f"target {render_formula(a)} missing from its premise succedent", v)
    if v:
        raise RuleViolation(v)
    return Sequent(
        _union(p.background for p in premises)
        | frozenset(src.constituents)
        | frozenset(q.constituents),
        _union(p.antecedent - {a} for p, a in zip(firsts, src.constituents))
        | _union(p.antecedent - {b} for p, b in zip(seconds, q.constituents))
        | {src},
        _union(p.defeaters for p in premises),
        _union(p.succedent - {q} for p in firsts)
        | {q}
        | _union(p.succedent - {src.constituents[t]} for p, t in zip(seconds, targets)),
    )


_ARITY: dict[Rule, int | None] = {
    Rule.AXIOM: 0,
    Rule.CUT: 2,
    Rule.LW: 1,
    Rule.RW: 1,
    Rule.DE: 1,
    Rule.BE: 1,
    Rule.CONJ_L: 1,
    Rule.CONJ_R: 2,
    Rule.DISJ_L: 2,
    Rule.DISJ_R: 1,
    Rule.IMPL_L: 2,
    Rule.IMPL_R: 1,
    Rule.NEG_L: 1,
    Rule.NEG_R: 1,
    Rule.QR1: 1,
    Rule.QL1: None,  # one premise per direct answer
    Rule.QR2: None,
    Rule.QL2: None,
}


def conclude(rule: Rule, premises: Sequence[Sequent], annotation: Annotation = EMPTY) -> Sequent:
    """The unique conclusion this rule instance licenses.

    Raises :class:`RuleViolation` naming every broken obligation.
    """
    v: list[str] = []
    arity = _ARITY[rule]
    if arity is not None and len(premises) != arity:
        raise RuleViolation([f"wrong arity for {rule.value}: expected {arity}, got {len(premises)}"])
    if rule is Rule.AXIOM:
        return _conclude_axiom(premises, annotation, v)
    if rule is Rule.CUT:
        return _conclude_cut(premises, annotation, v)
    if rule in (Rule.LW, Rule.RW, Rule.BE):
        return _conclude_weakening(rule, premises, annotation, v)
    if rule is Rule.DE:
        return _conclude_de(premises, annotation, v)
    if rule is Rule.CONJ_L:
        return _conclude_conj_l(premises, annotation, v)
    if rule is Rule.CONJ_R:
        return _conclude_conj_r(premises, annotation, v)
    if rule is Rule.DISJ_L:
        return _conclude_disj_l(premises, annotation, v)
    if rule is Rule.DISJ_R:
        return _conclude_disj_r(premises, annotation, v)
    if rule is Rule.IMPL_L:
        return _conclude_impl_l(premises, annotation, v)
    if rule is Rule.IMPL_R:
        return _conclude_impl_r(premises, annotation, v)
    if rule is Rule.NEG_L:
        return _conclude_neg_l(premises, annotation, v)
    if rule is Rule.NEG_R:
        return _conclude_neg_r(premises, annotation, v)
    if rule is Rule.QR1:
        return _conclude_qr1(premises, annotation, v)
    if rule is Rule.QL1:
        return _conclude_ql1(premises, annotation, v)
    if rule is Rule.QR2:
        return _conclude_qr2(premises, annotation, v)
    if rule is Rule.QL2:
        return _conclude_ql2(premises, annotation, v)
    raise RuleViolation([f"unknown rule {rule!r}"])


_COMPONENTS = (
    ("background", "background-set mismatch"),
    ("antecedent", "antecedent mismatch"),
    ("defeaters", "defeater-set mismatch"),
    ("succedent", "succedent mismatch"),
)


def validate_step(
    rule: Rule,
    premises: Sequence[Sequent],
    conclusion: Sequent,
    annotation: Annotation = EMPTY,
) -> list[str]:
    """Check one rule application; returns the list of violations (empty = ok)."""
    try:
        expected = conclude(rule, premises, annotation)
    except RuleViolation as exc:
        return list(exc.violations)
    return [
        message
        for attr, message in _COMPONENTS
        if getattr(expected, attr) != getattr(conclusion, attr)
    ]


def apply_rule(
    rule: Rule, premises: Sequence[Derivation] = (), annotation: Annotation = EMPTY
) -> Derivation:
    """Build a derivation node whose conclusion is computed by the kernel."""
    conclusion = conclude(rule, [p.conclusion for p in premises], annotation)
    return Derivation(conclusion, rule, tuple(premises), annotation)


def axiom(a: Atom) -> Derivation:
    return apply_rule(Rule.AXIOM, (), Annotation(formula=a))


def pad(d: Derivation, target: Sequent) -> Derivation:
    """Extend ``d`` to ``target`` with LW/RW/BE/DE steps.

    ``target`` must contain the root of ``d`` componentwise.
    """
    root = d.conclusion
    if not (
        root.background <= target.background
        and root.antecedent <= target.antecedent
        and root.defeaters <= target.defeaters
        and root.succedent <= target.succedent
    ):
        raise RuleViolation(["padding target does not contain the derived sequent"])
    for f in sorted(target.antecedent - root.antecedent, key=formula_key):
        d = apply_rule(Rule.LW, [d], Annotation(formula=f))
    for f in sorted(target.succedent - root.succedent, key=formula_key):
        d = apply_rule(Rule.RW, [d], Annotation(formula=f))
    for f in sorted(target.background - root.background, key=formula_key):
        d = apply_rule(Rule.BE, [d], Annotation(formula=f))
    missing = target.defeaters - d.conclusion.defeaters
    if missing:
        d = apply_rule(Rule.DE, [d], Annotation(sets=missing))
    return d


def validate_derivation(d: Derivation) -> list[str]:
    """Violations across the whole tree, each prefixed with its node path."""
    violations = []
    for path, node in iter_nodes(d):
        for message in validate_step(
            node.rule, [p.conclusion for p in node.premises], node.conclusion, node.annotation
        ):
            violations.append(f"at {path}: {message}")
    return violations


@dataclass(frozen=True)
class Classification:
    is_proof: bool
    defeated: tuple[str, ...] = ()  # paths of defeated nodes, prefix order


def classify(d: Derivation) -> Classification:
    """Proof if every sequent in the tree is undefeated, else paraproof.

    Rejects invalid derivations with :class:`InvalidDerivationError`.
    """
    violations = validate_derivation(d)
    if violations:
        raise InvalidDerivationError(violations)
    defeated = tuple(
        path for path, node in iter_nodes(d) if node.conclusion.defeaters and is_defeated(node.conclusion)
    )
    return Classification(not defeated, defeated)


# --- serialization -------------------------------------------------------

def _annotation_to_dict(ann: Annotation) -> dict:
    out: dict = {}
    if ann.formula is not None:
        out["formula"] = render_formula(ann.formula)
    if ann.principal is not None:
        out["principal"] = render_formula(ann.principal)
    if ann.question is not None:
        out["question"] = render_formula(ann.question)
    if ann.source is not None:
        out["source"] = render_formula(ann.source)
    if ann.targets is not None:
        out["targets"] = list(ann.targets)
    if ann.sets is not None:
        out["sets"] = sorted(
            sorted(map(render_formula, member)) for member in ann.sets
        )
    return out


def _parse_question(text: str) -> Question:
    f = parse_formula(text)
    if not isinstance(f, Question):
        raise InvalidDerivationError([f"expected a question, got {text!r}"])
    return f


def _annotation_from_dict(data: dict) -> Annotation:
    return Annotation(
        formula=parse_formula(data["formula"]) if "formula" in data else None,
        principal=parse_formula(data["principal"]) if "principal" in data else None,
        question=_parse_question(data["question"]) if "question" in data else None,
        source=_parse_question(data["source"]) if "source" in data else None,
        targets=tuple(data["targets"]) if "targets" in data else None,
        sets=frozenset(
            frozenset(parse_formula(f) for f in member) for member in data["sets"]
        )
        if "sets" in data
        else None,
    )


def derivation_to_dict(d: Derivation) -> dict:
    return {
        "rule": d.rule.value,
        "conclusion": render_sequent(d.conclusion),
        "annotation": _annotation_to_dict(d.annotation),
        "premises": [derivation_to_dict(p) for p in d.premises],
    }


def derivation_from_dict(data: dict) -> Derivation:
    try:
        rule = Rule(data["rule"])
    except (KeyError, ValueError):
        raise InvalidDerivationError([f"unknown rule {data.get('rule')!r}"]) from None
    return Derivation(
        parse_sequent(data["conclusion"]),
        rule,
        tuple(derivation_from_dict(p) for p in data.get("premises", ())),
        _annotation_from_dict(data.get("annotation", {})),
    )


def derivation_to_json(d: Derivation, indent: int | None = None) -> str:
    return json.dumps(derivation_to_dict(d), indent=indent, sort_keys=True)


def derivation_from_json(text: str) -> Derivation:
    return derivation_from_dict(json.loads(text))


def render_derivation(d: Derivation, indent: int = 0) -> str:
    """Human-readable indented tree, conclusion first."""
    pad = "  " * indent
    lines = [f"{pad}{d.rule.value}  {render_sequent(d.conclusion)}"]
    for premise in d.premises:
        lines.append(render_derivation(premise, indent + 1))
    return "\n".join(lines)
