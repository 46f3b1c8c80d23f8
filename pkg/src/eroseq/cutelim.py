"""Cut elimination as a derivation-to-derivation transformation.

``eliminate_cut`` rewrites a proof into a cut-free derivation of the
same end-sequent.  Inner cuts are eliminated first; one cut over
cut-free subtrees is reduced by the usual case split: axioms and
weakening-introduced cut formulas disappear, a cut formula principal on
both sides is replaced by cuts on its immediate subformulas (for a
question: iterated cuts on its direct answers against the premises of
the eliminating rule), and otherwise the cut permutes into the premises
of whichever side did not just introduce the cut formula.  Context
merges are restored with weakening and expansion steps, so the reduct's
root is exactly the cut's conclusion.

Paraproofs are rejected up front: cutting a question that is principal
in both its introduction (right) and elimination (left) rules charges
the question's answers to the defeater set while recording them in the
background, so the conclusion of such a cut is always defeated and the
input never classifies as a proof.

Rewriting may pass through transiently defeated sequents; the final
cut-free tree is re-classified, never assumed sound.
"""

from __future__ import annotations

from .calculus import (
    Annotation,
    Classification,
    Derivation,
    InvalidDerivationError,
    Rule,
    apply_rule,
    classify,
    conclude,
    is_cut_free,
    iter_nodes,
    pad,
    validate_derivation,
)
from .formula import (
    Atom,
    Conj,
    Disj,
    Formula,
    Impl,
    Neg,
    Question,
    is_dwff,
    render_formula,
    subformulas,
)
from .sequent import Sequent


class ParaproofInputError(ValueError):
    """Input derivation contains a defeated sequent; nothing to normalize."""


class CutEliminationError(ValueError):
    """The transformer met a configuration it has no reduction for."""


def is_analytic(d: Derivation) -> bool:
    """Every formula in the tree is a subformula of the end-sequent.

    Constituents count as subformulas of their question; defeater-set
    members are exempt on both sides.
    """
    violations = validate_derivation(d)
    if violations:
        raise InvalidDerivationError(violations)
    root = d.conclusion
    allowed: frozenset[Formula] = frozenset()
    for f in root.background | root.antecedent | root.succedent:
        allowed |= subformulas(f)
    for _, node in iter_nodes(d):
        s = node.conclusion
        for f in s.background | s.antecedent | s.succedent:
            if f not in allowed:
                return False
    return True


def _degree(f: Formula) -> int:
    if isinstance(f, Atom):
        return 1
    if isinstance(f, Neg):
        return 1 + _degree(f.body)
    if isinstance(f, (Conj, Disj, Impl)):
        return 1 + _degree(f.left) + _degree(f.right)
    return 1 + sum(_degree(c) for c in f.constituents)


def _introduces_succ(d: Derivation, f: Formula) -> bool:
    """Did the last rule of ``d`` introduce ``f`` into the succedent?"""
    ann = d.annotation
    if d.rule is Rule.AXIOM:
        return d.conclusion.succedent == frozenset([f])
    if d.rule in (Rule.CONJ_R, Rule.DISJ_R, Rule.IMPL_R, Rule.NEG_R):
        return ann.principal == f
    if d.rule in (Rule.QR1, Rule.QR2):
        return ann.question == f
    if d.rule is Rule.RW:
        return ann.formula == f and f not in d.premises[0].conclusion.succedent
    return False


def _introduces_ant(d: Derivation, f: Formula) -> bool:
    """Did the last rule of ``d`` introduce ``f`` into the antecedent?"""
    ann = d.annotation
    if d.rule is Rule.AXIOM:
        return d.conclusion.antecedent == frozenset([f])
    if d.rule in (Rule.CONJ_L, Rule.DISJ_L, Rule.IMPL_L, Rule.NEG_L):
        return ann.principal == f
    if d.rule is Rule.QL1:
        return ann.question == f
    if d.rule is Rule.QL2:
        return ann.source == f
    if d.rule is Rule.LW:
        return ann.formula == f and f not in d.premises[0].conclusion.antecedent
    return False


def _consumed_ant(d: Derivation, i: int) -> frozenset[Formula]:
    """Formulas the last rule of ``d`` consumes from premise i's antecedent."""
    ann = d.annotation
    rule = d.rule
    if rule is Rule.CONJ_L:
        return frozenset([ann.principal.left, ann.principal.right])
    if rule is Rule.DISJ_L:
        return frozenset([ann.principal.left if i == 0 else ann.principal.right])
    if rule is Rule.IMPL_L:
        return frozenset() if i == 0 else frozenset([ann.principal.right])
    if rule is Rule.IMPL_R:
        return frozenset([ann.principal.left])
    if rule is Rule.NEG_R:
        return frozenset([ann.principal.body])
    if rule is Rule.QL1:
        return frozenset([ann.question.constituents[i]])
    if rule is Rule.QR2:
        return frozenset() if i == 0 else frozenset([ann.question.constituents[i - 1]])
    if rule is Rule.QL2:
        n = len(ann.source.constituents)
        if i < n:
            return frozenset([ann.source.constituents[i]])
        return frozenset([ann.question.constituents[i - n]])
    if rule is Rule.CUT:
        return frozenset() if i == 0 else frozenset([ann.formula])
    return frozenset()


def _consumed_succ(d: Derivation, i: int) -> frozenset[Formula]:
    """Formulas the last rule of ``d`` consumes from premise i's succedent."""
    ann = d.annotation
    rule = d.rule
    if rule is Rule.CONJ_R:
        return frozenset([ann.principal.left if i == 0 else ann.principal.right])
    if rule is Rule.DISJ_R:
        return frozenset([ann.principal.left, ann.principal.right])
    if rule is Rule.IMPL_R:
        return frozenset([ann.principal.right])
    if rule is Rule.IMPL_L:
        return frozenset([ann.principal.left]) if i == 0 else frozenset()
    if rule is Rule.NEG_L:
        return frozenset([ann.principal.body])
    if rule is Rule.QR1:
        return frozenset(ann.question.constituents)
    if rule is Rule.QR2:
        if i == 0:
            return frozenset(ann.question.constituents)
        return frozenset([ann.source.constituents[ann.targets[i - 1]]])
    if rule is Rule.QL2:
        n = len(ann.source.constituents)
        if i < n:
            return frozenset()
        return frozenset([ann.source.constituents[ann.targets[i - n]]])
    if rule is Rule.CUT:
        return frozenset([ann.formula]) if i == 0 else frozenset()
    return frozenset()


def _cut_target(left: Sequent, right: Sequent, f: Formula) -> Sequent:
    return conclude(Rule.CUT, [left, right], Annotation(formula=f))


def _principal_reduction(L: Derivation, R: Derivation, f: Formula, target: Sequent) -> Derivation:
    if isinstance(f, Conj):
        (p1, p2), (r1,) = L.premises, R.premises
        d = _reduce(p1, r1, f.left)
        d = _reduce(p2, d, f.right)
        return pad(d, target)
    if isinstance(f, Disj):
        (p1,), (r1, r2) = L.premises, R.premises
        d = _reduce(p1, r1, f.left)
        d = _reduce(d, r2, f.right)
        return pad(d, target)
    if isinstance(f, Impl):
        (p1,), (r1, r2) = L.premises, R.premises
        d = _reduce(p1, r2, f.right)
        d = _reduce(r1, d, f.left)
        return pad(d, target)
    if isinstance(f, Neg):
        (p1,), (r1,) = L.premises, R.premises
        return pad(_reduce(r1, p1, f.body), target)
    if isinstance(f, Question):
        if L.rule is Rule.QR1:
            # question principal in both its introduction and elimination:
            # the defeater/background clash makes every such cut a paraproof
            raise ParaproofInputError(
                "cut on a question principal in right introduction and left elimination"
            )
        # L.rule is QR2: chain the alpha premise through the eliminating
        # rule's answer premises, cutting one direct answer at a time.
        alpha = L.premises[0]
        if R.rule is Rule.QL1:
            answer_premises = R.premises
        else:  # QL2 with source == f
            answer_premises = R.premises[: len(f.constituents)]
        d = alpha
        for b, premise in zip(f.constituents, answer_premises):
            d = _reduce(d, premise, b)
        return pad(d, target)
    raise CutEliminationError(f"no principal reduction for {render_formula(f)}")


def _permute_right(L: Derivation, R: Derivation, f: Formula, target: Sequent) -> Derivation:
    """Push the cut into the premises of R that carry ``f`` in the antecedent."""
    if R.rule is Rule.QR2 and R.annotation.source == f:
        raise CutEliminationError(
            "cut formula is the discharging question of a right question introduction"
        )
    carriers = [
        i
        for i, p in enumerate(R.premises)
        if f in p.conclusion.antecedent - _consumed_ant(R, i)
    ]
    if not carriers:
        raise CutEliminationError(
            f"cut formula {render_formula(f)} not traceable in right subtree"
        )
    new_premises = list(R.premises)
    for i in carriers:
        new_premises[i] = _reduce(L, R.premises[i], f)
    if R.rule is Rule.LW and R.annotation.formula == f:
        # no-op weakening of the cut formula: drop the step
        return pad(new_premises[0], target)
    if R.rule is Rule.QL1:
        new_premises = _equalize_succedents(new_premises)
    try:
        out = apply_rule(R.rule, new_premises, R.annotation)
    except Exception as exc:
        raise CutEliminationError(f"right permutation blocked: {exc}") from exc
    return pad(out, target)


def _permute_left(L: Derivation, R: Derivation, f: Formula, target: Sequent) -> Derivation:
    """Push the cut into the premises of L that carry ``f`` in the succedent."""
    if L.rule is Rule.QL2 and L.annotation.question == f:
        raise CutEliminationError(
            "cut formula is the passed-through question of a left question elimination"
        )
    carriers = [
        i
        for i, p in enumerate(L.premises)
        if f in p.conclusion.succedent - _consumed_succ(L, i)
    ]
    if not carriers:
        raise CutEliminationError(
            f"cut formula {render_formula(f)} not traceable in left subtree"
        )
    new_premises = list(L.premises)
    for i in carriers:
        new_premises[i] = _reduce(L.premises[i], R, f)
    if L.rule is Rule.RW and L.annotation.formula == f:
        return pad(new_premises[0], target)
    if L.rule is Rule.QL1:
        new_premises = _equalize_succedents(new_premises)
    try:
        out = apply_rule(L.rule, new_premises, L.annotation)
    except Exception as exc:
        raise CutEliminationError(f"left permutation blocked: {exc}") from exc
    return pad(out, target)


def _equalize_succedents(premises: list[Derivation]) -> list[Derivation]:
    """RW-pad premises to one shared succedent (left question elimination)."""
    union = frozenset().union(*(p.conclusion.succedent for p in premises))
    if not all(is_dwff(g) for g in union):
        raise CutEliminationError(
            "permutation through left question elimination needs a declarative succedent"
        )
    out = []
    for p in premises:
        s = p.conclusion
        out.append(pad(p, Sequent(s.background, s.antecedent, s.defeaters, union)))
    return out


def _reduce(L: Derivation, R: Derivation, f: Formula) -> Derivation:
    """Cut-free derivation of the conclusion of cutting ``f`` between L and R."""
    target = _cut_target(L.conclusion, R.conclusion, f)
    if L.rule is Rule.AXIOM:
        return pad(R, target)
    if R.rule is Rule.AXIOM:
        return pad(L, target)
    if L.rule is Rule.RW and L.annotation.formula == f and f not in L.premises[0].conclusion.succedent:
        return pad(L.premises[0], target)
    if R.rule is Rule.LW and R.annotation.formula == f and f not in R.premises[0].conclusion.antecedent:
        return pad(R.premises[0], target)
    if _introduces_succ(L, f) and _introduces_ant(R, f):
        return _principal_reduction(L, R, f, target)
    if not _introduces_ant(R, f):
        return _permute_right(L, R, f, target)
    return _permute_left(L, R, f, target)


def _elim(d: Derivation) -> Derivation:
    premises = tuple(_elim(p) for p in d.premises)
    if d.rule is Rule.CUT:
        return _reduce(premises[0], premises[1], d.annotation.formula)
    return Derivation(d.conclusion, d.rule, premises, d.annotation)


def eliminate_cut(d: Derivation) -> Derivation:
    """A validated cut-free derivation with the same root as ``d``.

    Requires a proof: paraproofs are rejected with
    :class:`ParaproofInputError` (some cuts, notably on a question
    principal in both question rules, can only conclude defeated
    sequents).  The output is re-validated and re-classified.
    """
    violations = validate_derivation(d)
    if violations:
        raise InvalidDerivationError(violations)
    cls = classify(d)
    if not cls.is_proof:
        raise ParaproofInputError(f"defeated at {', '.join(cls.defeated)}")
    if is_cut_free(d):
        return d
    out = _elim(d)
    out_violations = validate_derivation(out)
    if out_violations:  # pragma: no cover - internal consistency guard
        raise CutEliminationError("; ".join(out_violations))
    if out.conclusion != d.conclusion:  # pragma: no cover
        raise CutEliminationError("end-sequent changed during normalization")
    if not is_cut_free(out):  # pragma: no cover
        raise CutEliminationError("cut survived normalization")
    final: Classification = classify(out)
    if not final.is_proof:
        raise CutEliminationError(
            f"normal form is defeated at {', '.join(final.defeated)}"
        )
    return out
