"""Backward proof search for defeasible erotetic sequents.

The search is cut-free and analytic: goals are (antecedent, succedent)
pairs, decomposed backward through the kernel rules.  Background and
defeater sets are handled by deferred padding: the search ignores the
goal's background and defeater sets except as *budgets* -- a rule
application whose forced contribution (answer sets recorded by the
question rules, answer singletons charged by right question
introduction) would exceed the goal's sets is pruned -- and the finished
core derivation is padded up to the exact goal with BE/DE steps.

``prove`` follows the standard recipe for this calculus: a defeated goal
has no proof and is reported as such without search; otherwise a found
cut-free derivation all of whose sequents are undefeated is a proof.
Absence of a derivation within the bound is reported as not derivable,
flagged exhaustive when no branch was cut off by the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .calculus import Annotation, Derivation, Rule, apply_rule, axiom, pad
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
)
from .sequent import Sequent, is_defeated, sequent

PROOF = "proof"
DEFEATED = "defeated"
NOT_DERIVABLE = "not-derivable"


@dataclass(frozen=True)
class Verdict:
    """Outcome of proof search: a proof, a defeat report, or absence."""

    outcome: str
    derivation: Derivation | None = None
    bound: int = 0
    exhausted: bool = False

    @property
    def is_proof(self) -> bool:
        return self.outcome == PROOF


def _size(f: Formula) -> int:
    if isinstance(f, Atom):
        return 1
    if isinstance(f, Neg):
        return 1 + _size(f.body)
    if isinstance(f, (Conj, Disj, Impl)):
        return 1 + _size(f.left) + _size(f.right)
    return 1 + sum(_size(c) for c in f.constituents)


def default_bound(s: Sequent) -> int:
    """Twice the subformula occurrences in the goal plus its answer count."""
    formulas = s.antecedent | s.succedent
    occurrences = sum(_size(f) for f in formulas)
    answers = sum(len(f.constituents) for f in formulas if isinstance(f, Question))
    return 2 * occurrences + answers + 8


def _sorted(formulas: Iterable[Formula]) -> list[Formula]:
    return sorted(formulas, key=formula_key)


def _questions(formulas: frozenset[Formula]) -> list[Question]:
    return [f for f in _sorted(formulas) if isinstance(f, Question)]


class _Search:
    """One backward search; memo tables are per-search."""

    def __init__(
        self,
        allowed_background: frozenset[Formula],
        allowed_defeaters: frozenset[frozenset[Dwff]],
        use_qr2: bool,
        use_ql2: bool,
        require_undefeated: bool,
    ):
        self.allowed_background = allowed_background
        self.allowed_defeaters = allowed_defeaters
        self.use_qr2 = use_qr2
        self.use_ql2 = use_ql2
        self.require_undefeated = require_undefeated
        self.memo: dict[tuple[frozenset, frozenset], Derivation | None] = {}
        self.bound_hits = 0

    # -- option generators: (premise goals, builder) pairs ----------------

    def _options(self, ant: frozenset, succ: frozenset) -> Iterator[tuple[list, object]]:
        yield from self._declarative_single(ant, succ)
        yield from self._declarative_branching(ant, succ)
        yield from self._erotetic(ant, succ)
        yield from self._drops(ant, succ)

    def _declarative_single(self, ant, succ):
        for f in _sorted(ant):
            if isinstance(f, Conj):
                yield (
                    [((ant - {f}) | {f.left, f.right}, succ)],
                    (Rule.CONJ_L, Annotation(principal=f)),
                )
            elif isinstance(f, Neg):
                yield ([(ant - {f}, succ | {f.body})], (Rule.NEG_L, Annotation(principal=f)))
        for f in _sorted(succ):
            if isinstance(f, Disj):
                yield (
                    [(ant, (succ - {f}) | {f.left, f.right})],
                    (Rule.DISJ_R, Annotation(principal=f)),
                )
            elif isinstance(f, Impl):
                yield (
                    [(ant | {f.left}, (succ - {f}) | {f.right})],
                    (Rule.IMPL_R, Annotation(principal=f)),
                )
            elif isinstance(f, Neg):
                yield ([(ant | {f.body}, succ - {f})], (Rule.NEG_R, Annotation(principal=f)))

    def _declarative_branching(self, ant, succ):
        for f in _sorted(ant):
            if isinstance(f, Disj):
                rest = ant - {f}
                yield (
                    [(rest | {f.left}, succ), (rest | {f.right}, succ)],
                    (Rule.DISJ_L, Annotation(principal=f)),
                )
            elif isinstance(f, Impl):
                rest = ant - {f}
                yield (
                    [(rest, succ | {f.left}), (rest | {f.right}, succ)],
                    (Rule.IMPL_L, Annotation(principal=f)),
                )
        for f in _sorted(succ):
            if isinstance(f, Conj):
                rest = succ - {f}
                yield (
                    [(ant, rest | {f.left}), (ant, rest | {f.right})],
                    (Rule.CONJ_R, Annotation(principal=f)),
                )

    def _erotetic(self, ant, succ):
        ant_questions = _questions(ant)
        succ_questions = _questions(succ)
        if not succ_questions and ant_questions:
            # left question elimination needs an all-declarative succedent
            for q in ant_questions:
                if not frozenset(q.constituents) <= self.allowed_background:
                    continue
                rest = ant - {q}
                yield (
                    [(rest | {a}, succ) for a in q.constituents],
                    (Rule.QL1, Annotation(question=q)),
                )
        if succ_questions and all(is_dwff(f) for f in ant):
            # right question introduction needs an all-declarative antecedent
            for q in succ_questions:
                charge = frozenset(frozenset([a]) for a in q.constituents)
                if not charge <= self.allowed_defeaters:
                    continue
                yield (
                    [(ant, (succ - {q}) | frozenset(q.constituents))],
                    (Rule.QR1, Annotation(question=q)),
                )
        for src in ant_questions:
            for tgt in succ_questions:
                if self.use_qr2 and frozenset(tgt.constituents) <= self.allowed_background:
                    yield self._qr2_option(ant, succ, src, tgt)
                if self.use_ql2 and (
                    frozenset(src.constituents) | frozenset(tgt.constituents)
                ) <= self.allowed_background:
                    yield self._ql2_option(ant, succ, src, tgt)

    def _qr2_option(self, ant, succ, src, tgt):
        side = succ - {tgt}
        alpha_goal = (ant, side | frozenset(tgt.constituents))
        beta_goals = [((ant - {src}) | {b}, side) for b in tgt.constituents]
        return ([alpha_goal], ("qr2", src, tgt, beta_goals))

    def _ql2_option(self, ant, succ, src, tgt):
        first_goals = [((ant - {src}) | {a}, succ) for a in src.constituents]
        side = succ - {tgt}
        second_goals = [((ant - {src}) | {b}, side) for b in tgt.constituents]
        return (first_goals, ("ql2", src, tgt, second_goals))

    def _drops(self, ant, succ):
        for q in _questions(ant):
            yield ([(ant - {q}, succ)], (Rule.LW, Annotation(formula=q)))
        for q in _questions(succ):
            yield ([(ant, succ - {q})], (Rule.RW, Annotation(formula=q)))

    # -- core recursion ----------------------------------------------------

    def _accept(self, node: Derivation, ant, succ) -> Derivation | None:
        conclusion = node.conclusion
        if conclusion.antecedent != ant or conclusion.succedent != succ:
            return None  # set-level collapse made the instance miss the goal
        if not conclusion.background <= self.allowed_background:
            return None
        if not conclusion.defeaters <= self.allowed_defeaters:
            return None
        if self.require_undefeated and conclusion.defeaters and is_defeated(conclusion):
            return None
        return node

    def _close(self, ant, succ) -> Derivation | None:
        overlap = [f for f in ant & succ if isinstance(f, Atom)]
        if not overlap:
            return None
        a = min(overlap, key=formula_key)
        d = axiom(a)
        for f in _sorted(ant - {a}):
            d = apply_rule(Rule.LW, [d], Annotation(formula=f))
        for f in _sorted(succ - {a}):
            d = apply_rule(Rule.RW, [d], Annotation(formula=f))
        return d

    def _solve_targeted(self, goal_ant, goal_side, src, depth) -> tuple[Derivation, int] | None:
        """Solve one B-premise of QR2/QL2 against some answer of ``src``."""
        for index, a in enumerate(src.constituents):
            d = self.run(goal_ant, goal_side | {a}, depth)
            if d is not None:
                return d, index
        return None

    def run(self, ant: frozenset, succ: frozenset, depth: int) -> Derivation | None:
        key = (ant, succ)
        if key in self.memo:
            return self.memo[key]
        if depth <= 0:
            self.bound_hits += 1
            return None
        closed = self._close(ant, succ)
        if closed is not None:
            self.memo[key] = closed
            return closed
        hits_before = self.bound_hits
        for premise_goals, directive in self._options(ant, succ):
            node = self._attempt(premise_goals, directive, ant, succ, depth - 1)
            if node is not None:
                self.memo[key] = node
                return node
        if self.bound_hits == hits_before:
            self.memo[key] = None  # exhaustive failure, safe to cache
        return None

    def _attempt(self, premise_goals, directive, ant, succ, depth) -> Derivation | None:
        premises = []
        for goal_ant, goal_succ in premise_goals:
            d = self.run(goal_ant, goal_succ, depth)
            if d is None:
                return None
            premises.append(d)
        if isinstance(directive, tuple) and directive[0] == "qr2":
            _, src, tgt, beta_goals = directive
            targets = []
            for goal_ant, goal_side in beta_goals:
                solved = self._solve_targeted(goal_ant, goal_side, src, depth)
                if solved is None:
                    return None
                beta, index = solved
                premises.append(beta)
                targets.append(index)
            annotation = Annotation(question=tgt, source=src, targets=tuple(targets))
            rule = Rule.QR2
        elif isinstance(directive, tuple) and directive[0] == "ql2":
            _, src, tgt, second_goals = directive
            targets = []
            for goal_ant, goal_side in second_goals:
                solved = self._solve_targeted(goal_ant, goal_side, src, depth)
                if solved is None:
                    return None
                beta, index = solved
                premises.append(beta)
                targets.append(index)
            annotation = Annotation(question=tgt, source=src, targets=tuple(targets))
            rule = Rule.QL2
        else:
            rule, annotation = directive
        node = apply_rule(rule, premises, annotation)
        return self._accept(node, ant, succ)


def _run_search(
    s: Sequent,
    bound: int,
    use_qr2: bool,
    use_ql2: bool,
    require_undefeated: bool,
) -> tuple[Derivation | None, bool]:
    search = _Search(s.background, s.defeaters, use_qr2, use_ql2, require_undefeated)
    core = search.run(s.antecedent, s.succedent, bound)
    exhausted = search.bound_hits == 0
    if core is None:
        return None, exhausted
    return pad(core, s), exhausted


def derive(
    s: Sequent,
    bound: int | None = None,
    *,
    use_qr2: bool = True,
    use_ql2: bool = True,
    require_undefeated: bool = False,
) -> Derivation | None:
    """A derivation whose root is exactly ``s``, or None within the bound."""
    d, _ = _run_search(
        s, default_bound(s) if bound is None else bound, use_qr2, use_ql2, require_undefeated
    )
    return d


def prove(
    s: Sequent,
    bound: int | None = None,
    *,
    use_qr2: bool = True,
    use_ql2: bool = True,
) -> Verdict:
    """Defeated, Proof(derivation) or NotDerivable(bound)."""
    limit = default_bound(s) if bound is None else bound
    if is_defeated(s):
        return Verdict(DEFEATED, bound=limit)
    d, exhausted = _run_search(s, limit, use_qr2, use_ql2, require_undefeated=True)
    if d is not None:
        return Verdict(PROOF, derivation=d, bound=limit)
    return Verdict(NOT_DERIVABLE, bound=limit, exhausted=exhausted)


def evocation_sequent(premises: Iterable[Dwff], q: Question) -> Sequent:
    """``. | X |-<{{A1},...,{An}}> ?{A1,...,An}`` for the evocation query."""
    return sequent(
        antecedent=premises,
        defeaters=[[a] for a in q.constituents],
        succedent=[q],
    )


def prove_evocation(
    premises: Iterable[Dwff],
    q: Question,
    bound: int | None = None,
    *,
    use_qr2: bool = True,
    use_ql2: bool = True,
) -> Verdict:
    """Prove the evocation sequent; Proof exactly when the premises evoke ``q``."""
    return prove(evocation_sequent(premises, q), bound, use_qr2=use_qr2, use_ql2=use_ql2)


def regular_implication_sequent(
    q: Question, premises: Iterable[Dwff], q1: Question
) -> Sequent:
    """``[A],[B] | X, ?[A] |-<{}> ?[B]`` with no background beyond the forced one."""
    return sequent(
        background=frozenset(q.constituents) | frozenset(q1.constituents),
        antecedent=frozenset(premises) | {q},
        succedent=[q1],
    )


def prove_regular_implication(
    q: Question,
    premises: Iterable[Dwff],
    q1: Question,
    bound: int | None = None,
    *,
    use_qr2: bool = True,
    use_ql2: bool = True,
) -> Verdict:
    """Prove the implication sequent; Proof exactly on regular erotetic implication."""
    return prove(
        regular_implication_sequent(q, premises, q1), bound, use_qr2=use_qr2, use_ql2=use_ql2
    )
