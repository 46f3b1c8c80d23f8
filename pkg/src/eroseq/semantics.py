"""Brute-force classical semantics for d-wffs and questions.

A valuation is a mapping from atom names to booleans, total on the atoms
of the instance at hand.  Entailment is decided by enumerating every
valuation over the atoms that actually occur, which is exact and keeps
the module usable as an independent oracle for the proof machinery.

Multiple-conclusion entailment ``mc_entails(X, Y)`` holds when no
valuation makes every member of X true and every member of Y false.
Single-conclusion entailment is the singleton case ``mc_entails(X, {B})``;
no separate function is provided.  Relative soundness of a question Q
with respect to X is ``mc_entails(X, direct_answers(Q))``.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, Mapping

from .formula import (
    Atom,
    Conj,
    Disj,
    Dwff,
    Impl,
    Neg,
    Question,
    atoms_of,
    declarative_disjunction,
    direct_answers,
    is_dwff,
    render_formula,
)

Valuation = Mapping[str, bool]

#: Instance-size guard: enumeration is meant for desk-scale problems.
ATOM_LIMIT = 24


class TooManyAtomsError(ValueError):
    """Instance exceeds the enumeration guard of ATOM_LIMIT atoms."""


class MissingAtomError(KeyError):
    """A formula mentions an atom the valuation does not assign."""


def evaluate(valuation: Valuation, f: Dwff) -> bool:
    """Classical truth value of ``f`` under ``valuation``."""
    if isinstance(f, Atom):
        try:
            return valuation[f.name]
        except KeyError:
            raise MissingAtomError(f.name) from None
    if isinstance(f, Neg):
        return not evaluate(valuation, f.body)
    if isinstance(f, Conj):
        return evaluate(valuation, f.left) and evaluate(valuation, f.right)
    if isinstance(f, Disj):
        return evaluate(valuation, f.left) or evaluate(valuation, f.right)
    if isinstance(f, Impl):
        return (not evaluate(valuation, f.left)) or evaluate(valuation, f.right)
    raise TypeError(f"evaluate expects a d-wff, got {render_formula(f)}")


def valuations(names: Iterable[str]) -> Iterator[dict[str, bool]]:
    """All assignments over ``names`` (guarded by ATOM_LIMIT)."""
    ordered = sorted(set(names))
    if len(ordered) > ATOM_LIMIT:
        raise TooManyAtomsError(f"{len(ordered)} atoms exceed the limit of {ATOM_LIMIT}")
    for bits in product((False, True), repeat=len(ordered)):
        yield dict(zip(ordered, bits))


def _check_declarative(formulas: Iterable[Dwff], role: str) -> tuple[Dwff, ...]:
    out = tuple(formulas)
    for f in out:
        if not is_dwff(f):
            raise TypeError(f"{role} must contain d-wffs only, got {render_formula(f)}")
    return out


def mc_entails(premises: Iterable[Dwff], succedents: Iterable[Dwff]) -> bool:
    """True iff no valuation makes all premises true and all succedents false."""
    xs = _check_declarative(premises, "premise set")
    ys = _check_declarative(succedents, "succedent set")
    for v in valuations(atoms_of(xs) | atoms_of(ys)):
        if all(evaluate(v, x) for x in xs) and not any(evaluate(v, y) for y in ys):
            return False
    return True


def is_tautology(f: Dwff) -> bool:
    return mc_entails((), (f,))


def question_sound_under(valuation: Valuation, q: Question) -> bool:
    """True iff some direct answer of ``q`` is true under ``valuation``."""
    return evaluate(valuation, declarative_disjunction(q))


def evokes(premises: Iterable[Dwff], q: Question) -> bool:
    """Erotetic evocation: the premises make ``q`` sound without answering it.

    Holds iff (i) the premises mc-entail the direct answers of ``q`` and
    (ii) no single direct answer is entailed.
    """
    xs = tuple(premises)
    answers = direct_answers(q)
    if not mc_entails(xs, answers):
        return False
    return not any(mc_entails(xs, (a,)) for a in answers)


def _proper_nonempty_subsets(items: tuple[Dwff, ...]) -> Iterator[tuple[Dwff, ...]]:
    n = len(items)
    for mask in range(1, (1 << n) - 1):
        yield tuple(items[i] for i in range(n) if mask >> i & 1)


def implies_erotetic(q: Question, premises: Iterable[Dwff], q1: Question) -> bool:
    """Erotetic implication of ``q1`` by ``q`` on the basis of ``premises``.

    Holds iff (i) every direct answer to ``q``, with the premises,
    mc-entails the answers of ``q1``, and (ii) every direct answer to
    ``q1``, with the premises, mc-entails some nonempty proper subset of
    the answers of ``q``.
    """
    xs = tuple(premises)
    da, db = direct_answers(q), direct_answers(q1)
    if not all(mc_entails(xs + (a,), db) for a in da):
        return False
    return all(
        any(mc_entails(xs + (b,), sub) for sub in _proper_nonempty_subsets(da))
        for b in db
    )


def implies_regular(q: Question, premises: Iterable[Dwff], q1: Question) -> bool:
    """Regular erotetic implication: clause (ii) asks for a single answer.

    Holds iff (i) every direct answer to ``q``, with the premises,
    mc-entails the answers of ``q1``, and (ii) every direct answer to
    ``q1``, with the premises, entails some single direct answer of ``q``.
    """
    xs = tuple(premises)
    da, db = direct_answers(q), direct_answers(q1)
    if not all(mc_entails(xs + (a,), db) for a in da):
        return False
    return all(any(mc_entails(xs + (b,), (a,)) for a in da) for b in db)


def implies_regular_pure(q: Question, q1: Question) -> bool:
    """Regular pure erotetic implication: the auxiliary set is empty."""
    return implies_regular(q, (), q1)
