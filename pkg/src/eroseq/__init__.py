"""Defeasible sequent calculus for erotetic evocation and implication.

The package splits into a syntax layer (:mod:`eroseq.formula`,
:mod:`eroseq.sequent`), a brute-force semantic oracle
(:mod:`eroseq.semantics`), a trusted rule-checking kernel
(:mod:`eroseq.calculus`), backward proof search (:mod:`eroseq.prover`),
cut elimination (:mod:`eroseq.cutelim`) and a bridge to the axiomatic
evocation system (:mod:`eroseq.pmce`).  ``eroseq.cli`` wraps it all for
the command line.

All values are immutable after construction and safe to share across
threads; search memo tables are local to one query.
"""

from .calculus import (
    Annotation,
    Classification,
    Derivation,
    InvalidDerivationError,
    Rule,
    RuleViolation,
    apply_rule,
    axiom,
    classify,
    conclude,
    derivation_from_json,
    derivation_to_json,
    is_cut_free,
    pad,
    render_derivation,
    validate_derivation,
    validate_step,
)
from .cutelim import CutEliminationError, ParaproofInputError, eliminate_cut, is_analytic
from .formula import (
    Atom,
    Conj,
    Disj,
    Dwff,
    EquiformAnswersError,
    Formula,
    FormulaError,
    Impl,
    Neg,
    NestedQuestionError,
    ParseError,
    Question,
    QuestionArityError,
    atoms,
    declarative_disjunction,
    direct_answers,
    is_dwff,
    parse_formula,
    render_formula,
    subformulas,
)
from .pmce import (
    ESequent,
    MinimalityError,
    PmceRuleError,
    apply_pmce_rule,
    is_pmce_axiom,
    lk_correlate,
    parse_esequent,
    render_esequent,
)
from .prover import (
    Verdict,
    default_bound,
    derive,
    evocation_sequent,
    prove,
    prove_evocation,
    prove_regular_implication,
    regular_implication_sequent,
)
from .semantics import (
    ATOM_LIMIT,
    TooManyAtomsError,
    evaluate,
    evokes,
    implies_erotetic,
    implies_regular,
    implies_regular_pure,
    is_tautology,
    mc_entails,
    question_sound_under,
    valuations,
)
from .sequent import (
    DefeaterError,
    Sequent,
    compatible,
    declarativize,
    defeater_set,
    is_defeated,
    parse_sequent,
    render_sequent,
    sequent,
)

__version__ = "0.1.0"
