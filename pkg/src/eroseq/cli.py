"""Command-line front end.

Exit codes: 0 for an affirmative outcome (parsed / proof found /
defeated as asked / relation holds / axiom recognized), 1 for a
negative one, 2 for usage or parse errors, and 3 when the semantic
oracle and the prover disagree on an evocation or implication query
(a bug signal; this should never happen).
"""

from __future__ import annotations

import argparse
import sys

from . import pmce as pmce_mod
from . import semantics
from .calculus import (
    InvalidDerivationError,
    classify,
    derivation_from_json,
    derivation_to_json,
    render_derivation,
)
from .cutelim import CutEliminationError, ParaproofInputError, eliminate_cut
from .formula import (
    Dwff,
    FormulaError,
    Question,
    is_dwff,
    parse_formula,
    render_formula,
)
from .prover import (
    DEFEATED,
    NOT_DERIVABLE,
    PROOF,
    Verdict,
    prove,
    prove_evocation,
    prove_regular_implication,
)
from .sequent import (
    DefeaterError,
    is_defeated,
    parse_sequent,
    render_sequent,
)

PARSE_ERRORS = (FormulaError, DefeaterError, InvalidDerivationError, ValueError, KeyError)


def _input_text(args, attribute="text") -> str:
    value = getattr(args, attribute, None)
    if value is None or value == "-":
        return sys.stdin.read()
    return value


def _parse_formula_list(text: str) -> tuple:
    text = text.strip()
    if not text or text == ".":
        return ()
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "{(":
            depth += 1
        elif ch in "})":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return tuple(parse_formula(p) for p in parts)


def _parse_dwffs(text: str) -> tuple[Dwff, ...]:
    out = _parse_formula_list(text)
    for f in out:
        if not is_dwff(f):
            raise FormulaError(f"expected d-wffs, got {render_formula(f)}")
    return out


def _parse_question(text: str) -> Question:
    f = parse_formula(text)
    if not isinstance(f, Question):
        raise FormulaError(f"expected a question, got {render_formula(f)}")
    return f


def _emit_derivation(derivation, args) -> None:
    if args.emit == "tree-format":
        print(derivation_to_json(derivation, indent=2))
    else:
        print(render_derivation(derivation))


def _report_verdict(verdict: Verdict, args) -> None:
    if verdict.outcome == PROOF:
        print("proof")
        _emit_derivation(verdict.derivation, args)
    elif verdict.outcome == DEFEATED:
        print("defeated")
    else:
        qualifier = "exhaustive" if verdict.exhausted else f"within bound {verdict.bound}"
        print(f"not derivable ({qualifier})")


def cmd_parse(args) -> int:
    f = parse_formula(_input_text(args))
    print(render_formula(f))
    return 0


def cmd_prove(args) -> int:
    s = parse_sequent(_input_text(args))
    verdict = prove(s, args.bound, use_qr2=not args.no_qr2, use_ql2=not args.no_ql2)
    _report_verdict(verdict, args)
    return 0 if verdict.is_proof else 1


def cmd_defeat(args) -> int:
    s = parse_sequent(_input_text(args))
    defeated = is_defeated(s, route=args.oracle)
    print("defeated" if defeated else "undefeated")
    return 0 if defeated else 1


def cmd_evoke(args) -> int:
    premises = _parse_dwffs(args.premises)
    question = _parse_question(args.question)
    oracle = semantics.evokes(premises, question)
    verdict = prove_evocation(
        premises, question, args.bound, use_qr2=not args.no_qr2, use_ql2=not args.no_ql2
    )
    print(f"oracle: {'evoked' if oracle else 'not evoked'}")
    print(f"prover: {verdict.outcome}")
    if verdict.is_proof:
        _emit_derivation(verdict.derivation, args)
    if oracle != verdict.is_proof:
        print("oracle and prover disagree", file=sys.stderr)
        return 3
    return 0 if oracle else 1


def cmd_imply(args) -> int:
    q = _parse_question(args.q)
    q1 = _parse_question(args.q1)
    premises = _parse_dwffs(args.x) if args.kind != "pure" else ()
    if args.kind == "general":
        oracle = semantics.implies_erotetic(q, premises, q1)
        print(f"oracle: {'implies' if oracle else 'does not imply'}")
        return 0 if oracle else 1
    oracle = semantics.implies_regular(q, premises, q1)
    verdict = prove_regular_implication(
        q, premises, q1, args.bound, use_qr2=not args.no_qr2, use_ql2=not args.no_ql2
    )
    print(f"oracle: {'implies' if oracle else 'does not imply'}")
    print(f"prover: {verdict.outcome}")
    if verdict.is_proof:
        _emit_derivation(verdict.derivation, args)
    if oracle != verdict.is_proof:
        print("oracle and prover disagree", file=sys.stderr)
        return 3
    return 0 if oracle else 1


def cmd_cutelim(args) -> int:
    derivation = derivation_from_json(_input_text(args))
    try:
        out = eliminate_cut(derivation)
    except ParaproofInputError as exc:
        print(f"paraproof input: {exc}", file=sys.stderr)
        return 1
    except CutEliminationError as exc:
        print(f"cut elimination failed: {exc}", file=sys.stderr)
        return 1
    _emit_derivation(out, args)
    return 0


def cmd_check(args) -> int:
    derivation = derivation_from_json(_input_text(args))
    from .calculus import validate_derivation

    violations = validate_derivation(derivation)
    if violations:
        for v in violations:
            print(v, file=sys.stderr)
        return 1
    cls = classify(derivation)
    print("proof" if cls.is_proof else f"paraproof (defeated at {', '.join(cls.defeated)})")
    return 0 if cls.is_proof else 1


def cmd_pmce_axiom(args) -> int:
    s = pmce_mod.parse_esequent(_input_text(args))
    ok = pmce_mod.is_pmce_axiom(s)
    print("axiom" if ok else "not an axiom")
    return 0 if ok else 1


def cmd_pmce_rule(args) -> int:
    premises = [pmce_mod.parse_esequent(t) for t in args.premises]
    witness = {}
    if args.replacement is not None:
        f = parse_formula(args.replacement)
        if not is_dwff(f):
            raise FormulaError("replacement must be a d-wff")
        witness["replacement"] = f
    if args.question is not None:
        witness["question"] = _parse_question(args.question)
    try:
        conclusion = pmce_mod.apply_pmce_rule(args.rule, premises, **witness)
    except pmce_mod.PmceRuleError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    print(pmce_mod.render_esequent(conclusion))
    return 0


def cmd_pmce_correlate(args) -> int:
    s = pmce_mod.parse_esequent(_input_text(args))
    correlate = pmce_mod.lk_correlate(s, verify_minimal=args.verify_minimal)
    print(render_sequent(correlate))
    return 0


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bound", type=int, default=None, help="search depth limit")
    p.add_argument("--no-qr2", action="store_true", help="disable right question implication")
    p.add_argument("--no-ql2", action="store_true", help="disable left question implication")
    p.add_argument(
        "--emit",
        choices=("text", "tree-format"),
        default="text",
        help="derivation output: readable tree or machine format",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eroseq",
        description="defeasible sequent calculus for questions: parse, prove, check",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a formula and print its canonical form")
    p.add_argument("text", nargs="?", help="formula (stdin when omitted)")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("prove", help="search for a proof of a sequent")
    p.add_argument("text", nargs="?", help="sequent (stdin when omitted)")
    _add_search_flags(p)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("defeat", help="check whether a sequent is defeated")
    p.add_argument("text", nargs="?", help="sequent (stdin when omitted)")
    p.add_argument(
        "--oracle",
        choices=("semantic", "search"),
        default="semantic",
        help="defeat check via valuations or via derivation search",
    )
    p.set_defaults(func=cmd_defeat)

    p = sub.add_parser("evoke", help="does a set of d-wffs evoke a question?")
    p.add_argument("--premises", required=True, help="comma-separated d-wffs ('.' or '' = none)")
    p.add_argument("--question", required=True)
    _add_search_flags(p)
    p.set_defaults(func=cmd_evoke)

    p = sub.add_parser("imply", help="erotetic implication (general, regular or pure)")
    p.add_argument("kind", choices=("general", "regular", "pure"))
    p.add_argument("--q", required=True, help="implying question")
    p.add_argument("--x", default="", help="auxiliary d-wffs (ignored for 'pure')")
    p.add_argument("--q1", required=True, help="implied question")
    _add_search_flags(p)
    p.set_defaults(func=cmd_imply)

    p = sub.add_parser("cutelim", help="eliminate cuts from a serialized proof")
    p.add_argument("text", nargs="?", help="derivation JSON (stdin when omitted)")
    p.add_argument(
        "--emit", choices=("text", "tree-format"), default="tree-format", help="output format"
    )
    p.set_defaults(func=cmd_cutelim)

    p = sub.add_parser("check", help="validate and classify a serialized derivation")
    p.add_argument("text", nargs="?", help="derivation JSON (stdin when omitted)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("pmce", help="axiomatic evocation system bridge")
    pmce_sub = p.add_subparsers(dest="pmce_command", required=True)

    pa = pmce_sub.add_parser("axiom", help="recognize an axiom e-sequent")
    pa.add_argument("text", nargs="?", help="e-sequent (stdin when omitted)")
    pa.set_defaults(func=cmd_pmce_axiom)

    pr = pmce_sub.add_parser("rule", help="apply a primitive rule R1-R4")
    pr.add_argument("rule", choices=("R1", "R2", "R3", "R4"))
    pr.add_argument("--premises", nargs="+", required=True, help="premise e-sequents")
    pr.add_argument("--replacement", help="R2: the classically equivalent formula")
    pr.add_argument("--question", help="R4: the reordered question")
    pr.set_defaults(func=cmd_pmce_rule)

    pc = pmce_sub.add_parser("correlate", help="canonical correlate of an e-sequent")
    pc.add_argument("text", nargs="?", help="e-sequent (stdin when omitted)")
    pc.add_argument("--verify-minimal", action="store_true")
    pc.set_defaults(func=cmd_pmce_correlate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
