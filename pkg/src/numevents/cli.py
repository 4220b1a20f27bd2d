"""Command-line interface.

Exit codes: 0 success, 1 scan found a counterexample, 2 usage error,
3 verdict Unknown, 4 precondition violation, 5 parse error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .algebra import Budget, Outcome, saturate, structure, verify_axioms
from .classify import RULE_ORDER, ClassifyConfig, VerdictKind, classify, replay
from .construct import (
    boolean_from_atoms,
    lift_event,
    mo2_boolean_completion,
    mo_n,
    split_atom,
    zero_one_extension,
)
from .core import complement
from .errors import ParseError, PreconditionError
from .problem import ProblemFile, Report, parse_problem, parse_rational
from .search import (
    DEFAULT_DENOMINATOR_BOUND,
    boolean_embedding_concrete,
    exhaustive_two_valued_scan,
    mo2_interpolation_scan,
)

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_UNKNOWN = 3
EXIT_PRECONDITION = 4
EXIT_PARSE = 5


def _axioms_payload(E):
    report = verify_axioms(E)
    return {
        "holds_a": report.holds_a,
        "holds_b": report.holds_b,
        "holds_c": report.holds_c,
        "all_proper": report.all_proper,
        "non_proper_witnesses": report.non_proper_witnesses,
        "violations": report.violations,
        "warnings": report.warnings,
    }


def _structure_payload(E):
    s = structure(E)
    return {
        "is_algebra": s.is_algebra,
        "is_lattice": s.is_lattice,
        "is_orthomodular": s.is_orthomodular,
        "is_boolean": s.is_boolean,
        "is_concrete": s.is_concrete,
        "atoms": s.atom_list,
        "size": len(E),
    }


def _budget(args) -> Budget:
    env = Budget.from_env()
    return Budget(args.max_elements or env.max_elements, args.max_rounds or env.max_rounds)


def _need_candidate(problem: ProblemFile):
    q = problem.candidate_event()
    if q is None:
        raise PreconditionError("this command needs a candidate event in the problem file")
    return q


def _verdict_payload(verdict, E, q):
    cert = verdict.certificate
    return {
        "verdict": verdict.kind,
        "rule": cert.rule,
        "notes": verdict.notes,
        "rules_attempted": verdict.rules_attempted,
        "certificate_replays": cert.rule == "UNKNOWN" or replay(cert, E, q),
    }


def cmd_verify(problem, args):
    E = problem.event_set()
    result = {"axioms": _axioms_payload(E), "structure": _structure_payload(E), "events": E}
    return result, [], None, EXIT_OK


def cmd_classify(problem, args):
    E = problem.event_set()
    q = _need_candidate(problem)
    cfg = ClassifyConfig(budget=_budget(args), oracle_enabled=not args.no_oracle)
    verdict = classify(E, q, cfg)
    result = _verdict_payload(verdict, E, q)
    result["rule_order"] = RULE_ORDER
    code = EXIT_UNKNOWN if verdict.kind is VerdictKind.UNKNOWN else EXIT_OK
    return result, [verdict.certificate], None, code


def cmd_closure(problem, args):
    E = problem.event_set()
    extra = [problem.candidate_event()] if problem.candidate else []
    res = saturate(E, extra, _budget(args))
    result = {
        "outcome": res.outcome,
        "rounds": res.rounds,
        "closure": res.closure,
        "closure_size": len(res.closure) if res.closure is not None else None,
        "contradiction_witness": res.contradiction_witness,
        "explanation": res.explanation,
    }
    if res.outcome is Outcome.CLOSED:
        result["structure"] = _structure_payload(res.closure)
    return result, [], res.trace, EXIT_OK


def cmd_extend(problem, args):
    E = problem.event_set()
    ext_set, ext = zero_one_extension(E, args.state)
    result = {"extension": ext_set, "structure": _structure_payload(ext_set)}
    certs = []
    code = EXIT_OK
    if args.event is not None:
        if args.value is None:
            raise PreconditionError("--event needs --value")
        c = parse_rational(args.value, "--value")
        qbar = lift_event(problem.event(args.event), c, args.state)
        result["lifted"] = qbar
        verdict = classify(ext_set, qbar, ClassifyConfig(budget=_budget(args), extension=ext))
        result["classification"] = _verdict_payload(verdict, ext_set, qbar)
        certs.append(verdict.certificate)
        if verdict.kind is VerdictKind.UNKNOWN:
            code = EXIT_UNKNOWN
    return result, certs, None, code


def _mo_pairs(events):
    pairs = []
    seen = set()
    for e in events:
        if e in seen:
            continue
        pairs.append((e, complement(e)))
        seen.update((e, complement(e)))
    return pairs


def cmd_construct(problem, args):
    kind = args.kind
    if kind == "boolean-from-atoms":
        built = boolean_from_atoms(problem.base_events())
    elif kind == "mo":
        built = mo_n(_mo_pairs(problem.base_events()))
    elif kind == "split-atom":
        if args.atom is None:
            raise PreconditionError("split-atom needs --atom NAME")
        built = split_atom(problem.event_set(), problem.event(args.atom), _need_candidate(problem))
    elif kind == "complete-mo2":
        built = mo2_boolean_completion(problem.event_set(), _need_candidate(problem))
    else:  # argparse restricts choices
        raise PreconditionError(f"unknown construction {kind!r}")
    return {"construction": kind, "algebra": built, "structure": _structure_payload(built)}, [], None, EXIT_OK


def cmd_oracle(problem, args):
    events = list(problem.events.values())
    res = boolean_embedding_concrete(events, problem.states)
    result = {
        "outcome": res.outcome,
        "searched": res.searched,
        "witness": res.witness,
        "witness_size": len(res.witness) if res.witness is not None else None,
        "note": res.note,
    }
    return result, [], None, EXIT_OK


def cmd_scan(args):
    if args.exhaustive:
        rep = exhaustive_two_valued_scan(args.size)
    else:
        rep = mo2_interpolation_scan(args.size, args.trials, args.bound, args.seed)
    code = EXIT_COUNTEREXAMPLE if rep.counterexamples else EXIT_OK
    return rep.to_dict(), [], None, code


HANDLERS = {
    "verify": cmd_verify,
    "classify": cmd_classify,
    "closure": cmd_closure,
    "extend": cmd_extend,
    "construct": cmd_construct,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="numevents", description="Exact checks on algebras of numerical events.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_files(p):
        p.add_argument("files", nargs="+", help="problem file(s); '-' reads stdin")
        p.add_argument("--out", help="write the report(s) here instead of stdout")
        return p

    def with_budget(p):
        p.add_argument("--max-elements", type=int, default=None)
        p.add_argument("--max-rounds", type=int, default=None)

    with_files(sub.add_parser("verify", help="axiom and structure report"))
    p = with_files(sub.add_parser("classify", help="verdict for the candidate event"))
    with_budget(p)
    p.add_argument("--no-oracle", action="store_true")
    p = with_files(sub.add_parser("closure", help="saturate the event set (plus candidate)"))
    with_budget(p)
    p = with_files(sub.add_parser("extend", help="0,1-extension by one state"))
    p.add_argument("--state", required=True)
    p.add_argument("--value")
    p.add_argument("--event")
    with_budget(p)
    p = sub.add_parser("construct", help="build an algebra")
    p.add_argument("kind", choices=["boolean-from-atoms", "mo", "split-atom", "complete-mo2"])
    with_files(p)
    p.add_argument("--atom")
    with_files(sub.add_parser("oracle", help="two-valued Boolean embedding search"))
    p = sub.add_parser("scan", help="seeded MO_2 interpolation scan")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--bound", type=int, default=DEFAULT_DENOMINATOR_BOUND)
    p.add_argument("--exhaustive", action="store_true", help="all two-valued configurations instead")
    p.add_argument("--out")
    return parser


def _flags(args) -> dict:
    skip = {"files", "out", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None and v is not False}


def run_one(args, text: str | None) -> tuple[Report, int]:
    start = time.perf_counter()
    digest = None
    try:
        if args.command == "scan":
            result, certs, trace, code = cmd_scan(args)
        else:
            problem = parse_problem(text)
            digest = problem.digest()
            result, certs, trace, code = HANDLERS[args.command](problem, args)
    except ParseError as exc:
        result, certs, trace, code = {"error": "ParseError", "message": str(exc)}, [], None, EXIT_PARSE
    except PreconditionError as exc:
        result, certs, trace, code = {"error": type(exc).__name__, "message": str(exc)}, [], None, EXIT_PRECONDITION
    elapsed = (time.perf_counter() - start) * 1000
    report = Report(args.command, _flags(args), digest, result, certs, trace, elapsed)
    return report, code


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    outputs = []
    worst = EXIT_OK
    sources = [None] if args.command == "scan" else args.files
    for path in sources:
        try:
            text = None if path is None else _read(path)
        except OSError as exc:
            print(f"numevents: cannot read {path}: {exc}", file=sys.stderr)
            return EXIT_PARSE
        report, code = run_one(args, text)
        outputs.append(report.dumps())
        worst = max(worst, code)
    text_out = "".join(outputs)
    if args.out:
        Path(args.out).write_text(text_out, encoding="utf-8")
    else:
        sys.stdout.write(text_out)
    return worst


if __name__ == "__main__":
    sys.exit(main())
