"""
Command-line front end.

Exit codes: 0 for an affirmative verdict or a completed command, 1 for a
negative verdict, 2 for usage, format and precondition errors.
"""
import argparse
import json
import sys
from typing import List, Optional, Sequence

from pydantic import BaseModel

from . import crud, storage
from .axioms import SCHEMAS, SOURCES
from .exceptions import KhowError
from .logging_config import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


def _agents(text: Optional[str]) -> Optional[List[str]]:
    if text is None:
        return None
    return [a.strip() for a in text.split(',') if a.strip()]


def _emit(args, body: BaseModel, lines: Sequence[str]) -> None:
    if args.json:
        print(body.json(exclude_none=True))
    else:
        for line in lines:
            print(line)


def _write_or_print(args, doc, summary: str) -> int:
    if args.out:
        storage.write_document(doc, args.out)
        if args.json:
            print(json.dumps({'written': args.out}))
        else:
            print(f'{summary} -> {args.out}')
    else:
        print(doc.json(exclude_none=True, indent=None if args.json else 2))
    return EXIT_OK


def _braces(planset: List[List[str]]) -> str:
    return '{' + ', '.join('[' + ','.join(plan) + ']' for plan in planset) + '}'


# ============ COMMANDS ============

def cmd_check(args) -> int:
    m = storage.load_model(args.model)
    out = crud.check_formula(m, args.state, args.formula)
    lines = ['TRUE' if out.verdict else 'FALSE']
    lines += [f'witness: {_braces(ps)}' for ps in out.witnesses]
    lines.append('extension: ' + ', '.join(out.extension))
    _emit(args, out, lines)
    return EXIT_OK if out.verdict else EXIT_NEGATIVE


def cmd_sat(args) -> int:
    out = crud.sat_formula(args.formula, _agents(args.agents))
    if not out.satisfiable:
        _emit(args, out, [f'UNSAT (bound {out.bound})'])
        return EXIT_NEGATIVE
    if args.out:
        storage.write_document(out.model, args.out)
    _emit(args, out, [f'SAT (bound {out.bound})', f'point: {out.point}', out.model.json(exclude_none=True, indent=2)])
    return EXIT_OK


def cmd_valid(args) -> int:
    out = crud.valid_formula(args.formula, _agents(args.agents))
    _emit(args, out, [f"{'VALID' if out.valid else 'INVALID'} (bound {out.bound})"])
    return EXIT_OK if out.valid else EXIT_NEGATIVE


def _pair(args):
    return storage.load_model(args.model), args.state, storage.load_model(args.other), args.other_state


def cmd_bisim(args) -> int:
    out = crud.bisim_models(*_pair(args))
    if out.bisimilar:
        lines = ['BISIMILAR'] + [f'{u} ~ {v}' for u, v in out.relation]
    else:
        lines = ['NOT BISIMILAR', f'{out.violation.clause}: {out.violation.detail}']
    _emit(args, out, lines)
    return EXIT_OK if out.bisimilar else EXIT_NEGATIVE


def cmd_equiv(args) -> int:
    out = crud.equiv_models(*_pair(args))
    lines = ['EQUIVALENT'] if out.equivalent else ['NOT EQUIVALENT', f'{out.fact.clause}: {out.fact.detail}']
    _emit(args, out, lines)
    return EXIT_OK if out.equivalent else EXIT_NEGATIVE


def cmd_filter(args) -> int:
    doc = crud.filter_model(storage.load_model(args.model), args.formula)
    return _write_or_print(args, doc, f'FILTRATED {len(doc.states)} classes')


def cmd_translate(args) -> int:
    doc = crud.translate_model(storage.load_model(args.model), args.to)
    return _write_or_print(args, doc, f'TRANSLATED to {args.to}')


def cmd_classify(args) -> int:
    out = crud.classify_model(storage.load_model(args.model))

    def flag(value: bool) -> str:
        return 'yes' if value else 'no'

    lines = [
        f'nu-style: {flag(out.is_nu_style)}',
        f'active: {flag(out.is_active)}',
        f'se-compositional: {flag(out.is_se_compositional)}',
    ]
    if out.active_witness:
        lines.append(f'active witness: {_braces(out.active_witness)}')
    if out.counterexample:
        first, second = out.counterexample
        lines.append(f'uncovered composition: {_braces(first)} then {_braces(second)}')
    _emit(args, out, lines)
    return EXIT_OK


def cmd_axioms(args) -> int:
    report = crud.run_axioms(
        _agents(args.schemas), trials=args.trials, max_states=args.max_states,
        source=args.source, seed=args.seed,
    )
    lines = [f'{r.schema_name}: {r.counterexamples}/{r.trials}' for r in report.results]
    for c in report.counterexamples:
        lines.append(f'counterexample {c.schema_name} at {c.state}: {c.formula}')
    lines.append('CLEAN' if report.clean else 'COUNTEREXAMPLES FOUND')
    _emit(args, report, lines)
    return EXIT_OK if report.clean else EXIT_NEGATIVE


# ============ PARSER ============

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='print structured output')

    parser = argparse.ArgumentParser(prog='khow', description='Knowing-how logic toolkit')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('check', parents=[common], help='model-check a formula at a state')
    p.add_argument('-m', '--model', required=True)
    p.add_argument('-w', '--state', required=True)
    p.add_argument('-f', '--formula', required=True)
    p.set_defaults(handler=cmd_check)

    for name, handler, text in (('sat', cmd_sat, 'decide satisfiability'), ('valid', cmd_valid, 'decide validity')):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument('-f', '--formula', required=True)
        p.add_argument('--agents', help='comma-separated agent ids')
        if name == 'sat':
            p.add_argument('--out', help='write the witness model here')
        p.set_defaults(handler=handler)

    for name, handler, text in (('bisim', cmd_bisim, 'decide bisimilarity'), ('equiv', cmd_equiv, 'decide logical equivalence')):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument('-m', '--model', required=True)
        p.add_argument('-w', '--state', required=True)
        p.add_argument('-n', '--other', required=True)
        p.add_argument('-x', '--other-state', required=True)
        p.set_defaults(handler=handler)

    p = sub.add_parser('filter', parents=[common], help='filtrate through the closure of formulas')
    p.add_argument('-m', '--model', required=True)
    p.add_argument('-f', '--formula', required=True, action='append')
    p.add_argument('--out')
    p.set_defaults(handler=cmd_filter)

    p = sub.add_parser('translate', parents=[common], help='translate between LTS and ULTS semantics')
    p.add_argument('-m', '--model', required=True)
    p.add_argument('--to', required=True, choices=['lts', 'ults-nu', 'ults-ac'])
    p.add_argument('--out')
    p.set_defaults(handler=cmd_translate)

    p = sub.add_parser('classify', parents=[common], help='report model class membership')
    p.add_argument('-m', '--model', required=True)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser('axioms', parents=[common], help='run the axiom soundness harness')
    p.add_argument('--schemas', help=f"comma-separated subset of {','.join(SCHEMAS)}")
    p.add_argument('--trials', type=int)
    p.add_argument('--max-states', type=int)
    p.add_argument('--source', choices=SOURCES, default='general')
    p.add_argument('--seed', type=int, help='defaults to KHOW_SEED')
    p.set_defaults(handler=cmd_axioms)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    logger.debug(f"Running {args.command}", extra={"command": args.command})
    try:
        return args.handler(args)
    except KhowError as exc:
        print(f'error: {exc.message}', file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return EXIT_ERROR
