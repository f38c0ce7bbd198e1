import argparse
import logging
import sys
from json import dumps

import normcheck
from normcheck.config import Limits
from normcheck.exceptions import NormcheckException, ResourceLimitExceeded
from normcheck.models import ExploreResult, SdlVerdict
from normcheck.norms.core import ground_model
from normcheck.norms.engine import detect_conflicts, explore, run
from normcheck.norms.parser import parse_model, parse_trace, serialize_model
from normcheck.sdl.chisholm import chisholm_report, paradox_reproduced, report_table
from normcheck.sdl.formula import parse_formula_file
from normcheck.sdl.tableau import consistent
from normcheck.utils.files import read_text, write_text

logger = logging.getLogger("normcheck")

HORIZON_DISCLAIMER = "(conflicts are stuck duties within horizon {horizon}; states beyond it are not examined)"


class ExitStatus():
    OK = 0
    INPUT_ERROR = 1
    EXPECTATION_FAILED = 2
    RESOURCE_LIMIT = 3


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with INPUT_ERROR, status 2 means a failed expectation"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ExitStatus.INPUT_ERROR, "{prog}: error: {message}\n".format(prog=self.prog, message=message))


def _horizon(value: str) -> int:
    try:
        horizon = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("the horizon must be an integer, got {value!r}".format(value=value))
    if horizon < 0:
        raise argparse.ArgumentTypeError("the horizon must not be negative, got {horizon}".format(horizon=horizon))
    return horizon


def _report(diagnostics, file_path: str) -> None:
    for diagnostic in diagnostics:
        print("{path}:{diagnostic}".format(path=file_path, diagnostic=diagnostic), file=sys.stderr)


def _load_model(file_path: str):
    """The parsed model, or None once the problems have been reported"""
    try:
        text = read_text(file_path)
    except FileNotFoundError as err:
        print("error: {error}".format(error=err), file=sys.stderr)
        return None
    result = parse_model(text)
    _report(result.diagnostics, file_path)
    return result.model


def _print_state(state) -> None:
    print("final facts: " + (", ".join(state.sorted_facts()) or "-"))
    print("final duties:" + ("" if state.duties else " -"))
    for duty in state.sorted_duties():
        print("    {duty}: {status}".format(duty=duty, status=duty.status))


def cmd_validate(args) -> int:
    model = _load_model(args.model)
    if model is None:
        return ExitStatus.INPUT_ERROR
    print("valid: {count} declaration(s)".format(count=len(model.declarations)))
    return ExitStatus.OK


def cmd_format(args) -> int:
    model = _load_model(args.model)
    if model is None:
        return ExitStatus.INPUT_ERROR
    text = serialize_model(model)
    if args.output:
        write_text(args.output, text)
    else:
        sys.stdout.write(text)
    return ExitStatus.OK


def cmd_run(args) -> int:
    model = _load_model(args.model)
    if model is None:
        return ExitStatus.INPUT_ERROR
    try:
        text = read_text(args.trace)
    except FileNotFoundError as err:
        print("error: {error}".format(error=err), file=sys.stderr)
        return ExitStatus.INPUT_ERROR
    parsed = parse_trace(text, model)
    _report(parsed.diagnostics, args.trace)
    if parsed.trace is None:
        return ExitStatus.INPUT_ERROR

    ground = ground_model(model)
    result = run(ground, ground.initial_state(), parsed.trace)
    if args.json:
        print(result.as_json(indent=4, ensure_ascii=False))
    else:
        for index, (act, events) in enumerate(result.steps()):
            print("[{index}] {act}".format(index=index, act=act))
            for event in events:
                print("    {event}".format(event=event))
        print("outcome: {outcome}".format(outcome=result.outcome))
        _print_state(result.final)
    return ExitStatus.OK if result.completed else ExitStatus.EXPECTATION_FAILED


def cmd_explore(args) -> int:
    model = _load_model(args.model)
    if model is None:
        return ExitStatus.INPUT_ERROR
    ground = ground_model(model)
    try:
        graph = explore(ground, ground.initial_state(), args.horizon, fast=args.fast)
    except ResourceLimitExceeded as err:
        print("error: {error}".format(error=err), file=sys.stderr)
        return ExitStatus.RESOURCE_LIMIT
    result = ExploreResult(graph, detect_conflicts(graph))

    if args.dot:
        write_text(args.dot, graph.to_dot())
    if args.json:
        print(result.as_json(indent=4, ensure_ascii=False))
    else:
        print("nodes: {count}".format(count=len(graph.nodes)))
        print("edges: {count}".format(count=len(graph.edges)))
        print("conflicts: {count}".format(count=len(result.conflicts)))
        for conflict in result.conflicts:
            print("    {conflict}".format(conflict=conflict))
        print(HORIZON_DISCLAIMER.format(horizon=graph.horizon))
    if args.expect == "none" and result.conflicts:
        return ExitStatus.EXPECTATION_FAILED
    return ExitStatus.OK


def _print_verdict(verdict: SdlVerdict) -> None:
    result = verdict.result
    print(result.verdict)
    if result.model is not None:
        model = result.model
        print("worlds: " + ", ".join("w{world}".format(world=world) for world in model.worlds))
        print("edges: " + (", ".join("w{0} -> w{1}".format(*edge) for edge in model.edges) or "-"))
        print("valuation:")
        for world in model.worlds:
            print("    w{world}: {atoms}".format(world=world, atoms=", ".join(sorted(model.valuation[world])) or "-"))
    else:
        clashes = sum(1 for step in result.certificate if step.rule == "clash")
        print("certificate: {steps} step(s), {clashes} clash(es)".format(steps=len(result.certificate), clashes=clashes))


def cmd_sdl_check(args) -> int:
    try:
        text = read_text(args.file)
    except FileNotFoundError as err:
        print("error: {error}".format(error=err), file=sys.stderr)
        return ExitStatus.INPUT_ERROR
    parsed = parse_formula_file(text)
    _report(parsed.diagnostics, args.file)
    if not parsed.ok:
        return ExitStatus.INPUT_ERROR
    try:
        result = consistent(parsed.formulas, serial=args.logic == "KD")
    except ResourceLimitExceeded as err:
        print("error: {error}".format(error=err), file=sys.stderr)
        return ExitStatus.RESOURCE_LIMIT
    verdict = SdlVerdict(parsed.formulas, result, args.logic)
    if args.json:
        print(verdict.as_json(indent=4, ensure_ascii=False))
    else:
        _print_verdict(verdict)
    if args.expect is not None and (args.expect == "sat") != result.satisfiable:
        return ExitStatus.EXPECTATION_FAILED
    return ExitStatus.OK


def cmd_sdl_chisholm(args) -> int:
    try:
        rows = chisholm_report(serial=args.logic == "KD")
    except ResourceLimitExceeded as err:
        print("error: {error}".format(error=err), file=sys.stderr)
        return ExitStatus.RESOURCE_LIMIT
    if args.json:
        print(dumps([row.as_dict() for row in rows], indent=4, ensure_ascii=False))
    else:
        print(report_table(rows))
    return ExitStatus.OK if paradox_reproduced(rows) else ExitStatus.EXPECTATION_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='normcheck', description='Parse, run and explore frame-based norms, and check their deontic logic reading for contradictions')

    parser.add_argument('--version', '-v', action='version', version=normcheck.__version__)
    parser.add_argument('--verbose', '-V', action='store_true', help='log debug information to standard error')

    subparser = parser.add_subparsers(help='Actions', dest="action")

    parser_validate = subparser.add_parser('validate', help='Parses and checks a model')
    parser_validate.add_argument('model', type=str, help='model file, or the name of a bundled model')
    parser_validate.set_defaults(func=cmd_validate)

    parser_format = subparser.add_parser('format', help='Prints the canonical text of a model')
    parser_format.add_argument('model', type=str, help='model file')
    parser_format.add_argument('--output', '-o', action='store', type=str, default=None, help='write to this file instead of standard output')
    parser_format.set_defaults(func=cmd_format)

    parser_run = subparser.add_parser('run', help='Runs a trace of acts against a model')
    parser_run.add_argument('model', type=str, help='model file')
    parser_run.add_argument('trace', type=str, help='trace file, one act per line')
    parser_run.add_argument('--json', action='store_true', help='print the result as JSON')
    parser_run.set_defaults(func=cmd_run)

    parser_explore = subparser.add_parser('explore', help='Explores the reachable states and reports stuck duties')
    parser_explore.add_argument('model', type=str, help='model file')
    parser_explore.add_argument('--horizon', action='store', type=_horizon, default=Limits.DEFAULT_HORIZON, help='maximum number of acts from the initial state')
    parser_explore.add_argument('--dot', action='store', type=str, default=None, help='write the state graph to this file as Graphviz DOT')
    parser_explore.add_argument('--json', action='store_true', help='print the result as JSON')
    parser_explore.add_argument('--expect', action='store', choices=['none'], default=None, help='fail with status 2 unless there are no conflicts')
    parser_explore.add_argument('--fast', action='store_true', help='expand each layer on a thread pool')
    parser_explore.set_defaults(func=cmd_explore)

    parser_sdl = subparser.add_parser('sdl', help='Standard deontic logic')
    sdl_subparser = parser_sdl.add_subparsers(help='SDL actions', dest="sdl_action")

    parser_check = sdl_subparser.add_parser('check', help='Checks whether a set of formulas is consistent')
    parser_check.add_argument('file', type=str, help='formula file, one formula per line')
    parser_check.add_argument('--expect', action='store', choices=['sat', 'unsat'], default=None, help='fail with status 2 on the other verdict')
    parser_check.add_argument('--json', action='store_true', help='print the result as JSON')
    parser_check.add_argument('--logic', action='store', choices=['KD', 'K'], default='KD', help='KD (serial, default) or K')
    parser_check.set_defaults(func=cmd_sdl_check)

    parser_chisholm = sdl_subparser.add_parser('chisholm', help='Checks the four scope readings of the library rules')
    parser_chisholm.add_argument('--json', action='store_true', help='print the result as JSON')
    parser_chisholm.add_argument('--logic', action='store', choices=['KD', 'K'], default='KD', help='KD (serial, default) or K')
    parser_chisholm.set_defaults(func=cmd_sdl_chisholm)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else ExitStatus.INPUT_ERROR

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    logger.setLevel(logging.DEBUG if args.verbose else logging.WARNING)

    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        print("normcheck: error: the following arguments are required: action", file=sys.stderr)
        return ExitStatus.INPUT_ERROR

    try:
        return args.func(args)
    except NormcheckException as err:
        print("error: {error}".format(error=err), file=sys.stderr)
        return ExitStatus.INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
