import argparse
import logging
import sys
from typing import List, Optional

from autoindex import __version__
from autoindex.config import Settings, configure_logging, get_settings
from autoindex.errors import AutoIndexError, UsageError, VerificationFailure
from autoindex.models.report import RunMode
from autoindex.services.engine_service import EngineService, require_identical
from autoindex.services.verification_service import SUITES, VerificationService
from autoindex.utils.render import render_bench_report, render_run_report, render_verify_report

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser(settings: Settings) -> ArgumentParser:
    parser = ArgumentParser(prog="autoindex", description="Datalog evaluation with minimal index selection")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default=settings.log_level, help="logging level (default: %(default)s)")
    common.add_argument("--format", choices=("text", "json"), default="text", help="report format")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    select = commands.add_parser("select", parents=[common], help="report searches, chains and chosen indexes")
    select.add_argument("program")

    for name, help_text in (("run", "evaluate a program and write its outputs"), ("bench", "run in every mode and compare")):
        command = commands.add_parser(name, parents=[common], help=help_text)
        command.add_argument("program")
        command.add_argument("--facts-dir", default=settings.facts_dir)
        command.add_argument("--threads", type=int, default=settings.threads)
        if name == "run":
            command.add_argument("--mode", choices=[m.value for m in RunMode], default=settings.default_mode)
            command.add_argument("--output-dir", default=settings.output_dir)

    verify = commands.add_parser("verify", parents=[common], help="run the randomized oracle suites")
    verify.add_argument("--seed", type=int, default=settings.seed)
    verify.add_argument("--trials", type=int, default=settings.verify_trials)
    verify.add_argument("--suite", action="append", choices=SUITES, help="limit to the given suites")
    return parser


def run_command(args, settings: Settings) -> int:
    engine = EngineService(settings)
    as_json = args.format == "json"

    if args.command == "select":
        report = engine.select(engine.load_program(args.program))
        print(report.model_dump_json(indent=2) if as_json else render_run_report(report))
    elif args.command == "run":
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        report = engine.run(args.program, RunMode(args.mode), args.facts_dir, args.output_dir, args.threads)
        print(report.model_dump_json(indent=2) if as_json else render_run_report(report))
    elif args.command == "bench":
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        report = engine.bench(args.program, args.facts_dir, args.threads)
        print(report.model_dump_json(indent=2) if as_json else render_bench_report(report))
        require_identical(report)
    elif args.command == "verify":
        if args.trials < 1:
            raise UsageError("--trials must be at least 1")
        report = VerificationService(settings).verify(args.seed, args.trials, args.suite or SUITES)
        print(report.model_dump_json(indent=2) if as_json else render_verify_report(report))
        if not report.passed:
            failed = [suite.name for suite in report.suites if not suite.passed]
            raise VerificationFailure(f"failing suites: {', '.join(failed)}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    settings = get_settings()
    try:
        args = build_parser(settings).parse_args(argv)
        configure_logging(args.log_level)
        return run_command(args, settings)
    except AutoIndexError as e:
        logger.error(e.detail)
        print(f"❌ {e.detail}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(f"unexpected failure: {e}", exc_info=True)
        print(f"❌ {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
