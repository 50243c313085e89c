from __future__ import annotations

from argparse import SUPPRESS, ArgumentParser, BooleanOptionalAction
from pathlib import Path
from sys import argv
from typing import TYPE_CHECKING

from schema import SchemaError

from .. import __version__
from ..core.exception import CriticalError, NoncriticalError
from ..tools.logger import get_logger, logger, set_level, verbosity_level
from ..tools.seeding import make_rng
from ..tools.timer import Timer
from .commands import COMMAND_FUNCTIONS
from .config import validate_config
from .report import dump_report, make_report, render_checks, render_result

if TYPE_CHECKING:
    from collections.abc import Sequence

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


def _add(parser: ArgumentParser, *flags: str, **kwargs) -> None:
    """Options absent from the command line stay absent, so config files and schema
    defaults apply below them."""
    parser.add_argument(*flags, default=SUPPRESS, **kwargs)


def _common_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("-v", "--verbose", action="count", default=0, help="verbosity level")
    common.add_argument("--log-file", default=None, help="also log into the file")
    common.add_argument("--config", default=None, help="YAML file with the parameters")
    _add(common, "--seed", help="integer seed of every random stream")
    _add(common, "--output", help="write the JSON report into the file")
    return common


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="leafcomm", description="Formulas over leaf gates: approximation, #SAT, PRGs"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    def add_command(name: str, summary: str) -> ArgumentParser:
        return commands.add_parser(name, help=summary, parents=[common])

    cmd = add_command("parse", "parse a formula file and print its statistics")
    _add(cmd, "formula", nargs="?", help="s-expression file")
    _add(cmd, "--nvars", help="number of variables, the largest index by default")

    cmd = add_command("approx", "approximating polynomial of a formula")
    _add(cmd, "formula", nargs="?", help="s-expression file")
    _add(cmd, "--eps", help="pointwise error as A/B (1/3)")
    _add(cmd, "--sparse", action=BooleanOptionalAction, help="sparse leaf approximations")
    _add(cmd, "--poly-output", help="write the polynomial as JSON")

    for name, summary in (
        ("protocol", "attach and check leaf protocols"),
        ("sat", "count satisfying assignments"),
    ):
        cmd = add_command(name, summary)
        _add(cmd, "formula", nargs="?", help="s-expression file")
        _add(cmd, "--kind", choices=("deterministic", "randomized"), help="leaf protocols")
        _add(cmd, "--parties", help="number of parties of the leaf protocols (2)")
        _add(cmd, "--delta", help="error of randomized leaf protocols as A/B (1/3)")
        if name == "protocol":
            _add(cmd, "--explicit-output", help="write the explicit protocols as JSON")

    cmd = commands.choices["sat"]
    _add(cmd, "--mode", choices=("brute", "protocols", "fast", "randomized"), help="counter")
    _add(cmd, "--nprime", help="number of restricted variables")
    _add(cmd, "--poly-mode", choices=("approx", "exact"), help="skeleton polynomial (approx)")
    _add(cmd, "--backend", help="matrix multiplication backend")
    _add(cmd, "--confidence", help="confidence of the randomized counter as A/B (99/100)")
    _add(cmd, "-c", dest="c", help="constant of the restriction size")
    _add(cmd, "--verify", action="store_true", help="compare with brute force")

    cmd = add_command("prg", "build a generator and measure its fooling gap")
    _add(cmd, "--generator", choices=("small_bias", "inw", "gip_stretch"))
    for flag in ("n", "ell", "k", "dprime", "m", "t"):
        _add(cmd, f"--{flag}")
    _add(cmd, "--delta", help="bias or protocol error as A/B")
    _add(cmd, "--extractor", help="extractor backend of INW")
    _add(cmd, "--passthrough", action="store_true", help="copy seeds of uncertified extractors")
    _add(cmd, "--against", help="formula file to measure the fooling gap on")
    _add(cmd, "--eps", help="target fooling gap as A/B")
    _add(cmd, "--samples", help="number of sampled seeds for large generators")

    cmd = add_command("corr", "correlation of formulas and the best parity")
    _add(cmd, "f", nargs="?", help="s-expression file")
    _add(cmd, "g", nargs="?", help="second s-expression file")
    _add(cmd, "--distribution", help="YAML/JSON map of input index to weight")

    cmd = add_command("lbcalc", "size lower bound and seed length calculators")
    _add(cmd, "--model", help="size or one of the seed-length models")
    for flag in ("n", "k", "s", "m", "t"):
        _add(cmd, f"--{flag}")
    _add(cmd, "--eps", help="error as A/B")
    _add(cmd, "-R", dest="R", help="leaf protocol cost")
    _add(cmd, "-c", dest="c", help="constant replacing the asymptotic one")

    cmd = add_command("learn", "boost parities into a learner of FORMULA o XOR")
    _add(cmd, "target", nargs="?", help="s-expression file, a random target by default")
    for flag in ("n", "s", "max-rounds", "train-size"):
        _add(cmd, f"--{flag}")
    _add(cmd, "--eps", help="accuracy as A/B (1/10)")
    _add(cmd, "--delta", help="confidence as A/B (1/10)")
    _add(cmd, "--distribution", help="YAML/JSON map of input index to weight")
    _add(cmd, "-c", dest="c", help="constant of the weak advantage floor")

    cmd = add_command("suite", "run the regression checks")
    _add(cmd, "--long", action="store_true", help="desk-scale instance counts")
    _add(cmd, "--only", nargs="+", help="names of the checks to run")
    return parser


def _report_error(exc: Exception, code: int) -> int:
    logger.error(f"{type(exc).__name__}: {exc}")
    return code


def run(arguments: Sequence[str] | None = None) -> int:
    """Runs one subcommand: 0 on success, 1 on a failed check or an internal error,
    2 on invalid input."""
    args = vars(build_parser().parse_args(arguments))
    command = args.pop("command")
    as_json = args.pop("json")
    verbose = args.pop("verbose")
    log_file = args.pop("log_file")
    config = args.pop("config")
    if log_file:
        get_logger(filename=log_file)
    set_level(verbosity_level(verbose))

    cfg = {"load": config, **args} if config else args
    try:
        cfg = validate_config(command, cfg)
        with Timer() as timer:
            outcome = COMMAND_FUNCTIONS[command](cfg, make_rng(cfg["seed"], "cli", command))
    except (NoncriticalError, SchemaError) as exc:
        return _report_error(exc, EXIT_INVALID)
    except CriticalError as exc:
        return _report_error(exc, EXIT_FAILED)

    report = make_report(command, cfg, outcome, timer.elapsed_ms)
    text = dump_report(report)
    if cfg["output"]:
        Path(cfg["output"]).write_text(f"{text}\n")
        logger.info(f"Write: {cfg['output']}")
    if as_json:
        print(text)
    else:
        print(render_result(outcome.result))
        if outcome.checks:
            print(render_checks(outcome.checks))
    if not outcome.passed:
        logger.error(f"{sum(not row['passed'] for row in outcome.checks)} checks failed")
        return EXIT_FAILED
    return EXIT_OK


def main() -> int:
    return run(argv[1:])
