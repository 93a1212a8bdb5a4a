"""Command line entry point: ``python -m app.harness <verb> ...``.

Exit codes: 0 success, 1 configuration error, 2 runtime fault.
"""

import argparse
import csv
import logging
import sys
from pathlib import Path

from dotenv import load_dotenv

from app.env import configure_logging, load_settings
from app.errors import ConfigurationError, RacingError
from app.fusion import ControlMode
from app.harness.config import RunConfig, load_run_config
from app.harness.runner import cmd_compare, cmd_eval, cmd_train, extract

logger = logging.getLogger(__name__)


def _out_dir(args: argparse.Namespace, cfg: RunConfig) -> Path:
    if args.out is not None:
        return args.out
    return cfg.run.out_dir or load_settings().out_dir


def _config(args: argparse.Namespace) -> RunConfig:
    return load_run_config(args.config).with_seed(args.seed)


def _train(args: argparse.Namespace) -> None:
    cfg = _config(args)
    cmd_train(cfg, _out_dir(args, cfg))


def _eval(args: argparse.Namespace) -> None:
    cfg = _config(args)
    cmd_eval(cfg, args.checkpoint, args.mode, _out_dir(args, cfg))


def _compare(args: argparse.Namespace) -> None:
    cfg = _config(args)
    cmd_compare(cfg, args.checkpoint, _out_dir(args, cfg))


def _extract(args: argparse.Namespace) -> None:
    columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    csv.writer(sys.stdout).writerows(extract(args.path, columns))


class _Parser(argparse.ArgumentParser):
    """Usage mistakes are configuration errors and exit 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise ConfigurationError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="racing", description="Hybrid racing controller experiments")
    verbs = parser.add_subparsers(dest="verb", required=True)

    def run_verb(name: str, summary: str, handler) -> argparse.ArgumentParser:
        p = verbs.add_parser(name, help=summary)
        p.add_argument("--config", type=Path, required=True, help="Run configuration (JSON)")
        p.add_argument("--seed", type=int, default=None, help="Override the configured master seed")
        p.add_argument("--out", type=Path, default=None, help="Output directory")
        p.set_defaults(handler=handler)
        return p

    run_verb("train", "Train the policy on the opponent-free training scenario", _train)

    p = run_verb("eval", "Evaluate one control mode on the evaluation scenarios", _eval)
    p.add_argument("--checkpoint", type=Path, default=None, help="Agent checkpoint; a fresh actor when omitted")
    p.add_argument("--mode", choices=[m.value for m in ControlMode], default=ControlMode.FUSED.value)

    p = run_verb("compare", "Run every control mode on every evaluation scenario", _compare)
    p.add_argument("--checkpoint", type=Path, default=None, help="Agent checkpoint; a fresh actor when omitted")

    p = verbs.add_parser("extract", help="Print selected columns of a trace or metrics CSV")
    p.add_argument("path", type=Path)
    p.add_argument("--columns", required=True, help="Comma-separated column names")
    p.set_defaults(handler=_extract)
    return parser


def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        args.handler(args)
    except RacingError as e:
        logger.error("%s", e)
        return e.exit_code
    except Exception:
        logger.exception("Unexpected failure")
        return 2
    return 0
