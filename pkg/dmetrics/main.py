import logging
import sys

from pydantic import ValidationError

from dmetrics.cli.options import CliParser, common_options
from dmetrics.cli.routes import register_commands
from dmetrics.core.config import settings
from dmetrics.core.errors import InputError
from dmetrics.core.logging import setup_logging

logger = logging.getLogger(__name__)

EXIT_INPUT_ERROR = 1


def build_parser() -> CliParser:
    parser = CliParser(prog="dmetrics", description="Supervised disentanglement metrics and controlled experiments")
    subparsers = parser.add_subparsers(dest="command", required=True)
    register_commands(subparsers, [common_options()])
    return parser


def main(argv: list[str] | None = None) -> int:
    setup_logging()
    try:
        args = build_parser().parse_args(argv)
    except InputError as e:
        logger.error("Invalid arguments", extra={"error": str(e)})
        return EXIT_INPUT_ERROR

    setup_logging(args.log_level, args.log_format)
    logger.debug("Starting command", extra={"command": args.command, "project": settings.PROJECT_NAME})
    try:
        return args.handler(args)
    except (InputError, ValidationError) as e:
        logger.error("Input error", extra={"error": str(e), "error_type": type(e).__name__})
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
