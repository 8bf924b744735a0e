import argparse
from pathlib import Path

from dmetrics.core.config import settings
from dmetrics.core.errors import ConfigError
from dmetrics.models.enums import MetricName, OutputFormat


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors are input errors (exit code 1) instead of SystemExit(2)."""

    def error(self, message: str):  # type: ignore[override]
        raise ConfigError(f"{self.prog}: {message}")


def parse_formats(value: str) -> list[OutputFormat]:
    try:
        formats = [OutputFormat(v.strip().lower()) for v in value.split(",") if v.strip()]
    except ValueError as e:
        known = ", ".join(f.value for f in OutputFormat)
        raise argparse.ArgumentTypeError(f"unknown format in '{value}' (known: {known})") from e
    if not formats:
        raise argparse.ArgumentTypeError("at least one output format is required")
    return formats


def parse_metrics(value: str) -> list[MetricName]:
    names = [v.strip() for v in value.split(",") if v.strip()]
    try:
        return [MetricName(n) for n in names]
    except ValueError as e:
        known = ", ".join(m.value for m in MetricName)
        raise argparse.ArgumentTypeError(f"unknown metric in '{value}' (known: {known})") from e


def common_options() -> argparse.ArgumentParser:
    """Options shared by every sub-command."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, default=None, help="Base seed (default: config or DMETRICS_DEFAULT_SEED)")
    parent.add_argument("--jobs", type=int, default=None, help="Seeds evaluated concurrently")
    parent.add_argument("--format", dest="formats", type=parse_formats, default=None, help="Comma list of csv,json,svg")
    parent.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=None,
        help=f"Log level (default: {settings.LOG_LEVEL})",
    )
    parent.add_argument("--log-format", choices=["json", "plain"], default=None)
    parent.add_argument("--out", type=Path, default=None, help="Output directory (default: DMETRICS_OUTPUT_DIR)")
    return parent


def output_dir(args: argparse.Namespace, *parts: str) -> Path:
    if args.out is not None:
        return args.out
    return settings.RESOLVED_OUTPUT_DIR.joinpath(*parts)
