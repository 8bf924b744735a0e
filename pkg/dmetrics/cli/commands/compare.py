import argparse
import logging
from importlib import resources
from pathlib import Path

import numpy as np
import pandas as pd

from dmetrics.cli.options import output_dir
from dmetrics.core.errors import ConfigError
from dmetrics.models.enums import OutputFormat
from dmetrics.services.analysis import correlation_matrix
from dmetrics.services.storage import LocalResultStore, read_score_table
from dmetrics.services.svg import heatmap

logger = logging.getLogger(__name__)

DEFAULT_FORMATS = [OutputFormat.CSV, OutputFormat.JSON, OutputFormat.SVG]


def sample_table_path() -> Path:
    return Path(str(resources.files("dmetrics.data").joinpath("sample_scores.csv")))


def add_parser(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("compare", parents=parents, help="Kendall rank correlation between metrics")
    parser.add_argument(
        "--table",
        type=Path,
        action="append",
        default=None,
        help="Configurations x metrics CSV; repeat to stack tables (default: shipped sample table)",
    )
    parser.add_argument("--columns", default=None, help="Comma list of metric columns to compare")
    parser.set_defaults(handler=handle)


def load_tables(paths: list[Path]) -> pd.DataFrame:
    tables = [read_score_table(p) for p in paths]
    columns = list(tables[0].columns)
    for path, table in zip(paths[1:], tables[1:], strict=True):
        if list(table.columns) != columns:
            raise ConfigError(f"{path} has different metric columns than {paths[0]}")
    return pd.concat(tables, ignore_index=True)


def handle(args: argparse.Namespace) -> int:
    paths = args.table or [sample_table_path()]
    table = load_tables(paths)
    if args.columns:
        wanted = [c.strip() for c in args.columns.split(",") if c.strip()]
        missing = [c for c in wanted if c not in table.columns]
        if missing:
            raise ConfigError(f"Unknown score columns: {missing}")
        table = table[wanted]

    matrix = correlation_matrix(table)
    logger.info("Compared metrics", extra={"metrics": len(matrix.metrics), "configurations": matrix.n_configurations})

    formats = args.formats or DEFAULT_FORMATS
    store = LocalResultStore(output_dir(args, "compare"))
    rounded = np.rint(np.asarray(matrix.values)).astype(int)
    if OutputFormat.CSV in formats:
        store.write_csv("kendall.csv", pd.DataFrame(rounded, index=matrix.metrics, columns=matrix.metrics), index=True)
    if OutputFormat.JSON in formats:
        store.write_json("kendall.json", matrix)
    if OutputFormat.SVG in formats:
        store.write_text("kendall.svg", heatmap("Kendall rank correlation (x100)", matrix.metrics, rounded.tolist()))
    return 0
