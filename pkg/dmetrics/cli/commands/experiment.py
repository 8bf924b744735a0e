import argparse
import logging

from dmetrics.cli.options import output_dir, parse_metrics
from dmetrics.models.enums import ExperimentName, OutputFormat, Profile
from dmetrics.services.experiments import run_experiment, write_experiment
from dmetrics.services.storage import LocalResultStore

logger = logging.getLogger(__name__)

DEFAULT_FORMATS = [OutputFormat.CSV, OutputFormat.JSON, OutputFormat.SVG]


def add_parser(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("experiment", parents=parents, help="Run a controlled synthetic sweep")
    parser.add_argument("--name", type=ExperimentName, choices=list(ExperimentName), required=True)
    parser.add_argument("--profile", type=Profile, choices=list(Profile), default=Profile.DESK)
    parser.add_argument("--metrics", type=parse_metrics, default=None, help="Comma list restricting the metrics")
    parser.add_argument("--samples", type=int, default=None, help="Override the profile's sample count")
    parser.add_argument("--num-seeds", type=int, default=None, help="Override the profile's seed count")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    result = run_experiment(
        args.name,
        profile=args.profile,
        seed=args.seed,
        jobs=max(1, args.jobs or 1),
        metrics=args.metrics,
        num_samples=args.samples,
        num_seeds=args.num_seeds,
    )
    store = LocalResultStore(output_dir(args, args.name.value))
    write_experiment(result, store, args.formats or DEFAULT_FORMATS)

    if not result.ok:
        # Failed points are gaps in the curves, never filled in
        logger.warning(
            "Experiment finished with metric failures",
            extra={"experiment": args.name.value, "failures": len(result.failures)},
        )
        return 2
    return 0
