import argparse

from dmetrics.cli.commands import compare, experiment, score

COMMANDS = [score, experiment, compare]


def register_commands(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    for command in COMMANDS:
        command.add_parser(subparsers, parents)
