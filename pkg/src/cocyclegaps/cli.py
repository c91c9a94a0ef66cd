"""
Module that contains the command line app.

Why does this file exist, and why not put this in __main__?

  You might be tempted to import things from __main__ later, but that will cause
  problems: the code will get executed twice:

  - When you run `python -mcocyclegaps` python will execute
    ``__main__.py`` as a script. That means there won't be any
    ``cocyclegaps.__main__`` in ``sys.modules``.
  - When you import __main__ it will get executed again (as a module) because
    there's no ``cocyclegaps.__main__`` in ``sys.modules``.

  Also see (1) from http://click.pocoo.org/5/setuptools/#setuptools-integration

Exit codes: 0 on success, 2 when a search found nothing or a certificate is Undetermined, 1 on hard errors.
"""
# Default Libraries #
import argparse
import sys

# Downloaded Libraries #

# Local Libraries #
from . import cmvperturbation, config, hyperbolicity, jacobiprojection, spectra
from .config import ExperimentConfig
from .errors import CocycleGapsError, NotFound
from .hyperbolicity import UNDETERMINED
from .processors import ChunkPool
from .spectra import CMV, JACOBI, SpectralScanner
from .task import LIFECYCLE, Task
from .tasks import TASKS, ExperimentTask


# Definitions #
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_FOUND = 2

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


# Functions #
def package_loggers():
    """Returns every logger of the package."""
    return [cmvperturbation._logger, config._logger, hyperbolicity._logger, jacobiprojection._logger,
            spectra._logger, ChunkPool.class_loggers["chunk_pool"], SpectralScanner.class_loggers["spectral_scan"],
            Task.class_loggers[LIFECYCLE], ExperimentTask.class_loggers["experiment"]]


def setup_logging(level="WARNING", log_file=None):
    """Sets the level of every package logger and optionally sends them to a file."""
    for logger in package_loggers():
        logger.setLevel(level)
        if log_file is not None:
            logger.add_default_file_handler(log_file)


def build_parser():
    """Creates the argument parser with one sub command per task."""
    parser = argparse.ArgumentParser(prog="cocyclegaps",
                                     description="Spectral scans, truncation checks and gap opening perturbations "
                                                 "of CMV and Jacobi operators over torus dynamics.")
    parser.add_argument("--log-level", default="WARNING", choices=LOG_LEVELS, help="The level of every logger.")
    parser.add_argument("--log-file", default=None, help="Also write the logs to this file.")
    commands = parser.add_subparsers(dest="command", required=True)

    for name, task in TASKS.items():
        command = commands.add_parser(name, help=(task.__doc__ or "").strip().splitlines()[0])
        command.add_argument("--config", required=True, help="The experiment configuration file.")
        command.add_argument("--out", default=".", help="The output directory.")
        command.add_argument("--seed", type=int, default=None, help="Overrides the seed of the run section.")
        command.add_argument("--threads", type=int, default=None, help="Overrides the workers of the run section.")
        if name in ("certify", "perturb"):
            command.add_argument("--param", type=float, default=None,
                                 help="The energy E or the phase psi; overrides the pipeline section.")
        if name == "perturb":
            command.add_argument("--target", choices=(CMV, JACOBI), default=None,
                                 help="The pipeline to run, the model kind by default.")
    return parser


def build_task(args, experiment):
    """Creates the task of a parsed command line."""
    task = TASKS[args.command]
    if args.command == "certify":
        return task(experiment, param=args.param, out_dir=args.out)
    elif args.command == "perturb":
        return task(experiment, target=args.target, param=args.param, out_dir=args.out)
    return task(experiment, out_dir=args.out)


def main(argv=None):
    """Runs one command.

    Args:
        argv (list, optional): The arguments without the program name, sys.argv[1:] by default.

    Returns:
        int: The exit code.
    """
    args = build_parser().parse_args(sys.argv[1:] if argv is None else argv)
    setup_logging(args.log_level, args.log_file)
    try:
        experiment = ExperimentConfig.read(args.config).override(seed=args.seed, threads=args.threads)
        task = build_task(args, experiment)
        task.run()
    except NotFound as error:
        print(f"{args.command}: nothing found at stage {error.stage or 'unknown'}: {error}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except (CocycleGapsError, OSError) as error:
        print(f"{args.command}: {type(error).__name__}: {error}", file=sys.stderr)
        return EXIT_ERROR

    if task.outcome == UNDETERMINED:
        return EXIT_NOT_FOUND
    return EXIT_OK
