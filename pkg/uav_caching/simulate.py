"""
This module is used to simulate content dissemination in a two-tier UAV
network. It provides functionality to run experiment scenarios over seeds
and to print the analytical availability bound via command line interface.
"""

import argparse
import sys
import line_profiler

from uav_caching.errors import UavCachingError
from uav_caching.simulation.config import PRESETS, load_config, parse_overrides
from uav_caching.simulation.experiments import (
    SCENARIOS,
    ExperimentSpec,
    bound_table,
    run_experiment,
)
from uav_caching.simulation.kernel import Simulation


def parse_arguments(argv=None):
    parser = argparse.ArgumentParser(
        description='Simulate federated content caching in a two-tier '
                    'UAV network.')
    subparsers = parser.add_subparsers(dest='command', required=True)

    run = subparsers.add_parser('run', help='Run an experiment scenario')
    run.add_argument('--config', type=str,
                     help='Path to a key = value configuration file')
    run.add_argument('--set', action='append', default=[],
                     metavar='KEY=VALUE',
                     help='Override a configuration key (repeatable)')
    run.add_argument('--seed', type=int, action='append',
                     help='Seed of a replication (repeatable, default: 1)')
    run.add_argument('--out', type=str, default='results',
                     help='Output directory for CSV files')
    run.add_argument('--scenario', choices=SCENARIOS, default='custom',
                     help='Experiment scenario (default: custom)')
    run.add_argument('--preset', choices=sorted(PRESETS),
                     help='Parameter preset applied before the file')
    run.add_argument('--workers', type=int, default=4,
                     help='Replications run concurrently')
    run.add_argument('--profile', action='store_true',
                     help='Profile code execution with line_profiler')

    bound = subparsers.add_parser(
        'bound', help='Print the availability upper bound per community')
    bound.add_argument('--config', type=str,
                       help='Path to a key = value configuration file')
    bound.add_argument('--set', action='append', default=[],
                       metavar='KEY=VALUE',
                       help='Override a configuration key (repeatable)')
    bound.add_argument('--preset', choices=sorted(PRESETS),
                       help='Parameter preset applied before the file')

    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_arguments(argv)

    try:
        if args.command == 'bound':
            config = load_config(args.config, args.set, args.preset)
            print(bound_table(config).to_csv(index=False), end='')
            return 0

        spec = ExperimentSpec(
            scenario=args.scenario,
            overrides=parse_overrides(args.set),
            seeds=args.seed or [1],
            output_dir=args.out,
            preset=args.preset,
            config_path=args.config,
        )

        if args.profile:
            profiler = line_profiler.LineProfiler()
            profiler.add_function(Simulation.handle_request)
            profiler.add_function(Simulation.handle_ferry_arrival)
            profiler.add_function(Simulation.handle_ferry_departure)
            profiler.add_function(Simulation.handle_epoch)
            profiler.runctx("run_experiment(spec, max_workers=1)",
                            globals(), locals())
            profiler.print_stats()
        else:
            run_experiment(spec, max_workers=args.workers)

    except (UavCachingError, OSError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
