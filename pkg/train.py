# -*- coding: utf-8 -*-

# This driver evolves a controller for the experiment described in a configuration file.
# The evocar command matching the experiment kind is chosen automatically.

import argparse
import sys

from evocar.backend.utils.config import ConfigError, parse_config
from evocar.cli import EXIT_INVALID, command_for_kind, main

argparser = argparse.ArgumentParser(
    description='Evolve a collision avoidance controller from a configuration file')

argparser.add_argument(
    '-c',
    '--conf',
    default="config.json",
    help='path to configuration file')

argparser.add_argument(
    '-w',
    '--workers',
    default=1,
    type=int,
    help='parallel fitness evaluation processes')

argparser.add_argument(
    '-s',
    '--seed',
    default=None,
    help='master seed')


if __name__ == '__main__':
    args = argparser.parse_args()
    try:
        spec, _ = parse_config(args.conf)
    except ConfigError as e:
        print(e, file=sys.stderr)
        sys.exit(EXIT_INVALID)

    command = [command_for_kind(spec.kind), "--config", args.conf, "--workers", str(args.workers)]
    if args.seed is not None:
        command += ["--seed", args.seed]
    sys.exit(main(command))
