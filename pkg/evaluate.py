# -*- coding: utf-8 -*-

# This driver deploys a trained champion:
#     1) prints its fitness and termination cause on every configured scenario
#        and on the requested bundled tracks (which may be unseen during training).
#     2) stores the trajectories as trace csv files.

import argparse
import sys

from evocar.cli import main

argparser = argparse.ArgumentParser(
    description='Deploy a trained champion driver')

argparser.add_argument(
    '-c',
    '--conf',
    default="config.json",
    help='path to configuration file')

argparser.add_argument(
    '-w',
    '--weights',
    default=None,
    help='trained weight file')

argparser.add_argument(
    '-t',
    '--track',
    action='append',
    default=[],
    help='bundled track to deploy on as well (narrow or wide)')


if __name__ == '__main__':
    args = argparser.parse_args()
    command = ["replay", "--config", args.conf]
    if args.weights:
        command += ["--weights", args.weights]
    for track in args.track:
        command += ["--track", track]
    sys.exit(main(command))
