# -*- coding: utf-8 -*-
# Command-line entry point: evocar <command> --config <file> [options]
#
# Exit codes: 0 success, 1 invalid configuration or missing input file,
# 2 failure while running.

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from evocar._version import __version__
from evocar.backend.utils import config as cfg
from evocar.backend.utils.config import ConfigError, parse_config
from evocar.backend.utils.fit import Stopwatch
from evocar.backend.utils.report import ResultWriter, read_population, read_weights
from evocar.backend.utils.track import TRACK_PRESETS, bundled_track
from evocar.frontend import (champion, cross_evaluate, evaluate_champion, generations_to_reach, run_broadcast_champion,
                             run_broadcast_population, run_incremental, run_individual_ca, run_navigation,
                             run_sensor_sweep)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FAILED = 2

COMMAND_KINDS = {
    "train": (cfg.NAVIGATION, cfg.INDIVIDUAL_CA),
    "sweep": (cfg.SENSOR_SWEEP,),
    "cross-eval": (cfg.CROSS_EVAL,),
    "incremental": (cfg.INCREMENTAL,),
    "broadcast": (cfg.BROADCAST_CHAMPION, cfg.BROADCAST_POPULATION),
    "replay": cfg.EXPERIMENT_KINDS,
    "validate": cfg.EXPERIMENT_KINDS,
}


def command_for_kind(kind):
    for command in ("train", "sweep", "cross-eval", "incremental", "broadcast"):
        if kind in COMMAND_KINDS[command]:
            return command
    raise ValueError("unknown experiment kind {!r}".format(kind))


def create_parser():
    argparser = argparse.ArgumentParser(
        prog="evocar",
        description="Evolve neural-network steering controllers for collision avoidance")
    argparser.add_argument("--version", action="version", version="evocar {}".format(__version__))
    subparsers = argparser.add_subparsers(dest="command")
    subparsers.required = True

    helps = {"train": "evolve a controller (navigation or individual collision avoidance)",
             "sweep": "repeat navigation training for several sensor beam counts",
             "cross-eval": "train one champion per strategy and test each on every strategy",
             "incremental": "train on a growing set of strategies",
             "broadcast": "measure collision rates before and after broadcasting learned controllers",
             "replay": "deploy a stored champion and write its trajectory",
             "validate": "check a configuration file and exit"}
    for command, text in helps.items():
        sub = subparsers.add_parser(command, help=text, description=text)
        sub.add_argument("-c", "--config", default="config.json", help="path to configuration file")
        if command == "validate":
            continue
        sub.add_argument("-o", "--out", default=None, help="output directory (overrides experiment.out_dir)")
        sub.add_argument("-s", "--seed", type=int, default=None, help="master seed (overrides experiment.seed)")
        sub.add_argument("-w", "--workers", type=int, default=1, help="parallel fitness evaluation processes")
        sub.add_argument("--trace", action="store_true", help="also write trace_<run>.csv for every champion")
        sub.add_argument("--plot", action="store_true", help="render png figures next to the csv files")
        sub.add_argument("-v", "--verbose", action="count", default=1, help="repeat for per-evaluation details")
        sub.add_argument("-q", "--quiet", action="store_true", help="no progress output")
        if command == "replay":
            sub.add_argument("--weights", default=None,
                             help="champion weights file (default: <out>/champion_<name>_seed<first seed>.weights)")
            sub.add_argument("--track", action="append", default=[], choices=sorted(TRACK_PRESETS),
                             help="also deploy on this bundled track (repeatable)")
    return argparser


def _run_label(spec, *parts):
    return "_".join([spec.name] + [str(p) for p in parts])


def _emit_histories(spec, run_config, writer, histories, label_parts=()):
    """Curves, champion weights, final population and optional trace for each replicate."""
    for replicate, history in histories.items():
        run = _run_label(spec, *(tuple(label_parts) + ("seed{}".format(replicate),)))
        best = history.best_ever
        writer.curves(run, history)
        writer.weights(run, best.best_chromosome, history.topology, best.best_fitness)
        writer.population(run, history.final_population, history.topology)
        if run_config.trace:
            _emit_traces(spec, writer, run, best.best_chromosome, history.topology)


def _emit_traces(spec, writer, run, chromosome, topology, scenarios=None):
    scenarios = spec.scenarios if scenarios is None else scenarios
    results = evaluate_champion(chromosome, scenarios, topology, spec.evaluation_seed, trace=True)
    for name, result in results.items():
        writer.trace(run if len(results) == 1 else "{}_{}".format(run, name), result.trace)
    return results


def _plot_curves(run_config, writer, fname, histories, title):
    if run_config.plot:
        from evocar.backend.utils.plot import plot_curves
        path = writer.path(fname)
        plot_curves(path, histories, title)
        writer.written.append(path)


def _train(spec, run_config, writer):
    verbosity, workers = run_config.verbosity, run_config.workers
    if spec.kind == cfg.NAVIGATION:
        histories = run_navigation(spec, workers, verbosity)
        _emit_histories(spec, run_config, writer, histories)
        _plot_curves(run_config, writer, "curves_{}.png".format(spec.name),
                     {"seed {}".format(r): h for r, h in histories.items()}, spec.name)
    else:
        runs = run_individual_ca(spec, workers=workers, verbosity=verbosity)
        for strategy, histories in runs.items():
            _emit_histories(spec, run_config, writer, histories, (strategy,))
            _plot_curves(run_config, writer, "curves_{}.png".format(_run_label(spec, strategy)),
                         {"seed {}".format(r): h for r, h in histories.items()}, strategy)


def _sweep(spec, run_config, writer):
    sweep = run_sensor_sweep(spec, run_config.workers, run_config.verbosity)
    for beam_count, histories in sweep.items():
        _emit_histories(spec, run_config, writer, histories, ("{}beams".format(beam_count),))
        if run_config.verbosity >= 1 and spec.acceptance_fitness > 0:
            reached = [generations_to_reach(h, spec.acceptance_fitness) for h in histories.values()]
            print("{} beams: final best (median) {:g}, acceptance reached at generations {}".format(
                beam_count, float(np.median([h.best_fitness()[-1] for h in histories.values()])), reached))
    first = spec.replicates[0]
    _plot_curves(run_config, writer, "curves_{}.png".format(spec.name),
                 {"{} beams".format(c): runs[first] for c, runs in sweep.items()}, spec.name)


def _cross_eval(spec, run_config, writer):
    runs = run_individual_ca(spec, workers=run_config.workers, verbosity=run_config.verbosity)
    champions = {}
    for strategy, histories in runs.items():
        _emit_histories(spec, run_config, writer, histories, (strategy,))
        champions[strategy] = champion(histories).best_chromosome
    matrix = cross_evaluate(champions, spec.scenarios, spec.topology, spec.evaluation_seed)
    writer.matrix(matrix)
    if run_config.verbosity >= 1:
        print("diagonal dominant: {}".format(matrix.diagonal_dominant()))
    if run_config.plot:
        from evocar.backend.utils.plot import plot_matrix
        plot_matrix(writer.path("matrix.png"), matrix)
        writer.written.append(writer.path("matrix.png"))


def _incremental(spec, run_config, writer):
    runs = run_incremental(spec, run_config.workers, run_config.verbosity)
    tables = {}
    for replicate, (records, history) in runs.items():
        run = _run_label(spec, "seed{}".format(replicate))
        tables[run] = records
        writer.curves(run, history)
        writer.weights(run, records[-1].best_chromosome, spec.topology, records[-1].mean)
        if run_config.trace:
            _emit_traces(spec, writer, run, records[-1].best_chromosome, spec.topology)
        if run_config.verbosity >= 1 and not records[-1].converged:
            print("{}: iteration {} did not converge within {} generations".format(
                run, records[-1].iteration, spec.generation_budget))
    writer.incremental(tables, list(spec.scenarios))


def _source_training(spec, run_config):
    """Trains on the source strategy when no stored champion or population is given."""
    runs = run_individual_ca(spec, [spec.source_strategy], run_config.workers, run_config.verbosity)
    return runs[spec.source_strategy]


def _load_checked(reader, path, spec):
    data, topology = reader(path)
    if topology != spec.topology:
        raise ValueError("{} holds a {} network, configuration expects {}".format(path, topology, spec.topology))
    return data


def _print_rates(report, label):
    print("{}: mean reduction {:.1%}, fewer collisions with {}".format(
        label, report.mean_reduction(), ", ".join(report.improved()) or "no strategy"))


def _broadcast(spec, run_config, writer):
    histories = None
    if spec.champion_path is not None:
        best = _load_checked(read_weights, spec.champion_path, spec)
    elif spec.kind == cfg.BROADCAST_CHAMPION or spec.population_path is None:
        histories = _source_training(spec, run_config)
        _emit_histories(spec, run_config, writer, histories, ("source", spec.source_strategy))
        best = champion(histories).best_chromosome
    else:
        best = None

    metadata = ["measure_steps={} training_steps={} learners={}".format(
        spec.measure_steps, spec.training_steps, spec.learners)]
    if spec.kind == cfg.BROADCAST_CHAMPION:
        report = run_broadcast_champion(spec, best, run_config.verbosity)
        writer.rates(report, metadata=metadata)
        if run_config.verbosity >= 1:
            _print_rates(report, "champion broadcast")
        return

    if spec.population_path is not None:
        population = _load_checked(read_population, spec.population_path, spec)
    else:
        population = histories[spec.replicates[0]].final_population
    report = run_broadcast_population(spec, population, run_config.verbosity)
    writer.rates(report, metadata=metadata)
    if run_config.verbosity >= 1:
        _print_rates(report, "population broadcast")
    if best is not None:
        champion_report = run_broadcast_champion(spec, best, run_config.verbosity)
        writer.rates(champion_report, "rates_champion.csv", metadata)


def _replay(spec, run_config, writer, weights_path=None, tracks=()):
    if weights_path is None:
        weights_path = writer.path("champion_{}_seed{}.weights".format(spec.name, spec.replicates[0]))
    if not os.path.isfile(weights_path):
        raise FileNotFoundError("weights file not found: {}".format(weights_path))
    chromosome, topology = read_weights(weights_path)
    base = spec.scenario
    if topology.n_inputs != base.sensor.beam_count:
        base = replace(base, sensor=replace(base.sensor, beam_count=topology.n_inputs))
    scenarios = {name: replace(s, sensor=base.sensor) for name, s in spec.scenarios.items()}
    for track in tracks:
        environment, (x, y, heading) = bundled_track(track, base.ego_start.width)
        scenarios["track-{}".format(track)] = replace(base, environment=environment, opponents=(),
                                                      ego_start=base.ego_start.moved_to(x, y, heading),
                                                      name="track-{}".format(track))
    run = os.path.splitext(os.path.basename(weights_path))[0].replace("champion_", "replay_", 1)
    results = _emit_traces(spec, writer, run, chromosome, topology, scenarios)
    for name, result in results.items():
        print("{}: fitness {} ({})".format(name, result.fitness, result.termination))


_HANDLERS = {
    "train": _train,
    "sweep": _sweep,
    "cross-eval": _cross_eval,
    "incremental": _incremental,
    "broadcast": _broadcast,
}


def run(spec, run_config, command=None):
    """Dispatch the experiment and write its result files.

    # Returns
        written : list of output paths
    """
    command = command or command_for_kind(spec.kind)
    writer = ResultWriter(run_config.out_dir, run_config.config_hash, run_config.master_seed)
    stopwatch = Stopwatch()
    _HANDLERS[command](spec, run_config, writer)
    if run_config.verbosity >= 1:
        print(stopwatch.summary("to run {}".format(spec.kind)))
    return writer.written


def _check_command(command, spec):
    if spec.kind not in COMMAND_KINDS[command]:
        raise ConfigError(["experiment.kind: {!r} cannot be run by '{}', use 'evocar {}'".format(
            spec.kind, command, command_for_kind(spec.kind))])


def main(argv=None):
    args = create_parser().parse_args(argv)
    try:
        if args.command == "validate":
            spec, run_config = parse_config(args.config)
        else:
            spec, run_config = parse_config(args.config,
                                            out_dir=args.out,
                                            seed=args.seed,
                                            workers=args.workers,
                                            verbosity=0 if args.quiet else args.verbose,
                                            trace=args.trace,
                                            plot=args.plot)
        _check_command(args.command, spec)
        if args.command != "validate" and args.workers < 1:
            raise ConfigError(["--workers must be >= 1, got {}".format(args.workers)])
    except (ConfigError, FileNotFoundError) as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_INVALID

    if args.command == "validate":
        print("{}: valid {} experiment '{}', topology {}, {} scenario(s)".format(
            args.config, spec.kind, spec.name, spec.topology, len(spec.scenarios)))
        return EXIT_OK

    try:
        if args.command == "replay":
            writer = ResultWriter(run_config.out_dir, run_config.config_hash, run_config.master_seed)
            _replay(spec, run_config, writer, args.weights, args.track)
            written = writer.written
        else:
            written = run(spec, run_config, args.command)
    except FileNotFoundError as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_INVALID
    except (Exception, KeyboardInterrupt) as e:
        print("error: {} failed: {}".format(args.command, e), file=sys.stderr)
        return EXIT_FAILED

    if run_config.verbosity >= 1:
        for path in written:
            print("wrote {}".format(path))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
