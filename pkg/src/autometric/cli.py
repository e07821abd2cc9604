"""Command-line interface.

Subcommands: eval, simulate, induce, analyze, validate, export-config.
Exit codes: 0 success, 1 usage, 2 validation or bad data, 3 I/O.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import ols_fit, stream_sq_distance, summarize
from .architecture import (
    EthicsArchitecture,
    build_dilemma_architecture,
    build_takeover_architecture,
    classify_takeover,
    evaluate,
    validate_architecture,
)
from .config import (
    ConfigError,
    RunManifest,
    architecture_to_dict,
    load_architecture,
    load_manifest,
    save_manifest,
)
from .nnge import extract_rules, format_rule, kfold_eval, resubstitution_accuracy, train
from .simulate import (
    ADAPTIVE,
    UNIFORM,
    WAVEFORMS,
    LabeledDataset,
    SignalGenerator,
    SimulationSchedule,
    canonical_dilemma_schedule,
    canonical_takeover_schedule,
    export_csv,
    label_dilemma,
    label_takeover,
    load_csv,
    run_simulation,
)

BUILTINS = ("takeover", "dilemma")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for validation
        raise UsageError(message)


def resolve_architecture(ref: str) -> tuple[EthicsArchitecture, str]:
    """Builtin name or config path -> (architecture, resolved kind)."""
    if ref == "takeover":
        return build_takeover_architecture(), "takeover"
    if ref == "dilemma":
        return build_dilemma_architecture(), "dilemma"
    return load_architecture(ref), "config"


def _parse_channel_values(pairs: list[str], flag: str) -> dict[str, float]:
    out = {}
    for pair in pairs or []:
        name, sep, raw = pair.partition("=")
        if not sep or not name:
            raise UsageError(f"{flag} expects NAME=VALUE, got {pair!r}")
        try:
            out[name] = float(raw)
        except ValueError:
            raise UsageError(f"{flag} {name}: not a number: {raw!r}") from None
    return out


def cmd_eval(args, extras) -> int:
    arch, kind = resolve_architecture(args.arch)
    probe = _Parser(prog=f"autometric eval {args.arch}", add_help=False)
    for channel in arch.sensors:
        probe.add_argument(f"--{channel}", type=float, required=True)
    values = vars(probe.parse_args(extras))
    trace = evaluate(arch, values)
    for name in arch.evaluation_order():
        tag = "  [no rule fired, range midpoint]" if name in trace.defaulted else ""
        print(f"{name}_out = {trace.stage_outputs[name]:.6g}{tag}")
    print(f"final = {trace.final:.6g}")
    if kind == "takeover":
        print(f"class = {classify_takeover(trace.final).value}")
    return 0


def _schedule_for(args, arch: EthicsArchitecture, kind: str) -> SimulationSchedule:
    if kind == "takeover":
        base = canonical_takeover_schedule()
    elif kind == "dilemma":
        base = canonical_dilemma_schedule()
    else:
        # custom config: sweep each sensor over the range of a variable it feeds
        duration, gens = 10.0, {}
        for channel in arch.sensors:
            var = _wired_variable(arch, channel)
            gens[channel] = SignalGenerator("triangle", var.low, var.high, 1.0, duration)
        base = SimulationSchedule(gens, duration=duration, steps=308, sampling=UNIFORM)

    duration = args.duration if args.duration is not None else base.duration
    steps = args.steps if args.steps is not None else base.steps
    sampling = args.sampling if args.sampling is not None else base.sampling
    cycles = _parse_channel_values(args.cycles, "--cycles")
    lows = _parse_channel_values(args.min, "--min")
    highs = _parse_channel_values(args.max, "--max")
    for name in set(cycles) | set(lows) | set(highs):
        if name not in arch.sensors:
            raise UsageError(f"unknown sensor channel {name!r} (have {arch.sensors})")
    generators = {}
    for channel, gen in base.generators.items():
        generators[channel] = SignalGenerator(
            waveform=args.waveform if args.waveform is not None else gen.waveform,
            low=lows.get(channel, gen.low),
            high=highs.get(channel, gen.high),
            cycles=cycles.get(channel, gen.cycles),
            duration=duration,
        )
    return SimulationSchedule(generators, duration=duration, steps=steps, sampling=sampling)


def _wired_variable(arch: EthicsArchitecture, channel: str):
    for stage in arch.stages:
        for var_name, (src_kind, src) in arch.wiring.get(stage.name, {}).items():
            if src_kind == "sensor" and src == channel:
                return stage.system.input(var_name)
    raise ConfigError(f"sensor {channel!r} feeds no stage input")


def _schedule_to_manifest(sched: SimulationSchedule) -> dict:
    return {
        "duration": sched.duration,
        "steps": sched.steps,
        "sampling": sched.sampling,
        "channels": {
            ch: {
                "waveform": g.waveform,
                "low": g.low,
                "high": g.high,
                "cycles": g.cycles,
            }
            for ch, g in sched.generators.items()
        },
    }


def _schedule_from_manifest(doc: dict) -> SimulationSchedule:
    channels = doc["channels"]
    return SimulationSchedule(
        generators={
            ch: SignalGenerator(
                waveform=c["waveform"],
                low=c["low"],
                high=c["high"],
                cycles=c["cycles"],
                duration=doc["duration"],
            )
            for ch, c in channels.items()
        },
        duration=doc["duration"],
        steps=doc["steps"],
        sampling=doc.get("sampling", UNIFORM),
    )


def cmd_simulate(args, extras) -> int:
    if extras:
        raise UsageError(f"unrecognized arguments: {extras}")
    if args.from_manifest:
        manifest = load_manifest(args.from_manifest)
        arch, kind = resolve_architecture(manifest.architecture)
        sched = _schedule_from_manifest(manifest.schedule)
        arch_ref = manifest.architecture
        out = Path(args.out) if args.out else Path(manifest.outputs[0])
    else:
        arch, kind = resolve_architecture(args.arch)
        arch_ref = args.arch
        sched = _schedule_for(args, arch, kind)
        if not args.out:
            raise UsageError("--out is required (or use --from-manifest)")
        out = Path(args.out)

    ds = run_simulation(arch, sched)
    labeler = args.labeler or ("dilemma" if kind == "dilemma" else "takeover")
    median = None
    if labeler == "takeover":
        ds = label_takeover(ds)
    elif labeler == "dilemma":
        ds, median = label_dilemma(ds)

    rows = export_csv(ds, out)
    manifest = RunManifest(
        architecture=arch_ref,
        schedule=_schedule_to_manifest(sched),
        outputs=[str(out)],
    )
    save_manifest(manifest, out.with_suffix(out.suffix + ".manifest.json"))
    print(f"wrote {rows} rows to {out}")
    if labeler != "none":
        report = summarize(ds)
        print(report.to_text())
        if median is not None:
            print(f"median split at {median:.6g}")
    return 0


def cmd_induce(args, extras) -> int:
    if extras:
        raise UsageError(f"unrecognized arguments: {extras}")
    ds = load_csv(args.csv)
    features = args.features.split(",") if args.features else ds.default_features()
    labels = ds.labels()
    if any(l is None for l in labels):
        raise ValueError("CSV has unlabelled rows; induction needs a class column")
    X = ds.feature_matrix(features)
    model = train(X, labels, features)
    accuracy = resubstitution_accuracy(model, X, labels)
    print(f"resubstitution accuracy: {accuracy * 100:.2f}% ({len(X)} samples, "
          f"{len(model.exemplars)} exemplars)")
    scales = _parse_channel_values(args.scale, "--scale")
    rules = extract_rules(model, min_covered=args.min_covered)
    for rule in rules:
        print(format_rule(rule, scales))
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump([r.to_dict() for r in rules], fh, indent=2)
            fh.write("\n")
        print(f"wrote {len(rules)} rules to {args.json_out}")
    if args.kfold:
        result = kfold_eval(X, labels, k=args.kfold, seed=args.seed, feature_names=features)
        folds = " ".join(f"{a * 100:.1f}" for a in result.fold_accuracies)
        print(f"{args.kfold}-fold accuracies (%): {folds}")
        print(f"{args.kfold}-fold mean accuracy: {result.mean_accuracy * 100:.2f}%")
    return 0


TAKEOVER_SENSORS = ("distance", "lane", "speed")
TAKEOVER_STAGES = ("rightwrong", "goodbad", "vmec")


def cmd_analyze(args, extras) -> int:
    if extras:
        raise UsageError(f"unrecognized arguments: {extras}")
    ds = load_csv(args.csv)
    if ds.sensor_names != TAKEOVER_SENSORS or ds.stage_names != TAKEOVER_STAGES:
        raise ValueError(
            "expected the takeover CSV schema "
            f"(sensors {TAKEOVER_SENSORS}, stages {TAKEOVER_STAGES}); "
            f"got sensors {ds.sensor_names}, stages {ds.stage_names}"
        )
    if any(l is None for l in ds.labels()):
        ds = label_takeover(ds)
    finals = ds.finals()
    rw = [r.stage_outputs["rightwrong"] for r in ds.rows]
    gb = [r.stage_outputs["goodbad"] for r in ds.rows]
    d_rw = stream_sq_distance(finals, rw)
    d_gb = stream_sq_distance(finals, gb)
    closer = "rightwrong" if d_rw < d_gb else "goodbad"
    print(f"stream distance vmec vs rightwrong: {d_rw:.4g}")
    print(f"stream distance vmec vs goodbad:    {d_gb:.4g}")
    print(f"vmec output is closer to the {closer} stream")

    features = ds.default_features()
    if len(ds.rows) > len(features) + 1:
        fit = ols_fit(ds.feature_matrix(features), finals, features)
        print(f"OLS R^2 = {fit.r_squared:.4f}, intercept = {fit.intercept:.4g}")
        for name in features:
            print(f"  coef[{name}] = {fit.coefficients[name]:+.4g}")
    else:
        print(f"regression skipped: need more than {len(features) + 1} rows, "
              f"got {len(ds.rows)}")

    print(summarize(ds).to_text())

    plot_path = Path(args.plot_out) if args.plot_out else Path(str(args.csv) + ".plot.csv")
    _write_plot_data(ds, plot_path)
    print(f"wrote plot data to {plot_path}")
    return 0


def _write_plot_data(ds: LabeledDataset, path: Path) -> None:
    # speed is scaled to a tenth so every stream fits one value axis
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["time", "distance", "lane", "speed_scaled", "rightwrong_out", "goodbad_out",
             "vmec_out"]
        )
        for row in ds.rows:
            writer.writerow(
                [
                    format(row.time, ".6g"),
                    format(row.sensors["distance"], ".6g"),
                    format(row.sensors["lane"], ".6g"),
                    format(row.sensors["speed"] * 0.1, ".6g"),
                    format(row.stage_outputs["rightwrong"], ".6g"),
                    format(row.stage_outputs["goodbad"], ".6g"),
                    format(row.stage_outputs["vmec"], ".6g"),
                ]
            )


def cmd_validate(args, extras) -> int:
    if extras:
        raise UsageError(f"unrecognized arguments: {extras}")
    if args.config in BUILTINS:
        arch, _ = resolve_architecture(args.config)
        problems = validate_architecture(arch)
    else:
        try:
            arch = load_architecture(args.config)
            problems = []
        except ConfigError as exc:
            print(str(exc), file=sys.stderr)
            return 2
    if problems:
        for problem in problems:
            print(problem, file=sys.stderr)
        return 2
    print(f"{args.config}: OK")
    return 0


def cmd_export_config(args, extras) -> int:
    if extras:
        raise UsageError(f"unrecognized arguments: {extras}")
    if args.arch not in BUILTINS:
        raise UsageError(f"export-config takes a builtin name, one of {BUILTINS}")
    arch, kind = resolve_architecture(args.arch)
    doc = architecture_to_dict(arch, kind)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.out}")
    else:
        json.dump(doc, sys.stdout, indent=2)
        print()
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="autometric", description=__doc__)
    parser.add_argument("--version", action="version", version=f"autometric {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate an architecture on one sensor reading")
    p.add_argument("arch", help="takeover | dilemma | config path")

    p = sub.add_parser("simulate", help="run a schedule and write a labelled CSV")
    p.add_argument("arch", nargs="?", help="takeover | dilemma | config path")
    p.add_argument("--out", help="CSV destination")
    p.add_argument("--steps", type=int)
    p.add_argument("--duration", type=float)
    p.add_argument("--waveform", choices=WAVEFORMS)
    p.add_argument("--sampling", choices=(UNIFORM, ADAPTIVE))
    p.add_argument("--cycles", action="append", metavar="CHANNEL=N")
    p.add_argument("--min", action="append", metavar="CHANNEL=V")
    p.add_argument("--max", action="append", metavar="CHANNEL=V")
    p.add_argument("--labeler", choices=("takeover", "dilemma", "none"))
    p.add_argument("--from-manifest", help="replay a previous run's manifest")

    p = sub.add_parser("induce", help="learn interval rules from a labelled CSV")
    p.add_argument("csv")
    p.add_argument("--features", help="comma-separated feature columns")
    p.add_argument("--min-covered", type=int, default=2)
    p.add_argument("--kfold", type=int)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--json-out")
    p.add_argument("--scale", action="append", metavar="FEATURE=K",
                   help="display scale for rule bounds (e.g. pedestrian=10)")

    p = sub.add_parser("analyze", help="proximity, regression and summary of a takeover CSV")
    p.add_argument("csv")
    p.add_argument("--plot-out", help="plot-data CSV destination")

    p = sub.add_parser("validate", help="check a config (or builtin) for violations")
    p.add_argument("config")

    p = sub.add_parser("export-config", help="write a builtin architecture as JSON")
    p.add_argument("arch")
    p.add_argument("--out")

    return parser


HANDLERS = {
    "eval": cmd_eval,
    "simulate": cmd_simulate,
    "induce": cmd_induce,
    "analyze": cmd_analyze,
    "validate": cmd_validate,
    "export-config": cmd_export_config,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args, extras = parser.parse_known_args(argv)
        if args.command == "simulate" and not args.from_manifest and not args.arch:
            raise UsageError("simulate needs an architecture (or --from-manifest)")
        return HANDLERS[args.command](args, extras)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, LookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
