"""Deterministic simulation: cyclic signal schedules, sampling, labels, CSV.

Two sampling modes exist.  ``uniform`` places the requested number of
samples evenly over the horizon.  ``adaptive`` emulates a variable-step
solver: a fine uniform pre-pass locates where the final output is
changing, then sample times are drawn from a density that is high on
changing segments and low (``ADAPTIVE_IDLE_DENSITY``) on statically
held segments.  Both modes are bit-reproducible.
"""
from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass, field, replace
from typing import IO, Iterable

import numpy as np

from .architecture import EthicsArchitecture, EvaluationTrace, classify_takeover, evaluate

TRIANGLE = "triangle"
SAWTOOTH = "sawtooth"
SINE = "sine"
WAVEFORMS = (TRIANGLE, SAWTOOTH, SINE)

UNIFORM = "uniform"
ADAPTIVE = "adaptive"

# Adaptive sampling knobs: pre-pass resolution multiplier, the relative
# sample density granted to segments where the output is not changing,
# and the change threshold between consecutive pre-pass outputs.
ADAPTIVE_REFINE = 8
ADAPTIVE_IDLE_DENSITY = 0.02
ADAPTIVE_CHANGE_TOL = 1e-9

STRAIGHT_AHEAD = "straight_ahead"
SWERVE = "swerve"


@dataclass(frozen=True)
class SignalGenerator:
    """A cyclic waveform over [low, high] for one sensor channel."""

    waveform: str
    low: float
    high: float
    cycles: float
    duration: float

    def __post_init__(self):
        if self.waveform not in WAVEFORMS:
            raise ValueError(f"waveform must be one of {WAVEFORMS}, got {self.waveform!r}")
        if not self.low < self.high:
            raise ValueError(f"signal range low {self.low} must be < high {self.high}")
        if self.cycles <= 0:
            raise ValueError(f"cycles must be positive, got {self.cycles}")
        if self.duration <= 0:
            raise ValueError(f"duration must be positive, got {self.duration}")


def signal_value(gen: SignalGenerator, t: float) -> float:
    """Waveform value at time ``t``; every waveform starts at ``low``."""
    if not 0.0 <= t <= gen.duration:
        raise ValueError(f"t={t} outside [0, {gen.duration}]")
    phase = (t / gen.duration) * gen.cycles % 1.0
    if gen.waveform == TRIANGLE:
        frac = 2.0 * phase if phase <= 0.5 else 2.0 * (1.0 - phase)
    elif gen.waveform == SAWTOOTH:
        frac = phase
    else:
        frac = 0.5 * (1.0 - math.cos(2.0 * math.pi * phase))
    return gen.low + (gen.high - gen.low) * frac


@dataclass(frozen=True)
class SimulationSchedule:
    """Per-channel generators plus the sampling plan."""

    generators: dict[str, SignalGenerator]
    duration: float
    steps: int
    sampling: str = UNIFORM

    def __post_init__(self):
        object.__setattr__(self, "generators", dict(self.generators))
        if self.steps < 2:
            raise ValueError(f"steps must be >= 2, got {self.steps}")
        if self.sampling not in (UNIFORM, ADAPTIVE):
            raise ValueError(f"sampling must be '{UNIFORM}' or '{ADAPTIVE}'")
        for channel, gen in self.generators.items():
            if gen.duration != self.duration:
                raise ValueError(
                    f"generator for {channel!r} has duration {gen.duration}, "
                    f"schedule expects {self.duration}"
                )

    def sensor_values(self, t: float) -> dict[str, float]:
        return {ch: signal_value(gen, t) for ch, gen in self.generators.items()}


@dataclass(frozen=True)
class SampleRow:
    time: float
    sensors: dict[str, float]
    stage_outputs: dict[str, float]
    final: float
    label: str | None = None


@dataclass(frozen=True)
class LabeledDataset:
    """Time-ordered samples of one simulation run."""

    sensor_names: tuple[str, ...]
    stage_names: tuple[str, ...]
    rows: tuple[SampleRow, ...] = field(default_factory=tuple)

    def finals(self) -> list[float]:
        return [row.final for row in self.rows]

    def labels(self) -> list[str | None]:
        return [row.label for row in self.rows]

    def feature_matrix(self, features: Iterable[str]) -> np.ndarray:
        """Columns picked by name from sensors and stage outputs."""
        features = list(features)
        out = np.empty((len(self.rows), len(features)))
        for i, row in enumerate(self.rows):
            for j, name in enumerate(features):
                stem = name[: -len("_out")] if name.endswith("_out") else name
                if name in row.sensors:
                    out[i, j] = row.sensors[name]
                elif stem in row.stage_outputs:
                    out[i, j] = row.stage_outputs[stem]
                elif name == "time":
                    out[i, j] = row.time
                else:
                    raise KeyError(f"unknown feature {name!r}")
        return out

    def default_features(self) -> list[str]:
        """Sensors plus every stage output except the terminal one."""
        return list(self.sensor_names) + list(self.stage_names[:-1])


def _uniform_times(duration: float, steps: int) -> list[float]:
    return [k * duration / (steps - 1) for k in range(steps)]


def _adaptive_times(arch: EthicsArchitecture, sched: SimulationSchedule) -> list[float]:
    """Sample times concentrated where the final output is changing."""
    fine_n = ADAPTIVE_REFINE * (sched.steps - 1) + 1
    fine_t = np.linspace(0.0, sched.duration, fine_n)
    fine_v = np.array([evaluate(arch, sched.sensor_values(t)).final for t in fine_t])
    changing = np.abs(np.diff(fine_v)) > ADAPTIVE_CHANGE_TOL
    weights = np.where(changing, 1.0, ADAPTIVE_IDLE_DENSITY) * np.diff(fine_t)
    cum = np.concatenate([[0.0], np.cumsum(weights)])
    cum /= cum[-1]
    quantiles = np.linspace(0.0, 1.0, sched.steps)
    return [float(t) for t in np.interp(quantiles, cum, fine_t)]


def run_simulation(arch: EthicsArchitecture, sched: SimulationSchedule) -> LabeledDataset:
    """Evaluate the architecture over the schedule; labels left empty."""
    for channel in arch.sensors:
        if channel not in sched.generators:
            raise ValueError(f"schedule has no generator for sensor {channel!r}")
    if sched.sampling == ADAPTIVE:
        times = _adaptive_times(arch, sched)
    else:
        times = _uniform_times(sched.duration, sched.steps)
    stage_names = tuple(arch.evaluation_order())
    rows = []
    for t in times:
        sensors = sched.sensor_values(t)
        trace: EvaluationTrace = evaluate(arch, sensors)
        rows.append(
            SampleRow(
                time=t,
                sensors={c: sensors[c] for c in arch.sensors},
                stage_outputs=dict(trace.stage_outputs),
                final=trace.final,
            )
        )
    return LabeledDataset(
        sensor_names=tuple(arch.sensors), stage_names=stage_names, rows=tuple(rows)
    )


def label_takeover(ds: LabeledDataset) -> LabeledDataset:
    """Attach the takeover outcome class to every row."""
    rows = tuple(
        replace(row, label=classify_takeover(row.final).value) for row in ds.rows
    )
    return replace(ds, rows=rows)


def label_dilemma(ds: LabeledDataset) -> tuple[LabeledDataset, float]:
    """Split rows at the median final output.

    Rows at or above the median are labelled ``swerve``, the rest
    ``straight_ahead``.  Returns the labelled dataset and the median.
    """
    finals = ds.finals()
    if not finals:
        raise ValueError("cannot label an empty dataset")
    median = float(statistics.median(finals))
    rows = tuple(
        replace(row, label=SWERVE if row.final >= median else STRAIGHT_AHEAD)
        for row in ds.rows
    )
    return replace(ds, rows=rows), median


def _fmt(x: float) -> str:
    return format(x, ".6g")


def csv_header(ds: LabeledDataset) -> list[str]:
    return (
        ["time"]
        + list(ds.sensor_names)
        + [f"{name}_out" for name in ds.stage_names]
        + ["class"]
    )


def export_csv(ds: LabeledDataset, destination) -> int:
    """Write the dataset as CSV (UTF-8, LF, 6 significant digits).

    ``destination`` may be a path or a writable text file object.
    Returns the number of data rows written.
    """
    if hasattr(destination, "write"):
        return _write_csv(ds, destination)
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        return _write_csv(ds, fh)


def _write_csv(ds: LabeledDataset, fh: IO[str]) -> int:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(csv_header(ds))
    count = 0
    for row in ds.rows:
        record = [_fmt(row.time)]
        record += [_fmt(row.sensors[c]) for c in ds.sensor_names]
        record += [_fmt(row.stage_outputs[s]) for s in ds.stage_names]
        record.append(row.label if row.label is not None else "")
        writer.writerow(record)
        count += 1
    return count


def load_csv(source) -> LabeledDataset:
    """Read a dataset written by ``export_csv``.

    Raises ValueError naming the offending line on malformed input.
    """
    if hasattr(source, "read"):
        return _read_csv(source)
    with open(source, "r", encoding="utf-8", newline="") as fh:
        return _read_csv(fh)


def _read_csv(fh) -> LabeledDataset:
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("line 1: empty CSV, expected a header row") from None
    if not header or header[0] != "time" or header[-1] != "class":
        raise ValueError(f"line 1: expected 'time,...,class' header, got {header}")
    middle = header[1:-1]
    sensor_cols = [(i + 1, c) for i, c in enumerate(middle) if not c.endswith("_out")]
    stage_cols = [(i + 1, c[: -len("_out")]) for i, c in enumerate(middle) if c.endswith("_out")]
    if not stage_cols:
        raise ValueError("line 1: header has no *_out stage columns")
    sensor_names = tuple(name for _, name in sensor_cols)
    stage_names = tuple(name for _, name in stage_cols)
    rows = []
    for lineno, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != len(header):
            raise ValueError(
                f"line {lineno}: expected {len(header)} fields, got {len(record)}"
            )
        try:
            values = [float(v) for v in record[:-1]]
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric value in {record[:-1]}") from None
        sensors = {name: values[i] for i, name in sensor_cols}
        stages = {name: values[i] for i, name in stage_cols}
        label = record[-1] or None
        rows.append(
            SampleRow(
                time=values[0],
                sensors=sensors,
                stage_outputs=stages,
                final=values[stage_cols[-1][0]],
                label=label,
            )
        )
    return LabeledDataset(sensor_names=sensor_names, stage_names=stage_names, rows=tuple(rows))


def canonical_takeover_schedule(
    steps: int = 308, waveform: str = TRIANGLE, duration: float = 10.0
) -> SimulationSchedule:
    """Default takeover run: speed sweeps one cycle over its full range,
    lane two cycles and distance four, sampled adaptively (the output
    stream has long statically held stretches that a variable-step
    solver would compress, and the sample statistics assume that).
    """
    return SimulationSchedule(
        generators={
            "distance": SignalGenerator(waveform, 1, 10, 4, duration),
            "lane": SignalGenerator(waveform, 1, 10, 2, duration),
            "speed": SignalGenerator(waveform, 0, 100, 1, duration),
        },
        duration=duration,
        steps=steps,
        sampling=ADAPTIVE,
    )


def canonical_dilemma_schedule(
    steps: int = 26, waveform: str = TRIANGLE, duration: float = 10.0
) -> SimulationSchedule:
    """Default dilemma run, uniformly sampled.

    The pedestrian channel is age in years scaled by 0.1; the scenario
    is a child ahead, so the generator sweeps ages 1 to 10 years, i.e.
    sensor values 0.1 to 1.0.
    """
    return SimulationSchedule(
        generators={
            "straight": SignalGenerator(waveform, 1, 10, 1, duration),
            "swerve": SignalGenerator(waveform, 1, 10, 2, duration),
            "pedestrian": SignalGenerator(waveform, 0.1, 1.0, 4, duration),
        },
        duration=duration,
        steps=steps,
        sampling=UNIFORM,
    )
