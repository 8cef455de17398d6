"""Benchmark harness: run detectors over scenarios and compare them.

Protocol: generate the scenario, cut 9 s batches, fit each detector once on
the first ``train_window_batches`` batches that lie fully inside the
fulfillment phase, then evaluate every subsequent batch.  Each evaluation
yields one :class:`RunRecord` carrying the verdict, the ground-truth label,
wall time, and peak allocated bytes.

Latency is reported as two separate metrics because a single "latency"
number conflates them: ``detection_delay`` (scenario seconds from drift
onset to the first positive verdict) and ``compute_time`` (wall seconds per
fit-plus-evaluate).  Memory is the peak allocation measured by the
interpreter's allocation-tracing hook; if tracing is unavailable the
per-engine analytic estimate below is used and the report says so.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Sequence

from .detectors import DriftDetector, DriftVerdict, ModelType
from .scenario import GroundTruth, PhaseKind, ScenarioSpec, generate, label_batch
from .telemetry import Batch, Series, batchify, concat_values
from .validation import check_count

try:
    import tracemalloc
except ImportError:  # pragma: no cover - tracemalloc ships with CPython
    tracemalloc = None

__all__ = [
    "ProtocolError",
    "BenchProtocol",
    "RunRecord",
    "ModelStats",
    "BenchReport",
    "run_scenario",
    "accuracy",
    "false_positive_rate",
    "detection_delay",
    "compute_time_stats",
    "memory_estimate",
    "compare_models",
    "emit_report",
]


class ProtocolError(ValueError):
    """Scenario/protocol mismatch (e.g. fulfillment too short to train on)."""


@dataclass(frozen=True)
class BenchProtocol:
    """Sliding train/test policy: window size, optional refit cadence, batch length."""

    train_window_batches: int = 5
    refit_every: int = 0  # 0: fit once, never refit
    batch_len: float = 9.0


@dataclass(frozen=True)
class RunRecord:
    """One evaluated batch: verdict vs truth plus resource readings."""

    model: ModelType
    batch_index: int
    batch_start_t: float
    batch_end_t: float
    verdict: DriftVerdict
    truth: bool
    compute_time: float
    allocated_bytes: int


@dataclass(frozen=True)
class ComputeTimeStats:
    mean: float
    max: float


@dataclass
class ModelStats:
    accuracy: float
    false_positive_rate: float
    avg_detection_delay: float  # seconds; +inf when never detected
    avg_compute_time: float
    peak_memory_bytes: int
    memory_basis: str  # "measured" | "estimated"


@dataclass
class BenchReport:
    """Aggregated comparison across scenarios, models, and repetition seeds."""

    scenarios: dict[str, dict[str, Any]]
    configs: dict[str, dict[str, Any]]
    protocol: dict[str, Any]
    repetitions: int
    seed_base: int
    total_runs: int
    per_model: dict[str, ModelStats]
    rankings: dict[str, list[str]]
    calibration_warnings: list[str]
    timelines: dict[str, list[tuple]] = field(default_factory=dict, compare=False, repr=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenarios": self.scenarios,
            "configs": self.configs,
            "protocol": self.protocol,
            "repetitions": self.repetitions,
            "seed_base": self.seed_base,
            "total_runs": self.total_runs,
            "per_model": {
                name: {
                    "accuracy": s.accuracy,
                    "false_positive_rate": s.false_positive_rate,
                    "avg_detection_delay": None if math.isinf(s.avg_detection_delay) else s.avg_detection_delay,
                    "avg_compute_time": s.avg_compute_time,
                    "peak_memory_bytes": s.peak_memory_bytes,
                    "memory_basis": s.memory_basis,
                }
                for name, s in self.per_model.items()
            },
            "rankings": self.rankings,
            "calibration_warnings": self.calibration_warnings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "BenchReport":
        per_model = {
            name: ModelStats(
                accuracy=float(s["accuracy"]),
                false_positive_rate=float(s["false_positive_rate"]),
                avg_detection_delay=math.inf if s["avg_detection_delay"] is None else float(s["avg_detection_delay"]),
                avg_compute_time=float(s["avg_compute_time"]),
                peak_memory_bytes=int(s["peak_memory_bytes"]),
                memory_basis=str(s["memory_basis"]),
            )
            for name, s in d["per_model"].items()
        }
        return cls(
            scenarios=d["scenarios"],
            configs=d["configs"],
            protocol=d["protocol"],
            repetitions=int(d["repetitions"]),
            seed_base=int(d["seed_base"]),
            total_runs=int(d["total_runs"]),
            per_model=per_model,
            rankings={k: list(v) for k, v in d["rankings"].items()},
            calibration_warnings=list(d["calibration_warnings"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "BenchReport":
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Resource measurement
# ---------------------------------------------------------------------------

def _measure(fn: Callable[[], Any]) -> tuple[Any, float, int, str]:
    """Run fn, returning (result, wall seconds, peak allocated bytes, basis)."""
    if tracemalloc is None:
        t0 = time.perf_counter()
        result = fn()
        return result, time.perf_counter() - t0, -1, "estimated"
    started_here = not tracemalloc.is_tracing()
    if started_here:
        tracemalloc.start()
    base = tracemalloc.get_traced_memory()[0]
    tracemalloc.reset_peak()
    t0 = time.perf_counter()
    result = fn()
    elapsed = time.perf_counter() - t0
    _, peak = tracemalloc.get_traced_memory()
    if started_here:
        tracemalloc.stop()
    return result, elapsed, max(0, peak - base), "measured"


def memory_estimate(model: ModelType | str, n: int) -> int:
    """Analytic working-set estimate (bytes) for one fit/evaluate on n points.

    Used when allocation tracing is unavailable.  Matrix-based engines
    materialize N x N float64 buffers: affinity propagation keeps similarity,
    responsibility, and availability matrices; hierarchical and optics keep a
    distance matrix; dbscan keeps distance plus neighborhood masks; ocsvm
    keeps the kernel matrix.  K-means/gmm/greedy stay linear in n.
    """
    model = ModelType.coerce(model)
    cell = 8 * n * n
    if model is ModelType.AFFINITY_PROPAGATION:
        return 3 * cell
    if model in (ModelType.HIERARCHICAL, ModelType.OPTICS):
        return cell
    if model is ModelType.DBSCAN:
        return cell + n * n
    if model is ModelType.ONE_CLASS_SVM:
        return cell
    if model is ModelType.KMEANS:
        return 8 * n * 10
    if model is ModelType.GMM:
        return 8 * n * 12
    return 64  # greedy: a running maximum


# ---------------------------------------------------------------------------
# Scenario execution
# ---------------------------------------------------------------------------

def _as_detector_map(
    detectors: Mapping[str, DriftDetector] | Iterable[DriftDetector] | DriftDetector,
) -> dict[str, DriftDetector]:
    if isinstance(detectors, DriftDetector):
        detectors = [detectors]
    if isinstance(detectors, Mapping):
        return dict(detectors)
    out: dict[str, DriftDetector] = {}
    for det in detectors:
        name = ModelType.coerce(det.model).value
        if name in out:
            raise ValueError(f"duplicate detector for model {name!r}; pass a mapping with unique names")
        out[name] = det
    return out


def training_window(
    batches: Sequence[Batch], truth: GroundTruth, n_batches: int
) -> list[int]:
    """Indices of the first n batches fully inside the fulfillment phase."""
    check_count(n_batches, "train_window_batches", minimum=1)
    start = end = None
    for i, b in enumerate(truth.boundaries):
        if b.kind is PhaseKind.FULFILLMENT:
            start = b.start_t
            end = truth.boundaries[i + 1].start_t if i + 1 < len(truth.boundaries) else truth.end_t
            break
    if start is None:
        raise ProtocolError("scenario has no fulfillment phase to train on")
    tiny = 1e-9
    idx = [
        i
        for i, b in enumerate(batches)
        if b.start_t >= start - tiny and b.end_t <= end + tiny
    ]
    if len(idx) < n_batches:
        raise ProtocolError(
            f"fulfillment phase holds only {len(idx)} full batches; "
            f"{n_batches} needed for the training window"
        )
    return idx[:n_batches]


def _clone(detector: DriftDetector) -> DriftDetector:
    return type(detector)(**detector.get_params())


def _run_scenario(
    spec: ScenarioSpec,
    detectors: Mapping[str, DriftDetector] | Iterable[DriftDetector] | DriftDetector,
    protocol: BenchProtocol,
) -> tuple[dict[str, list[RunRecord]], Series, GroundTruth, list[Batch]]:
    dets = _as_detector_map(detectors)
    series, truth = generate(spec)
    batches = batchify(series, protocol.batch_len, protocol.batch_len)
    train_idx = training_window(batches, truth, protocol.train_window_batches)
    train_values = concat_values(batches[i] for i in train_idx)
    eval_start = train_idx[-1] + 1

    by_model: dict[str, list[RunRecord]] = {}
    for name, proto in dets.items():
        det = _clone(proto)
        model = ModelType.coerce(det.model)
        _, fit_time, fit_bytes, fit_basis = _measure(lambda: det.fit(train_values))
        if fit_basis == "estimated":
            fit_bytes = memory_estimate(model, train_values.size)
        records: list[RunRecord] = []
        for j, bi in enumerate(range(eval_start, len(batches))):
            batch = batches[bi]
            extra_time, extra_bytes = (fit_time, fit_bytes) if j == 0 else (0.0, 0)
            if protocol.refit_every > 0 and j > 0 and j % protocol.refit_every == 0:
                lo = max(0, bi - protocol.train_window_batches)
                window = concat_values(batches[lo:bi])
                _, rt, rb, rb_basis = _measure(lambda: det.fit(window))
                if rb_basis == "estimated":
                    rb = memory_estimate(model, window.size)
                extra_time += rt
                extra_bytes += rb
            verdict, ev_time, ev_bytes, basis = _measure(lambda: det.evaluate(batch.values))
            if basis == "estimated":
                ev_bytes = memory_estimate(model, len(batch.values))
            records.append(
                RunRecord(
                    model=model,
                    batch_index=bi,
                    batch_start_t=batch.start_t,
                    batch_end_t=batch.end_t,
                    verdict=verdict,
                    truth=label_batch(batch, truth),
                    compute_time=extra_time + ev_time,
                    allocated_bytes=extra_bytes + ev_bytes,
                )
            )
        by_model[name] = records
    return by_model, series, truth, batches


def run_scenario(
    spec: ScenarioSpec,
    detectors: Mapping[str, DriftDetector] | Iterable[DriftDetector] | DriftDetector,
    protocol: BenchProtocol = BenchProtocol(),
) -> list[RunRecord]:
    """Run the sliding train/test protocol; one record per evaluated batch."""
    by_model, _, _, _ = _run_scenario(spec, detectors, protocol)
    return [rec for records in by_model.values() for rec in records]


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

def accuracy(records: Sequence[RunRecord]) -> float:
    """Fraction of records whose verdict matches the ground-truth label."""
    if not records:
        raise ValueError("accuracy of zero records is undefined")
    hits = sum(1 for r in records if r.verdict.drift == r.truth)
    return hits / len(records)


def false_positive_rate(records: Sequence[RunRecord]) -> float:
    """Drift fraction among truth-false records (0.0 when there are none)."""
    negatives = [r for r in records if not r.truth]
    if not negatives:
        return 0.0
    return sum(1 for r in negatives if r.verdict.drift) / len(negatives)


def detection_delay(records: Sequence[RunRecord], truth: GroundTruth) -> float:
    """Seconds from each drift onset to the first positive verdict at/after it.

    Averaged over onsets; +inf when any onset goes undetected.
    """
    onsets = truth.drift_onsets()
    if not onsets:
        raise ValueError("scenario has no drift phase")
    ordered = sorted(records, key=lambda r: r.batch_end_t)
    delays = []
    for t0 in onsets:
        delay = math.inf
        for rec in ordered:
            if rec.batch_end_t > t0 + 1e-9 and rec.verdict.drift:
                delay = rec.batch_end_t - t0
                break
        delays.append(delay)
    return sum(delays) / len(delays)


def compute_time_stats(records: Sequence[RunRecord]) -> ComputeTimeStats:
    """Mean and max wall time across records; errors on empty input."""
    if not records:
        raise ValueError("compute-time stats of zero records are undefined")
    times = [r.compute_time for r in records]
    return ComputeTimeStats(mean=sum(times) / len(times), max=max(times))


# ---------------------------------------------------------------------------
# Cross-model comparison
# ---------------------------------------------------------------------------

def compare_models(
    scenarios: Mapping[str, ScenarioSpec],
    detectors: Mapping[str, DriftDetector] | Iterable[DriftDetector],
    repetitions: int = 1,
    seed_base: int = 0,
    protocol: BenchProtocol = BenchProtocol(),
) -> BenchReport:
    """Run every (scenario, detector) pair across repetition seeds.

    Repetition r replaces each scenario's seed with seed_base + r, so every
    detector sees the same series within a repetition.  Accuracy, false
    positive rate, and detection delay are averaged per-run first and then
    across runs; compute time averages over all records; memory reports the
    peak.  Timeline rows (one per generated sample) are captured from the
    first scenario's first repetition for each model.
    """
    dets = _as_detector_map(detectors)
    check_count(repetitions, "repetitions", minimum=1)

    accs: dict[str, list[float]] = {m: [] for m in dets}
    fprs: dict[str, list[float]] = {m: [] for m in dets}
    delays: dict[str, list[float]] = {m: [] for m in dets}
    times: dict[str, list[float]] = {m: [] for m in dets}
    peaks: dict[str, int] = {m: 0 for m in dets}
    bases: dict[str, str] = {m: "measured" for m in dets}
    timelines: dict[str, list[tuple]] = {}

    for s_index, (scenario_name, spec) in enumerate(scenarios.items()):
        for rep in range(repetitions):
            seeded = spec.with_seed(seed_base + rep)
            by_model, series, truth, _ = _run_scenario(seeded, dets, protocol)
            has_drift_phase = bool(truth.drift_onsets())
            for name, records in by_model.items():
                accs[name].append(accuracy(records))
                fprs[name].append(false_positive_rate(records))
                if has_drift_phase:
                    delays[name].append(detection_delay(records, truth))
                times[name].extend(r.compute_time for r in records)
                run_peak = max(r.allocated_bytes for r in records)
                peaks[name] = max(peaks[name], run_peak)
                if tracemalloc is None:
                    bases[name] = "estimated"
                if s_index == 0 and rep == 0:
                    timelines[name] = _timeline_rows(series, truth, records)

    per_model = {
        name: ModelStats(
            accuracy=_mean(accs[name]),
            false_positive_rate=_mean(fprs[name]),
            avg_detection_delay=_mean(delays[name]) if delays[name] else math.inf,
            avg_compute_time=_mean(times[name]),
            peak_memory_bytes=peaks[name],
            memory_basis=bases[name],
        )
        for name in dets
    }

    rankings = {
        "accuracy": _ranked(per_model, key=lambda s: -s.accuracy),
        "false_positive_rate": _ranked(per_model, key=lambda s: s.false_positive_rate),
        "detection_delay": _ranked(per_model, key=lambda s: s.avg_detection_delay),
        "compute_time": _ranked(per_model, key=lambda s: s.avg_compute_time),
        "memory": _ranked(per_model, key=lambda s: s.peak_memory_bytes),
    }

    warnings = []
    if "dbscan" in per_model:
        for rival in ("affinity", "greedy"):
            if rival in per_model and per_model["dbscan"].accuracy < per_model[rival].accuracy:
                warnings.append(
                    f"calibration: dbscan accuracy {per_model['dbscan'].accuracy:.3f} "
                    f"fell below {rival} ({per_model[rival].accuracy:.3f})"
                )

    return BenchReport(
        scenarios={name: spec.to_dict() for name, spec in scenarios.items()},
        configs={name: _jsonable_params(det) for name, det in dets.items()},
        protocol={
            "train_window_batches": protocol.train_window_batches,
            "refit_every": protocol.refit_every,
            "batch_len": protocol.batch_len,
        },
        repetitions=repetitions,
        seed_base=seed_base,
        total_runs=len(scenarios) * repetitions * len(dets),
        per_model=per_model,
        rankings=rankings,
        calibration_warnings=warnings,
        timelines=timelines,
    )


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _ranked(per_model: Mapping[str, ModelStats], key) -> list[str]:
    return sorted(per_model, key=lambda name: (key(per_model[name]), name))


def _jsonable_params(det: DriftDetector) -> dict[str, Any]:
    out = {}
    for k, v in det.get_params().items():
        if isinstance(v, ModelType):
            v = v.value
        elif isinstance(v, float) and math.isinf(v):
            v = None
        out[k] = v
    return out


def _timeline_rows(
    series: Series, truth: GroundTruth, records: Sequence[RunRecord]
) -> list[tuple]:
    """One (t, value, truth, verdict) row per generated sample; verdict is
    empty for samples outside any evaluated batch."""
    spans = [(r.batch_start_t, r.batch_end_t, r.verdict.drift) for r in records]
    rows = []
    for sample in series.samples:
        verdict: int | None = None
        for lo, hi, drift in spans:
            if lo <= sample.t < hi:
                verdict = int(drift)
                break
        rows.append(
            (sample.t, sample.value, int(truth.is_degraded_at(sample.t)), verdict)
        )
    return rows


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------

def emit_report(report: BenchReport, sink: str | Path) -> list[Path]:
    """Write report.json, report.csv, and timeline_<model>.csv files."""
    out_dir = Path(sink)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []

    json_path = out_dir / "report.json"
    json_path.write_text(report.to_json() + "\n", encoding="utf-8")
    paths.append(json_path)

    csv_path = out_dir / "report.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "metric", "value"])
        for name, stats in report.per_model.items():
            writer.writerow([name, "accuracy", repr(stats.accuracy)])
            writer.writerow([name, "false_positive_rate", repr(stats.false_positive_rate)])
            writer.writerow([name, "avg_detection_delay", repr(stats.avg_detection_delay)])
            writer.writerow([name, "avg_compute_time", repr(stats.avg_compute_time)])
            writer.writerow([name, "peak_memory_bytes", stats.peak_memory_bytes])
            writer.writerow([name, "memory_basis", stats.memory_basis])
    paths.append(csv_path)

    for name, rows in report.timelines.items():
        tl_path = out_dir / f"timeline_{name}.csv"
        with tl_path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "value", "truth", "verdict"])
            for t, value, truth_flag, verdict in rows:
                writer.writerow([repr(t), repr(value), truth_flag, "" if verdict is None else verdict])
        paths.append(tl_path)
    return paths
