"""Throughput telemetry: samples, series, CSV ingestion, and batching.

A series is an ordered run of (seconds, kb/s) measurements.  Detectors never
see a series directly; they consume :class:`Batch` windows cut from it.  All
types here are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import IO, Iterable

import numpy as np

from .validation import check_positive

__all__ = [
    "TelemetryError",
    "ThroughputSample",
    "Series",
    "Batch",
    "BatchStats",
    "ingest_csv",
    "render_csv",
    "batchify",
    "batch_stats",
]

CSV_HEADER = "t,kbps"


class TelemetryError(ValueError):
    """Malformed or inconsistent telemetry input."""


@dataclass(frozen=True, slots=True)
class ThroughputSample:
    """One ingress-throughput measurement: seconds since series start, kb/s."""

    t: float
    value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "value", float(self.value))
        if not math.isfinite(self.t) or self.t < 0:
            raise TelemetryError(f"sample time must be finite and >= 0, got {self.t}")
        if not math.isfinite(self.value) or self.value < 0:
            raise TelemetryError(f"throughput must be finite and >= 0, got {self.value}")


@dataclass(frozen=True)
class Series:
    """An ordered, strictly increasing-in-time run of throughput samples."""

    samples: tuple[ThroughputSample, ...]
    meta: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", tuple(self.samples))
        if not self.samples:
            raise TelemetryError("series must contain at least one sample")
        times = [s.t for s in self.samples]
        for prev, cur in zip(times, times[1:]):
            if cur <= prev:
                raise TelemetryError(
                    f"timestamps must strictly increase ({prev} then {cur})"
                )

    def __len__(self) -> int:
        return len(self.samples)

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def values(self) -> np.ndarray:
        return np.array([s.value for s in self.samples])


@dataclass(frozen=True)
class Batch:
    """A contiguous window of throughput values covering [start_t, end_t)."""

    start_t: float
    end_t: float
    values: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.start_t < self.end_t:
            raise TelemetryError(f"batch needs start_t < end_t, got [{self.start_t}, {self.end_t})")
        if not self.values:
            raise TelemetryError("batch must contain at least one value")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.start_t + self.end_t)


@dataclass(frozen=True)
class BatchStats:
    mean: float
    std: float
    min: float
    max: float


def ingest_csv(source: IO[bytes] | IO[str], meta: str = "") -> Series:
    """Parse `t_seconds,throughput_kbps` lines into a series.

    A single leading header line is skipped when its first column is not
    numeric.  Raises :class:`TelemetryError` with the offending line number on
    malformed records, non-monotonic timestamps, negative values, or empty
    input.
    """
    samples: list[ThroughputSample] = []
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise TelemetryError(f"line {lineno}: not valid UTF-8 ({exc})") from exc
        line = raw.strip()
        if not line:
            continue
        fields = line.split(",")
        if lineno == 1 and not _is_number(fields[0]):
            continue  # header
        if len(fields) != 2:
            raise TelemetryError(f"line {lineno}: expected 2 comma-separated fields, got {len(fields)}")
        try:
            t, value = float(fields[0]), float(fields[1])
        except ValueError as exc:
            raise TelemetryError(f"line {lineno}: {exc}") from exc
        try:
            sample = ThroughputSample(t, value)
        except TelemetryError as exc:
            raise TelemetryError(f"line {lineno}: {exc}") from exc
        if samples and sample.t <= samples[-1].t:
            raise TelemetryError(
                f"line {lineno}: timestamp {sample.t} does not advance past {samples[-1].t}"
            )
        samples.append(sample)
    if not samples:
        raise TelemetryError("no samples found in input")
    return Series(tuple(samples), meta=meta)


def render_csv(series: Series, sink: IO[str], *, header: bool = True) -> None:
    """Write a series in the CSV wire format (full float precision)."""
    if header:
        sink.write(CSV_HEADER + "\n")
    for s in series.samples:
        sink.write(f"{s.t!r},{s.value!r}\n")


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def batchify(series: Series, batch_len: float = 9.0, stride: float = 9.0) -> list[Batch]:
    """Cut a series into windows [i*stride, i*stride + batch_len).

    Windows whose full span does not fit inside the series (the series end is
    the last timestamp plus the median sample gap) are dropped, as are windows
    that contain no samples.  Overlap (stride < batch_len) and gaps
    (stride > batch_len) are both allowed.
    """
    batch_len = check_positive(batch_len, "batch_len")
    stride = check_positive(stride, "stride")
    times = series.times()
    values = series.values()
    if len(times) >= 2:
        span_end = float(times[-1] + np.median(np.diff(times)))
    else:
        span_end = float(times[-1])
    slack = 1e-9 * max(1.0, batch_len)
    batches: list[Batch] = []
    i = 0
    while True:
        start = i * stride
        end = start + batch_len
        if end > span_end + slack:
            break
        lo = int(np.searchsorted(times, start, side="left"))
        hi = int(np.searchsorted(times, end, side="left"))
        if hi > lo:
            batches.append(Batch(start, end, tuple(values[lo:hi])))
        i += 1
    return batches


def batch_stats(batch: Batch) -> BatchStats:
    """Mean, population standard deviation, min, and max of a batch."""
    arr = np.asarray(batch.values, dtype=float)
    return BatchStats(
        mean=float(arr.mean()),
        std=float(arr.std()),  # population normalization: lone samples get std 0
        min=float(arr.min()),
        max=float(arr.max()),
    )


def concat_values(batches: Iterable[Batch]) -> np.ndarray:
    """Concatenate batch values in order (training-window helper)."""
    chunks = [np.asarray(b.values, dtype=float) for b in batches]
    if not chunks:
        raise TelemetryError("cannot concatenate zero batches")
    return np.concatenate(chunks)
