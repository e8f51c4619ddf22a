"""Deterministic repair of temporal rule violations.

One forward pass over the stops fixes everything: at each stop the stay is
extended to the minimum first (departure := arrival + min_stay), then the
outgoing leg is checked against its transit bounds using that updated
departure. A leg that is too short, overlapping, or too long gets its
arrival pinned to departure + t_min, which satisfies both bounds. Because
each stop's arrival is final before its stay is examined, a single pass
leaves no violations; the pass loop re-validates afterwards and repeats only
as a safety net.

The first stop's arrival anchors the schedule and is never moved; city order
is never changed. Legs without resolvable route data are skipped and
recorded so the caller knows which part of the output is unchecked.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .durations import DurationProvider
from .model import Itinerary, Timestamp
from .validation import (
    IssueKind,
    ValidationPolicy,
    resolve_segment_bounds,
    validate,
)

MAX_PASSES = 10


class NonConvergenceError(RuntimeError):
    """Issues survived the pass ceiling; indicates a logic bug, not bad input."""


class TraceMismatchError(Exception):
    """A trace was replayed against an input it was not produced from."""


class TimeField(Enum):
    ARRIVAL = "arrival"
    DEPARTURE = "departure"


@dataclass(frozen=True)
class Adjustment:
    """One timestamp change: which stop, which field, old -> new, and the
    rule that forced it."""

    stop_index: int
    field: TimeField
    old: Timestamp
    new: Timestamp
    reason: IssueKind

    def __post_init__(self):
        if self.new == self.old:
            raise ValueError(f"adjustment at stop {self.stop_index} changes nothing")

    def to_dict(self) -> dict:
        return {
            "stop_index": self.stop_index,
            "field": self.field.value,
            "old": self.old.text(),
            "new": self.new.text(),
            "reason": self.reason.value,
        }


@dataclass(frozen=True)
class CorrectionTrace:
    """Replayable audit log of a correction run."""

    adjustments: tuple[Adjustment, ...]
    passes: int
    skipped_segments: tuple[int, ...] = ()

    def __post_init__(self):
        if self.passes < 1:
            raise ValueError("a correction run makes at least one pass")

    def to_dict(self) -> dict:
        return {
            "adjustments": [adj.to_dict() for adj in self.adjustments],
            "passes": self.passes,
            "skipped_segments": list(self.skipped_segments),
        }


def _adjustment_pass(
    arrivals: list[Timestamp],
    departures: list[Timestamp],
    bounds: list,
    policy: ValidationPolicy,
    out: list[Adjustment],
) -> None:
    n = len(arrivals)
    for i in range(n):
        stay = departures[i] - arrivals[i]
        if stay < policy.min_stay_minutes:
            new = arrivals[i] + policy.min_stay_minutes
            out.append(Adjustment(i, TimeField.DEPARTURE, departures[i], new, IssueKind.STAY_TOO_SHORT))
            departures[i] = new
        if i < n - 1 and bounds[i] is not None:
            gap = arrivals[i + 1] - departures[i]
            if gap < bounds[i].t_min:
                reason = IssueKind.OVERLAP if gap < 0 else IssueKind.TRANSIT_TOO_SHORT
                new = departures[i] + bounds[i].t_min
                out.append(Adjustment(i + 1, TimeField.ARRIVAL, arrivals[i + 1], new, reason))
                arrivals[i + 1] = new
            elif gap > bounds[i].t_max:
                new = departures[i] + bounds[i].t_min
                out.append(
                    Adjustment(i + 1, TimeField.ARRIVAL, arrivals[i + 1], new, IssueKind.TRANSIT_TOO_LONG)
                )
                arrivals[i + 1] = new


def _rebuild(itin: Itinerary, arrivals: list[Timestamp], departures: list[Timestamp]) -> Itinerary:
    return Itinerary(
        tuple(
            replace(stop, arrival=arrivals[i], departure=departures[i])
            for i, stop in enumerate(itin.stops)
        )
    )


def correct(
    itin: Itinerary, provider: DurationProvider, policy: ValidationPolicy = ValidationPolicy()
) -> tuple[Itinerary, CorrectionTrace]:
    """Repair every detected violation by shifting timestamps forward.

    Returns the corrected itinerary plus the trace. Raises ProviderError in
    strict mode if a route cannot be resolved, and NonConvergenceError if
    issues somehow survive MAX_PASSES passes.
    """
    bounds, skipped, _ = resolve_segment_bounds(itin, provider, policy)
    arrivals = [stop.arrival for stop in itin.stops]
    departures = [stop.departure for stop in itin.stops]
    adjustments: list[Adjustment] = []
    passes = 0
    while True:
        _adjustment_pass(arrivals, departures, bounds, policy, adjustments)
        passes += 1
        candidate = _rebuild(itin, arrivals, departures)
        report = validate(candidate, provider, policy)
        correctable = [i for i in report.issues if i.kind is not IssueKind.ROUTE_DATA_UNAVAILABLE]
        if not correctable:
            break
        if passes >= MAX_PASSES:
            raise NonConvergenceError(
                f"{len(correctable)} issue(s) remain after {passes} passes: {correctable}"
            )
    trace = CorrectionTrace(
        adjustments=tuple(adjustments), passes=passes, skipped_segments=tuple(skipped)
    )
    return candidate, trace


def replay_trace(itin: Itinerary, trace: CorrectionTrace) -> Itinerary:
    """Re-apply a trace to its original input, reproducing correct()'s output.

    Each adjustment asserts the value it is about to overwrite; a mismatch
    means the input is not the one the trace came from.
    """
    stops = list(itin.stops)
    for adj in trace.adjustments:
        stop = stops[adj.stop_index]
        current = stop.arrival if adj.field is TimeField.ARRIVAL else stop.departure
        if current != adj.old:
            raise TraceMismatchError(
                f"stop {adj.stop_index} {adj.field.value} is {current}, trace expected {adj.old}"
            )
        if adj.field is TimeField.ARRIVAL:
            stops[adj.stop_index] = replace(stop, arrival=adj.new)
        else:
            stops[adj.stop_index] = replace(stop, departure=adj.new)
    return Itinerary(tuple(stops))
