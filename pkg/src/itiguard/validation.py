"""Temporal validation rules for itineraries.

Four rules, checked per stop and per leg:
  - no overlap: a leg's travel time must not be negative;
  - minimum transit: a leg must allow at least t_min = flight + buffer;
  - maximum transit: a leg must not exceed t_max = multiplier x t_min;
  - minimum stay: every stop must last at least the policy minimum (48h).

Violations are strict: exact equality with a bound passes, so an itinerary
whose times sit exactly on t_min or the minimum stay is valid. Legs whose
route duration cannot be resolved are listed as unverifiable and excluded
from the verdict in non-strict mode; a leg between two identical airports
is structurally broken and is reported as an issue instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .durations import DurationProvider, RoutePair, RouteUnavailable, TransitBounds
from .model import Itinerary, Segment, Stop, segments, stay_duration


class IssueKind(Enum):
    OVERLAP = "overlap"
    TRANSIT_TOO_SHORT = "transit_too_short"
    TRANSIT_TOO_LONG = "transit_too_long"
    STAY_TOO_SHORT = "stay_too_short"
    ROUTE_DATA_UNAVAILABLE = "route_data_unavailable"


# Kinds that mark a flight leg (not a stay) as invalid.
SEGMENT_ISSUE_KINDS = frozenset(
    {IssueKind.OVERLAP, IssueKind.TRANSIT_TOO_SHORT, IssueKind.TRANSIT_TOO_LONG}
)


class ProviderError(Exception):
    """Strict mode: a route duration could not be resolved."""


@dataclass(frozen=True)
class Issue:
    """One rule violation.

    subject is a stop index for STAY_TOO_SHORT and a segment index otherwise;
    observed/required are minute durations, absent for ROUTE_DATA_UNAVAILABLE.
    """

    kind: IssueKind
    subject: int
    observed: int | None = None
    required: int | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "subject": self.subject,
            "observed": self.observed,
            "required": self.required,
        }


@dataclass(frozen=True)
class ValidationPolicy:
    min_stay_minutes: int = 48 * 60
    buffer_minutes: int = 4 * 60
    max_multiplier: float = 2.0
    strict: bool = False

    def __post_init__(self):
        if self.min_stay_minutes <= 0:
            raise ValueError("min_stay must be positive")
        if self.buffer_minutes < 0:
            raise ValueError("buffer must be >= 0")
        if self.max_multiplier <= 1:
            raise ValueError("max_multiplier must be > 1")


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...] = ()
    unverifiable_segments: tuple[int, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.issues

    @property
    def verdict(self) -> str:
        return "valid" if self.is_valid else "invalid"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "issues": [issue.to_dict() for issue in self.issues],
            "unverifiable_segments": list(self.unverifiable_segments),
        }


def check_stay(stop: Stop, policy: ValidationPolicy, index: int = 0) -> Issue | None:
    """Minimum-stay rule; a negative stay (inverted times) is subsumed here."""
    stay = stay_duration(stop)
    if stay < policy.min_stay_minutes:
        return Issue(IssueKind.STAY_TOO_SHORT, index, observed=stay, required=policy.min_stay_minutes)
    return None


def check_segment(seg: Segment, bounds: TransitBounds) -> Issue | None:
    """Overlap / minimum-transit / maximum-transit rules for one leg."""
    if seg.travel_time < 0:
        return Issue(IssueKind.OVERLAP, seg.from_index, observed=seg.travel_time, required=bounds.t_min)
    if seg.travel_time < bounds.t_min:
        return Issue(
            IssueKind.TRANSIT_TOO_SHORT, seg.from_index, observed=seg.travel_time, required=bounds.t_min
        )
    if seg.travel_time > bounds.t_max:
        return Issue(
            IssueKind.TRANSIT_TOO_LONG, seg.from_index, observed=seg.travel_time, required=bounds.t_max
        )
    return None


def resolve_segment_bounds(
    itin: Itinerary, provider: DurationProvider, policy: ValidationPolicy
) -> tuple[list[TransitBounds | None], list[int], list[Issue]]:
    """Resolve per-segment transit bounds.

    Returns (bounds, unverifiable_indices, structural_issues). bounds[i] is
    None when segment i cannot be checked. A same-airport leg yields a
    ROUTE_DATA_UNAVAILABLE issue; a provider miss yields only an
    unverifiable index (or ProviderError in strict mode).
    """
    bounds: list[TransitBounds | None] = []
    unverifiable: list[int] = []
    structural: list[Issue] = []
    for i in range(len(itin.stops) - 1):
        origin = itin.stops[i].airport
        dest = itin.stops[i + 1].airport
        if origin == dest:
            bounds.append(None)
            unverifiable.append(i)
            structural.append(Issue(IssueKind.ROUTE_DATA_UNAVAILABLE, i))
            continue
        try:
            duration = provider.route_duration(RoutePair(origin, dest))
        except RouteUnavailable as err:
            if policy.strict:
                raise ProviderError(str(err)) from err
            bounds.append(None)
            unverifiable.append(i)
            continue
        bounds.append(
            TransitBounds.from_flight(duration.minutes, policy.buffer_minutes, policy.max_multiplier)
        )
    return bounds, unverifiable, structural


def validate(
    itin: Itinerary, provider: DurationProvider, policy: ValidationPolicy = ValidationPolicy()
) -> ValidationReport:
    """Apply every rule to every stop and leg, in itinerary order.

    n stops produce n stay checks and n-1 segment checks; the verdict is
    valid iff no issue was found.
    """
    bounds, unverifiable, structural = resolve_segment_bounds(itin, provider, policy)
    structural_by_segment = {issue.subject: issue for issue in structural}
    segs = segments(itin)
    issues: list[Issue] = []
    for i, stop in enumerate(itin.stops):
        issue = check_stay(stop, policy, index=i)
        if issue:
            issues.append(issue)
        if i < len(segs):
            if bounds[i] is not None:
                issue = check_segment(segs[i], bounds[i])
                if issue:
                    issues.append(issue)
            elif i in structural_by_segment:
                issues.append(structural_by_segment[i])
    return ValidationReport(issues=tuple(issues), unverifiable_segments=tuple(unverifiable))


def count_issue_stats(report: ValidationReport) -> tuple[int, int]:
    """(total issue count, invalid segment count); stays count as issues but
    not as invalid segments."""
    invalid_segments = sum(1 for issue in report.issues if issue.kind in SEGMENT_ISSUE_KINDS)
    return len(report.issues), invalid_segments
