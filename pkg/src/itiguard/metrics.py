"""Corpus-level statistics over validation reports.

Records pair a validation report with the model tag and city count it came
from; aggregate() folds them into per-(model, cities) rows: the share of
itineraries with at least one issue, the share of invalid segments, and the
mean issue count. Segments whose route data could not be resolved are
excluded from the segment percentage on both sides of the division.

"Invalid segments" counts transit-kind issues only (overlap, too short, too
long). Stay violations sit on stops, not segments; pass include_stays=True
to fold them in, which widens the denominator to stays + transits.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .validation import SEGMENT_ISSUE_KINDS, IssueKind, ValidationReport

TABLE_HEADERS = ("Model", "Cities", "Invalid Itin.", "Invalid Seg.", "Avg Issues/Itn.")


class EmptyGroupError(ValueError):
    """Aggregation was asked to summarize zero records."""


@dataclass(frozen=True)
class CorpusRecord:
    """One validated itinerary's report, tagged with its origin."""

    model_tag: str
    num_cities: int
    report: ValidationReport

    def __post_init__(self):
        if self.num_cities < 1:
            raise ValueError(f"num_cities must be positive, got {self.num_cities}")


@dataclass(frozen=True)
class CorpusStats:
    """Aggregate row for one (model_tag, num_cities) group."""

    model_tag: str
    num_cities: int
    total: int
    invalid_itineraries_pct: float
    invalid_segments_pct: float
    avg_issues_per_itinerary: float
    issue_count: int
    segment_issue_count: int
    unverifiable_count: int


@dataclass(frozen=True)
class ManifestEntry:
    """One corpus file: where it is and which group it belongs to."""

    file: str
    model_tag: str
    num_cities: int


def load_manifest(path: str | Path) -> list[ManifestEntry]:
    """Read a corpus manifest: a JSON array of {file, model_tag, num_cities}."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, list):
        raise ValueError(f"manifest must be a JSON array, got {type(raw).__name__}")
    entries = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ValueError(f"manifest entry {i} is not an object")
        try:
            entries.append(
                ManifestEntry(
                    file=item["file"],
                    model_tag=item["model_tag"],
                    num_cities=int(item["num_cities"]),
                )
            )
        except KeyError as err:
            raise ValueError(f"manifest entry {i} is missing key {err}") from None
    return entries


def _issue_counts(report: ValidationReport, include_stays: bool) -> tuple[int, int]:
    """(all issues, issues that count as invalid segments)."""
    countable = set(SEGMENT_ISSUE_KINDS)
    if include_stays:
        countable.add(IssueKind.STAY_TOO_SHORT)
    invalid = sum(1 for issue in report.issues if issue.kind in countable)
    return len(report.issues), invalid


def _stats_for_group(
    model_tag: str, num_cities: int, reports: list[ValidationReport], include_stays: bool
) -> CorpusStats:
    if not reports:
        raise EmptyGroupError(f"no records for group ({model_tag}, {num_cities})")
    total = len(reports)
    issue_total = 0
    segment_issue_total = 0
    invalid_itineraries = 0
    unverifiable_total = 0
    for report in reports:
        issues, segment_issues = _issue_counts(report, include_stays)
        issue_total += issues
        segment_issue_total += segment_issues
        if issues:
            invalid_itineraries += 1
        unverifiable_total += len(report.unverifiable_segments)
    slots_per_itinerary = num_cities - 1
    if include_stays:
        slots_per_itinerary += num_cities
    denominator = total * slots_per_itinerary - unverifiable_total
    segments_pct = 100.0 * segment_issue_total / denominator if denominator > 0 else 0.0
    return CorpusStats(
        model_tag=model_tag,
        num_cities=num_cities,
        total=total,
        invalid_itineraries_pct=100.0 * invalid_itineraries / total,
        invalid_segments_pct=segments_pct,
        avg_issues_per_itinerary=issue_total / total,
        issue_count=issue_total,
        segment_issue_count=segment_issue_total,
        unverifiable_count=unverifiable_total,
    )


def aggregate(records: list[CorpusRecord], *, include_stays: bool = False) -> list[CorpusStats]:
    """Fold records into one CorpusStats per (model_tag, num_cities) group.

    Groups come back sorted by tag then city count. Raises EmptyGroupError
    when there is nothing to aggregate.
    """
    if not records:
        raise EmptyGroupError("no records to aggregate")
    groups: dict[tuple[str, int], list[ValidationReport]] = {}
    for record in records:
        groups.setdefault((record.model_tag, record.num_cities), []).append(record.report)
    return [
        _stats_for_group(tag, cities, reports, include_stays)
        for (tag, cities), reports in sorted(groups.items())
    ]


def _stat_cells(stats: CorpusStats) -> tuple[str, ...]:
    return (
        stats.model_tag,
        str(stats.num_cities),
        f"{stats.invalid_itineraries_pct:.2f}%",
        f"{stats.invalid_segments_pct:.2f}%",
        f"{stats.avg_issues_per_itinerary:.2f}",
    )


def render_stats(stats: list[CorpusStats], format: str = "table") -> str:
    """Render rows as an aligned text table or CSV.

    CSV carries the same numbers without the % sign so it reparses cleanly.
    """
    if format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(TABLE_HEADERS)
        for row in stats:
            writer.writerow(
                (
                    row.model_tag,
                    row.num_cities,
                    f"{row.invalid_itineraries_pct:.2f}",
                    f"{row.invalid_segments_pct:.2f}",
                    f"{row.avg_issues_per_itinerary:.2f}",
                )
            )
        return buffer.getvalue()
    if format != "table":
        raise ValueError(f"unknown format {format!r}, expected 'table' or 'csv'")
    rows = [TABLE_HEADERS] + [_stat_cells(s) for s in stats]
    widths = [max(len(row[col]) for row in rows) for col in range(len(TABLE_HEADERS))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"


def failure_mode_breakdown(records: list[CorpusRecord]) -> dict[str, Counter]:
    """Tally issue kinds per model tag; distinguishes under- from
    over-estimation of travel time across a corpus."""
    breakdown: dict[str, Counter] = {}
    for record in records:
        counter = breakdown.setdefault(record.model_tag, Counter())
        for issue in record.report.issues:
            counter[issue.kind] += 1
    return breakdown
