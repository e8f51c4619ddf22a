"""Shared test helpers: seeded random corpora and independent oracles.

The oracles re-derive every rule with plain arithmetic on purpose. Tests
that compare package output against them are cross-checking two separate
implementations, so nothing here may call into itiguard.validation logic
beyond constructing the Issue values used for comparison.
"""

from __future__ import annotations

import random
import string

from itiguard import AirportCode, FixtureProvider, Itinerary, Stop, Timestamp
from itiguard.validation import Issue, IssueKind, ValidationPolicy

BASE = Timestamp.parse("2025-06-01 00:00")
WINDOW_MINUTES = 30 * 24 * 60

GOLDEN_TABLE = {("SYD", "FRA"): 1020, ("FRA", "CAI"): 60, ("CAI", "CMN"): 60}


def random_airport_codes(rng: random.Random, n: int) -> list[str]:
    """n codes with no two consecutive equal; same-airport legs cannot be
    route-checked and get exercised by dedicated tests instead."""
    codes: list[str] = []
    while len(codes) < n:
        code = "".join(rng.choice(string.ascii_uppercase) for _ in range(3))
        if codes and code == codes[-1]:
            continue
        codes.append(code)
    return codes


def random_itinerary(
    rng: random.Random, *, min_stops: int = 2, max_stops: int = 8
) -> tuple[Itinerary, FixtureProvider, dict[tuple[str, str], int]]:
    """One arbitrary itinerary plus a fixture provider covering its legs.

    Timestamps are uniform over a 30-day window with no ordering imposed, so
    overlaps, inverted stays, and absurd gaps all occur. Flight durations
    are uniform in [1h, 20h]. The raw duration table is returned too, keyed
    by sorted airport pair, for oracle use.
    """
    n = rng.randint(min_stops, max_stops)
    codes = random_airport_codes(rng, n)
    stops = []
    for code in codes:
        arrival = BASE + rng.randint(0, WINDOW_MINUTES)
        departure = BASE + rng.randint(0, WINDOW_MINUTES)
        stops.append(Stop(f"City {code}", AirportCode(code), arrival, departure))
    table: dict[tuple[str, str], int] = {}
    for a, b in zip(codes, codes[1:]):
        key = (min(a, b), max(a, b))
        table.setdefault(key, rng.randint(60, 1200))
    return Itinerary(tuple(stops)), FixtureProvider(table), table


def brute_force_issues(
    itin: Itinerary, table: dict[tuple[str, str], int], policy: ValidationPolicy
) -> list[Issue]:
    """Independent rule check: explicit loops and formulas only.

    Mirrors the documented reporting order (stop i's stay, then segment i)
    and the documented semantics: equality with a bound passes; a missing
    route is silently unverifiable; a same-airport leg is an issue.
    """
    issues: list[Issue] = []
    n = len(itin.stops)
    for i in range(n):
        stop = itin.stops[i]
        stay = stop.departure - stop.arrival
        if stay < policy.min_stay_minutes:
            issues.append(
                Issue(IssueKind.STAY_TOO_SHORT, i, observed=stay, required=policy.min_stay_minutes)
            )
        if i < n - 1:
            nxt = itin.stops[i + 1]
            a, b = str(stop.airport), str(nxt.airport)
            if a == b:
                issues.append(Issue(IssueKind.ROUTE_DATA_UNAVAILABLE, i))
                continue
            flight = table.get((min(a, b), max(a, b)))
            if flight is None:
                continue
            t_min = flight + policy.buffer_minutes
            t_max = int(t_min * policy.max_multiplier)
            gap = nxt.arrival - stop.departure
            if gap < 0:
                issues.append(Issue(IssueKind.OVERLAP, i, observed=gap, required=t_min))
            elif gap < t_min:
                issues.append(Issue(IssueKind.TRANSIT_TOO_SHORT, i, observed=gap, required=t_min))
            elif gap > t_max:
                issues.append(Issue(IssueKind.TRANSIT_TOO_LONG, i, observed=gap, required=t_max))
    return issues
