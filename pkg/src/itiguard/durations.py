"""Flight-duration providers and transit-bound derivation.

A provider maps a directed airport pair to a minimum flight duration.
Implementations: a deterministic fixture table, a great-circle estimator,
and a remote HTTP client with bounded retries. CachedProvider layers an
in-memory table plus an optional on-disk file over any of them so repeated
routes never trigger a second fetch.

Transit bounds: the minimum feasible door-to-door time for a leg is the
flight duration plus a fixed airport-logistics buffer (default 4h); the
maximum reasonable time is twice that minimum.
"""

from __future__ import annotations

import json
import logging
import math
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Protocol

import requests

from .model import AirportCode, Timestamp

log = logging.getLogger(__name__)

MAX_FLIGHT_MINUTES = 48 * 60  # sanity bound, no commercial flight exceeds 48h
DEFAULT_BUFFER_MINUTES = 4 * 60
DEFAULT_MAX_RETRIES = 3
DEFAULT_RETRY_DELAY_SECONDS = 1.0
API_KEY_ENV = "AERODATABOX_API_KEY"

EARTH_RADIUS_KM = 6371.0
CRUISE_SPEED_KMH = 800.0
GROUND_OVERHEAD_MINUTES = 30


class RouteUnavailable(Exception):
    """No duration could be obtained for a route after all attempts."""

    def __init__(self, route: "RoutePair | None", attempts: int, reason: str):
        self.route = route
        self.attempts = attempts
        self.reason = reason
        where = f" for {route}" if route else ""
        super().__init__(f"no flight duration{where} after {attempts} attempt(s): {reason}")


class TransportError(Exception):
    """A single remote fetch failed (network error or non-2xx status)."""


class PayloadError(ValueError):
    """The remote response body could not be used."""


class MalformedPayloadError(PayloadError):
    pass


class NullDurationError(PayloadError):
    """The service answered but carried a null duration."""


@dataclass(frozen=True, order=True)
class RoutePair:
    """Directed airport pair; same-airport pairs are rejected upstream."""

    origin: AirportCode
    destination: AirportCode

    def __post_init__(self):
        if self.origin == self.destination:
            raise ValueError(f"route origin and destination are both {self.origin}")

    def __str__(self) -> str:
        return f"{self.origin}->{self.destination}"


@dataclass(frozen=True)
class FlightDuration:
    """Minimum flight duration in minutes, 0 < minutes <= 48h."""

    minutes: int

    def __post_init__(self):
        if not isinstance(self.minutes, int) or not 0 < self.minutes <= MAX_FLIGHT_MINUTES:
            raise ValueError(f"implausible flight duration: {self.minutes!r} minutes")


@dataclass(frozen=True)
class TransitBounds:
    """Allowed [t_min, t_max] window for a leg's travel time, in minutes."""

    t_min: int
    t_max: int

    @classmethod
    def from_flight(
        cls, flight_minutes: int, buffer_minutes: int, multiplier: float = 2.0
    ) -> "TransitBounds":
        t_min = flight_minutes + buffer_minutes
        return cls(t_min=t_min, t_max=int(t_min * multiplier))


@dataclass
class ProviderConfig:
    buffer_minutes: int = DEFAULT_BUFFER_MINUTES
    max_retries: int = DEFAULT_MAX_RETRIES
    cache_path: Path | None = None
    strict: bool = False

    def __post_init__(self):
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")
        if self.buffer_minutes < 0:
            raise ValueError("buffer must be >= 0")


@dataclass(frozen=True)
class CacheEntry:
    route: RoutePair
    duration: FlightDuration
    fetched_at: Timestamp | None = None  # in-memory only; not persisted


class DurationProvider(Protocol):
    def route_duration(self, route: RoutePair) -> FlightDuration:
        """Return the minimum flight duration, or raise RouteUnavailable."""


class FixtureProvider:
    """Deterministic provider backed by a {(origin, dest): minutes} table.

    Lookups are direction-symmetric by default: (A, B) falls back to (B, A).
    """

    def __init__(self, table: Mapping[tuple[str, str], int], symmetric: bool = True):
        self._table = {(str(o), str(d)): int(m) for (o, d), m in table.items()}
        self._symmetric = symmetric

    @classmethod
    def from_file(cls, path: str | Path, symmetric: bool = True) -> "FixtureProvider":
        cache = load_cache(path)
        table = {
            (str(entry.route.origin), str(entry.route.destination)): entry.duration.minutes
            for entry in cache.entries()
        }
        return cls(table, symmetric=symmetric)

    def route_duration(self, route: RoutePair) -> FlightDuration:
        key = (str(route.origin), str(route.destination))
        minutes = self._table.get(key)
        if minutes is None and self._symmetric:
            minutes = self._table.get((key[1], key[0]))
        if minutes is None:
            raise RouteUnavailable(route, attempts=1, reason="no fixture duration for route")
        return FlightDuration(minutes)


def haversine_km(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance on a sphere of radius 6371 km."""
    for lat, lon in ((lat1, lon1), (lat2, lon2)):
        if abs(lat) > 90 or abs(lon) > 180:
            raise ValueError(f"invalid coordinates: ({lat}, {lon})")
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp = math.radians(lat2 - lat1)
    dl = math.radians(lon2 - lon1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(math.sqrt(a))


def estimate_duration_great_circle(
    origin_coords: tuple[float, float], dest_coords: tuple[float, float]
) -> FlightDuration:
    """Estimate flight time from geometry: distance at a 800 km/h cruise plus
    a 30-minute fixed overhead, rounded up to a whole minute."""
    distance = haversine_km(*origin_coords, *dest_coords)
    minutes = math.ceil(distance / CRUISE_SPEED_KMH * 60.0 + GROUND_OVERHEAD_MINUTES)
    return FlightDuration(minutes)


class GreatCircleProvider:
    """Offline provider estimating durations from airport coordinates."""

    def __init__(self, coords: Mapping[str, tuple[float, float]]):
        self._coords = coords

    def route_duration(self, route: RoutePair) -> FlightDuration:
        try:
            origin = self._coords[str(route.origin)]
            dest = self._coords[str(route.destination)]
        except KeyError as err:
            raise RouteUnavailable(
                route, attempts=1, reason=f"no coordinates for airport {err.args[0]}"
            ) from None
        return estimate_duration_great_circle(origin, dest)


def parse_duration_payload(body: bytes | str) -> FlightDuration:
    """Extract hours+minutes from a remote JSON response.

    Accepts either a flat {"hours": H, "minutes": M} object or one nesting
    those fields under a "duration" key. A null duration raises
    NullDurationError; everything else unusable raises MalformedPayloadError.
    """
    try:
        doc = json.loads(body)
    except (json.JSONDecodeError, UnicodeDecodeError) as err:
        raise MalformedPayloadError(f"payload is not JSON: {err}") from None
    if not isinstance(doc, dict):
        raise MalformedPayloadError("payload is not a JSON object")
    value = doc
    if "duration" in doc:
        value = doc["duration"]
        if value is None:
            raise NullDurationError("duration field is null")
        if not isinstance(value, dict):
            raise MalformedPayloadError("duration field is not an object")
    if "hours" not in value and "minutes" not in value:
        raise MalformedPayloadError("payload carries no hours/minutes fields")
    total = 0
    for field, scale in (("hours", 60), ("minutes", 1)):
        raw = value.get(field, 0)
        if isinstance(raw, bool) or not isinstance(raw, int) or raw < 0:
            raise MalformedPayloadError(f"bad {field} value: {raw!r}")
        total += raw * scale
    if not 0 < total <= MAX_FLIGHT_MINUTES:
        raise MalformedPayloadError(f"implausible duration: {total} minutes")
    return FlightDuration(total)


# fetch(url, headers) -> raw response body; raises TransportError on failure
FetchFn = Callable[[str, Mapping[str, str]], bytes]


class RemoteDurationClient:
    """HTTP client for a flight-times service, with bounded retries.

    GET {base_url}/{origin}/{destination}; the API key (X-Api-Key header)
    comes from the AERODATABOX_API_KEY environment variable unless given.
    A failed fetch or unusable payload is retried after retry_delay seconds,
    up to max_retries total attempts, then RouteUnavailable is raised.
    """

    def __init__(
        self,
        base_url: str,
        api_key: str | None = None,
        *,
        max_retries: int = DEFAULT_MAX_RETRIES,
        retry_delay: float = DEFAULT_RETRY_DELAY_SECONDS,
        timeout: float = 30.0,
        fetch: FetchFn | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if max_retries < 1:
            raise ValueError("max_retries must be >= 1")
        self._base_url = base_url.rstrip("/")
        self._api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self._max_retries = max_retries
        self._retry_delay = retry_delay
        self._timeout = timeout
        self._fetch = fetch or self._http_fetch
        self._sleep = sleep

    def _http_fetch(self, url: str, headers: Mapping[str, str]) -> bytes:
        try:
            response = requests.get(url, headers=dict(headers), timeout=self._timeout)
        except requests.RequestException as err:
            raise TransportError(str(err)) from err
        if not 200 <= response.status_code < 300:
            raise TransportError(f"HTTP {response.status_code}")
        return response.content

    def route_duration(self, route: RoutePair) -> FlightDuration:
        url = f"{self._base_url}/{route.origin}/{route.destination}"
        headers = {"X-Api-Key": self._api_key} if self._api_key else {}
        last_reason = "no attempts made"
        for attempt in range(1, self._max_retries + 1):
            try:
                return parse_duration_payload(self._fetch(url, headers))
            except (TransportError, PayloadError) as err:
                last_reason = str(err)
                log.debug("fetch %s attempt %d failed: %s", route, attempt, last_reason)
                if attempt < self._max_retries:
                    self._sleep(self._retry_delay)
        raise RouteUnavailable(route, attempts=self._max_retries, reason=last_reason)


class DurationCache:
    """Route -> duration map persisted as 'ORIGIN DEST minutes' lines."""

    def __init__(self, entries: dict[RoutePair, CacheEntry] | None = None):
        self._entries: dict[RoutePair, CacheEntry] = dict(entries or {})

    def get(self, route: RoutePair) -> CacheEntry | None:
        return self._entries.get(route)

    def put(self, route: RoutePair, duration: FlightDuration, fetched_at: Timestamp | None = None):
        self._entries[route] = CacheEntry(route, duration, fetched_at)

    def entries(self) -> list[CacheEntry]:
        return list(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, route: RoutePair) -> bool:
        return route in self._entries


def load_cache(path: str | Path) -> DurationCache:
    """Load a cache file; a missing file is an empty cache, corrupt lines are
    skipped with a warning, never fatal."""
    cache = DurationCache()
    path = Path(path)
    if not path.exists():
        return cache
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            origin, dest, minutes = line.split()
            route = RoutePair(AirportCode(origin), AirportCode(dest))
            cache.put(route, FlightDuration(int(minutes)))
        except ValueError:
            log.warning("skipping corrupt cache line %s:%d: %r", path, lineno, line)
    return cache


def save_cache(cache: DurationCache, path: str | Path) -> None:
    """Write sorted 'ORIGIN DEST minutes' lines; load(save(c)) round-trips."""
    lines = sorted(
        f"{entry.route.origin} {entry.route.destination} {entry.duration.minutes}\n"
        for entry in cache.entries()
    )
    Path(path).write_text("".join(lines), encoding="utf-8")


class CachedProvider:
    """Two-tier cache (memory + optional file) over any provider.

    A hit never touches the inner provider; a miss fetches once and populates
    both tiers. Lookups may run concurrently; writes are serialized.
    """

    def __init__(
        self,
        inner: DurationProvider,
        *,
        cache: DurationCache | None = None,
        path: str | Path | None = None,
        clock: Callable[[], Timestamp] = Timestamp.now,
    ):
        self._inner = inner
        self._path = Path(path) if path else None
        if cache is not None:
            self._cache = cache
        elif self._path is not None:
            self._cache = load_cache(self._path)
        else:
            self._cache = DurationCache()
        self._clock = clock
        self._lock = threading.Lock()

    @property
    def cache(self) -> DurationCache:
        return self._cache

    def route_duration(self, route: RoutePair) -> FlightDuration:
        entry = self._cache.get(route)
        if entry is not None:
            return entry.duration
        duration = self._inner.route_duration(route)
        with self._lock:
            self._cache.put(route, duration, fetched_at=self._clock())
            if self._path is not None:
                save_cache(self._cache, self._path)
        return duration


def get_flight_duration(provider: DurationProvider, route: RoutePair) -> FlightDuration:
    """Look up the minimum flight duration for a route."""
    return provider.route_duration(route)


def transit_bounds(
    provider: DurationProvider, route: RoutePair, config: ProviderConfig
) -> TransitBounds:
    """Derive the allowed travel-time window for a route: t_min is the flight
    duration plus the buffer, t_max is 2 x t_min. Propagates RouteUnavailable."""
    duration = provider.route_duration(route)
    return TransitBounds.from_flight(duration.minutes, config.buffer_minutes)
