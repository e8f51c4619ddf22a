"""Itinerary domain model and the JSON wire format.

An itinerary is an ordered list of stops, each a city with an IATA airport
code and minute-resolution UTC arrival/departure timestamps. The parser
accepts the two document shapes seen in the wild (a bare array of stop
objects, or an object wrapping that array under an "itinerary" key) and
never reorders or repairs anything: inconsistent timestamps are the
validator's business, not the parser's.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import datetime, timezone

WIRE_TIME_FORMAT = "%Y-%m-%d %H:%M"

_TIME_RE = re.compile(r"^\d{4}-\d{2}-\d{2} \d{2}:\d{2}$")
_AIRPORT_RE = re.compile(r"^[A-Z]{3}$")
# Last parenthesized 3-letter token wins, so city names containing
# parentheses ("San Francisco (Bay Area)") still parse.
_PLACE_RE = re.compile(r"\(([A-Z]{3})\)\s*$")

_STOP_FIELDS = ("place", "arrival_time", "departure_time")

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


class FormatError(ValueError):
    """An itinerary document violates the JSON wire format."""


class InvalidJsonError(FormatError):
    """Document is not valid JSON, or its top-level shape is wrong."""


class InvalidTimeFormatError(FormatError):
    """A timestamp deviates from 'YYYY-MM-DD HH:MM' (24-hour, zero-padded, UTC)."""

    def __init__(self, raw: str, place_label: str | None = None):
        self.raw = raw
        self.place_label = place_label
        where = f" for {place_label}" if place_label else ""
        super().__init__(f"invalid time format{where}: {raw!r}")


class InsufficientStopsError(FormatError):
    """Stop count differs from the requested number of destinations."""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"expected exactly {expected} stops, got {actual}")


class MissingFieldError(FormatError):
    """A required field is absent (or null)."""

    def __init__(self, field: str, stop_index: int | None = None):
        self.field = field
        self.stop_index = stop_index
        at = f" in stop {stop_index}" if stop_index is not None else ""
        super().__init__(f"missing field {field!r}{at}")


class BadPlaceFormatError(FormatError):
    """A place field does not match 'City Name (IATA)'."""

    def __init__(self, stop_index: int, raw: object):
        self.stop_index = stop_index
        self.raw = raw
        super().__init__(f"stop {stop_index} place {raw!r} does not match 'City Name (IATA)'")


@dataclass(frozen=True, order=True)
class Timestamp:
    """A UTC instant at minute resolution.

    Subtracting two timestamps yields a signed duration in minutes; adding an
    int number of minutes yields a new timestamp.
    """

    minutes_since_epoch: int

    @classmethod
    def parse(cls, text: str) -> "Timestamp":
        if not isinstance(text, str) or not _TIME_RE.match(text):
            raise InvalidTimeFormatError(text if isinstance(text, str) else repr(text))
        try:
            dt = datetime.strptime(text, WIRE_TIME_FORMAT)
        except ValueError:
            # Regex passed but the calendar disagrees (month 13, Feb 30, hour 24).
            raise InvalidTimeFormatError(text) from None
        dt = dt.replace(tzinfo=timezone.utc)
        return cls(int((dt - _EPOCH).total_seconds()) // 60)

    @classmethod
    def now(cls) -> "Timestamp":
        return cls(int((datetime.now(timezone.utc) - _EPOCH).total_seconds()) // 60)

    def text(self) -> str:
        dt = _EPOCH + _minutes_delta(self.minutes_since_epoch)
        return dt.strftime(WIRE_TIME_FORMAT)

    def __str__(self) -> str:
        return self.text()

    def __add__(self, minutes: int) -> "Timestamp":
        if not isinstance(minutes, int):
            return NotImplemented
        return Timestamp(self.minutes_since_epoch + minutes)

    def __sub__(self, other: "Timestamp") -> int:
        if not isinstance(other, Timestamp):
            return NotImplemented
        return self.minutes_since_epoch - other.minutes_since_epoch


def _minutes_delta(minutes: int):
    from datetime import timedelta

    return timedelta(minutes=minutes)


@dataclass(frozen=True, order=True)
class AirportCode:
    """Three-letter uppercase IATA airport code."""

    code: str

    def __post_init__(self):
        if not isinstance(self.code, str) or not _AIRPORT_RE.match(self.code):
            raise ValueError(f"invalid IATA airport code: {self.code!r}")

    def __str__(self) -> str:
        return self.code


@dataclass(frozen=True)
class Stop:
    """One visited city: name, airport, and the raw arrival/departure times.

    No ordering is enforced between arrival and departure; generator output
    may be inconsistent and the validator reports that.
    """

    place_name: str
    airport: AirportCode
    arrival: Timestamp
    departure: Timestamp

    @property
    def place(self) -> str:
        return f"{self.place_name} ({self.airport})"


@dataclass(frozen=True)
class Itinerary:
    """Ordered stops, in visit order as emitted by the generator."""

    stops: tuple[Stop, ...]

    def __post_init__(self):
        object.__setattr__(self, "stops", tuple(self.stops))
        if len(self.stops) < 1:
            raise ValueError("an itinerary needs at least one stop")

    def __len__(self) -> int:
        return len(self.stops)


@dataclass(frozen=True)
class Segment:
    """The leg between consecutive stops.

    travel_time is next arrival minus previous departure, in minutes; it is
    negative when the visits overlap.
    """

    from_index: int
    to_index: int
    travel_time: int


def parse_timestamp(text: str) -> Timestamp:
    """Parse 'YYYY-MM-DD HH:MM' exactly; anything else raises InvalidTimeFormatError."""
    return Timestamp.parse(text)


def segments(itin: Itinerary) -> list[Segment]:
    """Derive the n-1 legs of an n-stop itinerary, in order."""
    return [
        Segment(i, i + 1, itin.stops[i + 1].arrival - itin.stops[i].departure)
        for i in range(len(itin.stops) - 1)
    ]


def stay_duration(stop: Stop) -> int:
    """Departure minus arrival in minutes; negative if the times are inverted."""
    return stop.departure - stop.arrival


def parse_place(raw: object, stop_index: int) -> tuple[str, AirportCode]:
    """Split 'City Name (IATA)' into name and airport code."""
    if not isinstance(raw, str):
        raise BadPlaceFormatError(stop_index, raw)
    match = _PLACE_RE.search(raw)
    if not match:
        raise BadPlaceFormatError(stop_index, raw)
    name = raw[: match.start()].strip()
    if not name:
        raise BadPlaceFormatError(stop_index, raw)
    return name, AirportCode(match.group(1))


def parse_itinerary(text: str, expected_stops: int | None) -> Itinerary:
    """Parse an itinerary document and check it has exactly expected_stops stops.

    Accepts both wire shapes: a bare JSON array of stop objects, or an object
    with an "itinerary" array. Raises a FormatError subclass naming the first
    problem found; stops are checked in order, fields in the order place,
    arrival_time, departure_time. expected_stops=None skips the count check,
    for callers reading files of unknown length.
    """
    if expected_stops is not None and expected_stops < 1:
        raise ValueError("expected_stops must be >= 1")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise InvalidJsonError(f"not valid JSON: {err}") from None

    if isinstance(doc, dict):
        items = doc.get("itinerary")
        if not isinstance(items, list):
            raise MissingFieldError("itinerary")
    elif isinstance(doc, list):
        items = doc
    else:
        raise InvalidJsonError(f"top-level JSON must be an array or object, got {type(doc).__name__}")

    if expected_stops is not None and len(items) != expected_stops:
        raise InsufficientStopsError(expected_stops, len(items))

    stops = []
    for i, item in enumerate(items):
        if not isinstance(item, dict):
            raise InvalidJsonError(f"stop {i} is not a JSON object")
        for field in _STOP_FIELDS:
            if item.get(field) is None:
                raise MissingFieldError(field, i)
        name, airport = parse_place(item["place"], i)
        times = []
        for field in ("arrival_time", "departure_time"):
            try:
                times.append(Timestamp.parse(item[field]))
            except InvalidTimeFormatError as err:
                raise InvalidTimeFormatError(err.raw, place_label=item["place"]) from None
        stops.append(Stop(name, airport, times[0], times[1]))
    return Itinerary(tuple(stops))


def render_itinerary(itin: Itinerary) -> str:
    """Serialize to the canonical wire form (wrapped "itinerary" array, 2-space indent).

    parse_itinerary(render_itinerary(x), len(x)) == x.
    """
    doc = {
        "itinerary": [
            {
                "place": stop.place,
                "arrival_time": stop.arrival.text(),
                "departure_time": stop.departure.text(),
            }
            for stop in itin.stops
        ]
    }
    return json.dumps(doc, indent=2)


def format_minutes(minutes: int) -> str:
    """Human form of a signed minute duration, e.g. 1230 -> '20h 30m'."""
    sign = "-" if minutes < 0 else ""
    m = abs(minutes)
    return f"{sign}{m // 60}h {m % 60}m"
