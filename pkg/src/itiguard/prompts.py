"""Prompt construction for itinerary generation.

Two base prompts (free city choice vs. a pre-defined route) plus three
feedback messages used when a response fails to parse. The exact wording is
load-bearing: tests pin the rendered text byte-for-byte against golden
files, so any edit here must update those files deliberately.

Note the templates intentionally disagree with the validator in two places:
they ask the model for a 1 hour transit buffer (the validator enforces 4)
and the pre-defined-route variant says "> 49 hours" where the other says
"> 48". The validator's policy is what counts; the prompt text stays as is.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from enum import Enum
from string import Template

from .model import AirportCode

GENERIC_PROMPT = Template("""
Generate a travel itinerary visiting $num_destinations destinations, exclusively using air travel.
You MUST use ONLY these cities for your itinerary:
$cities_str

IMPORTANT: Return ONLY a valid JSON object with this EXACT structure (no additional text, no markdown formatting):
{
    "itinerary": [
        {
            "place": "city_name (IATA)",
            "arrival_time": "YYYY-MM-DD HH:MM",
            "departure_time": "YYYY-MM-DD HH:MM"
        },
        {
            "place": "city_name (IATA)",
            "arrival_time": "YYYY-MM-DD HH:MM",
            "departure_time": "YYYY-MM-DD HH:MM"
        }
        // ... up to $num_destinations items
    ]
}

Requirements:
1. All times MUST be in UTC.
2. Use 24-hour format (e.g., 14:30, 00:00 for midnight).
3. Travel dates must be between $date_start and $date_end.
4. Include the IATA airport code for each city in parentheses.
5. Do NOT add any explanatory text or markdown formatting.
6. Ensure the JSON is properly formatted with correct commas and brackets.
7. For each city, the difference between its 'departure_time' and 'arrival_time' (i.e., the stay at that city) MUST be more than 2 days (> 48 hours).
8. For each segment, the difference between the 'departure_time' of the previous city and the 'arrival_time' of the next city MUST be equal to the minimum realistic flight time (plus a 1 hour buffer for airport procedures). Do NOT add extra days or hours to the travel time.
9. The stay duration and the travel duration are separate: do NOT add the 2-day minimum stay to the travel time. The 2-day minimum applies only to the time spent at each city.
10. Return ONLY the JSON object, nothing else.
""")

FIXED_SEQUENCE_PROMPT = Template("""
You are tasked with creating a valid time schedule for a PRE-DEFINED travel itinerary.
The itinerary visits $num_destinations destinations.
You MUST follow this exact sequence of cities and use their IATA codes as provided:
$fixed_route_str

The cities involved are from the following list (for context and ensuring correct naming/IATA):
$cities_str

IMPORTANT: Return ONLY a valid JSON object with this EXACT structure (no additional text, no markdown formatting):
{
    "itinerary": [
        // Example for the first stop, ensure "place" matches the fixed sequence
        {
            "place": "$example_place ($example_iata)", 
            "arrival_time": "YYYY-MM-DD HH:MM",
            "departure_time": "YYYY-MM-DD HH:MM"
        }
        // ... and so on for all $num_destinations cities in the fixed_route_sequence
    ]
}

Requirements:
1. All times MUST be in UTC.
2. Use 24-hour format (e.g., 14:30, 00:00 for midnight) ONLY and EXACTLY MATCH the format 'YYYY-MM-DD HH:MM'.
3. The "place" field in your JSON for each stop MUST EXACTLY MATCH the city name and IATA code from the fixed sequence provided above. Do not alter the sequence or the cities.
4. Do NOT add any explanatory text or markdown formatting.
5. Ensure the JSON is properly formatted with correct commas and brackets.
6. Account for minimum flight times between cities (use realistic minimum flight durations).
7. For each city, the difference between its 'departure_time' and 'arrival_time' (i.e., the stay at that city) MUST be more than 2 days (> 49 hours).
8. For each segment, the difference between the 'departure_time' of the previous city and the 'arrival_time' of the next city MUST be equal to the minimum realistic flight time (plus a 1 hour buffer for airport procedures). Do NOT add extra days or hours to the travel time.
9. The stay duration and the travel duration are separate: do NOT add the 2-day minimum stay to the travel time. The 2-day minimum applies only to the time spent at each city.
10. Return ONLY the JSON object, nothing else.
""")

JSON_ERROR_FEEDBACK = """The previous response was not a valid JSON object. Please ensure:
1. The response is a single, valid JSON object
2. The JSON has an "itinerary" array containing exactly 4 stops
3. Each stop has "place", "arrival_time", and "departure_time" fields
4. All times are in UTC and follow the format 'YYYY-MM-DD HH:MM'
5. Each place includes the IATA code in parentheses
Example format:
{
    "itinerary": [
        {
            "place": "London (LHR)",
            "arrival_time": "2024-03-20 10:00",
            "departure_time": "2024-03-20 14:00"
        }
    ]
}"""

TIME_FORMAT_FEEDBACK = Template("""Error in time format for $place_label. Please ensure:
1. All times are in UTC and follow the EXACT format 'YYYY-MM-DD HH:MM'
2. Use 24-hour format (e.g., 14:30, 00:00 for midnight)
3. Include leading zeros (e.g., '01:05' not '1:5')
4. No timezone indicators or UTC suffix
Example: '2024-03-20 14:30'""")

INSUFFICIENT_STOPS_FEEDBACK = Template("""Generated itinerary has insufficient stops. Please ensure:
1. The itinerary contains exactly $num_destinations stops
2. Each stop has all required fields (place, arrival_time, departure_time)
3. Each place includes the IATA code in parentheses
4. All times are in UTC and follow the format 'YYYY-MM-DD HH:MM'
Example format:
{
    "itinerary": [
        {
            "place": "London (LHR)",
            "arrival_time": "2024-03-20 10:00",
            "departure_time": "2024-03-20 14:00"
        },
        {
            "place": "Paris (CDG)",
            "arrival_time": "2024-03-20 16:00",
            "departure_time": "2024-03-21 10:00"
        }
    ]
}""")


class FeedbackKind(Enum):
    """Which format problem a retry prompt should call out."""

    JSON_ERROR = "json_error"
    TIME_FORMAT = "time_format"
    INSUFFICIENT_STOPS = "insufficient_stops"


def _normalize_cities(cities) -> tuple[tuple[str, object], ...]:
    out = []
    for entry in cities:
        pair = tuple(entry)
        if len(pair) != 2:
            raise ValueError(f"expected (name, iata) pairs, got {entry!r}")
        out.append(pair)
    return tuple(out)


@dataclass(frozen=True)
class GenerationRequest:
    """Inputs that shape a generation prompt.

    fixed_sequence pins both the cities and their order; when it is None the
    model picks freely from city_pool. Every sequence entry must come from
    the pool.
    """

    num_destinations: int
    city_pool: tuple[tuple[str, AirportCode], ...]
    window_start: date
    window_end: date
    fixed_sequence: tuple[tuple[str, AirportCode], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "city_pool", _normalize_cities(self.city_pool))
        if self.fixed_sequence is not None:
            object.__setattr__(self, "fixed_sequence", _normalize_cities(self.fixed_sequence))
        if self.num_destinations < 2:
            raise ValueError(f"an itinerary needs at least 2 destinations, got {self.num_destinations}")
        if not self.city_pool:
            raise ValueError("city_pool must not be empty")
        if self.window_end < self.window_start:
            raise ValueError(f"date window ends before it starts: {self.window_start}..{self.window_end}")
        if self.fixed_sequence is not None:
            if len(self.fixed_sequence) != self.num_destinations:
                raise ValueError(
                    f"fixed_sequence has {len(self.fixed_sequence)} cities, expected {self.num_destinations}"
                )
            pool = set(self.city_pool)
            for entry in self.fixed_sequence:
                if entry not in pool:
                    raise ValueError(f"fixed_sequence city {entry!r} is not in city_pool")


def _cities_str(cities: tuple[tuple[str, AirportCode], ...]) -> str:
    return ", ".join(f"{name} ({code})" for name, code in cities)


def _route_str(sequence: tuple[tuple[str, AirportCode], ...]) -> str:
    return " -> ".join(f"{name} ({code})" for name, code in sequence)


def build_generic_prompt(request: GenerationRequest) -> str:
    if request.fixed_sequence is not None:
        raise ValueError("request has a fixed sequence; use build_fixed_sequence_prompt")
    return GENERIC_PROMPT.substitute(
        num_destinations=request.num_destinations,
        cities_str=_cities_str(request.city_pool),
        date_start=request.window_start.isoformat(),
        date_end=request.window_end.isoformat(),
    )


def build_fixed_sequence_prompt(request: GenerationRequest) -> str:
    if request.fixed_sequence is None:
        raise ValueError("request has no fixed sequence; use build_generic_prompt")
    first_name, first_code = request.fixed_sequence[0]
    return FIXED_SEQUENCE_PROMPT.substitute(
        num_destinations=request.num_destinations,
        fixed_route_str=_route_str(request.fixed_sequence),
        cities_str=_cities_str(request.city_pool),
        example_place=first_name,
        example_iata=str(first_code),
    )


def build_base_prompt(request: GenerationRequest) -> str:
    if request.fixed_sequence is not None:
        return build_fixed_sequence_prompt(request)
    return build_generic_prompt(request)


def build_feedback(
    kind: FeedbackKind, request: GenerationRequest, *, place_label: str | None = None
) -> str:
    """Render the feedback message for one format failure.

    The caller prepends the result to the unchanged base prompt. place_label
    only applies to TIME_FORMAT and falls back to "unknown" when the failing
    stop could not be named.
    """
    if kind is FeedbackKind.JSON_ERROR:
        return JSON_ERROR_FEEDBACK
    if kind is FeedbackKind.TIME_FORMAT:
        return TIME_FORMAT_FEEDBACK.substitute(place_label=place_label or "unknown")
    if kind is FeedbackKind.INSUFFICIENT_STOPS:
        return INSUFFICIENT_STOPS_FEEDBACK.substitute(num_destinations=request.num_destinations)
    raise AssertionError(f"unhandled feedback kind: {kind}")
