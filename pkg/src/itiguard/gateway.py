"""Text-generation clients and the format-feedback retry loop.

A client is anything with complete(prompt) -> str. Three implementations
cover the useful cases: a live HTTP client, a scripted client for tests,
and a replay client that serves previously recorded responses from disk.

generate_itinerary() sends the base prompt, and on a parse failure retries
with a feedback message prepended to the unchanged base prompt, up to 3
retries (4 calls total). Only format problems trigger a retry; temporal
rule violations are the corrector's job and never cause regeneration.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Protocol

import requests

from .model import (
    FormatError,
    InsufficientStopsError,
    InvalidTimeFormatError,
    Itinerary,
    parse_itinerary,
)
from .prompts import FeedbackKind, GenerationRequest, build_base_prompt, build_feedback

log = logging.getLogger(__name__)

DEFAULT_MAX_RETRIES = 3
API_KEY_ENV = "GENERATION_API_KEY"


class GenerationFailed(Exception):
    """Every attempt produced unparseable output."""

    def __init__(self, attempts: int, last_error: FormatError):
        self.attempts = attempts
        self.last_error = last_error
        super().__init__(f"no parseable itinerary after {attempts} attempts: {last_error}")


class GenerationClient(Protocol):
    def complete(self, prompt: str) -> str: ...


class ScriptedClient:
    """Returns canned responses in order and records every prompt it saw."""

    def __init__(self, responses: list[str] | tuple[str, ...]):
        self._responses = list(responses)
        self._cursor = 0
        self.prompts: list[str] = []

    def complete(self, prompt: str) -> str:
        self.prompts.append(prompt)
        if self._cursor >= len(self._responses):
            raise RuntimeError(f"scripted client exhausted after {len(self._responses)} responses")
        response = self._responses[self._cursor]
        self._cursor += 1
        return response


class ReplayClient:
    """Serves recorded responses from a directory, one file per call.

    Files are consumed in sorted name order, so number them (001.txt,
    002.txt, ...). Layout under a recording root is
    <root>/<model_tag>/<num_destinations>/.
    """

    def __init__(self, directory: str | Path):
        self._directory = Path(directory)
        self._files = sorted(p for p in self._directory.iterdir() if p.is_file())
        if not self._files:
            raise FileNotFoundError(f"no recorded responses in {self._directory}")
        self._cursor = 0

    @classmethod
    def for_request(cls, root: str | Path, model_tag: str, num_destinations: int) -> ReplayClient:
        return cls(Path(root) / model_tag / str(num_destinations))

    def complete(self, prompt: str) -> str:
        if self._cursor >= len(self._files):
            raise RuntimeError(f"replay exhausted after {len(self._files)} responses: {self._directory}")
        path = self._files[self._cursor]
        self._cursor += 1
        return path.read_text(encoding="utf-8")


class HttpGenerationClient:
    """Minimal JSON-over-HTTP client: POST {"prompt": ...}, read {"text": ...}.

    The API key comes from the constructor or GENERATION_API_KEY. transport
    is injectable for tests and must behave like requests.post.
    """

    def __init__(
        self,
        endpoint: str,
        api_key: str | None = None,
        *,
        timeout: float = 60.0,
        transport=None,
    ):
        self._endpoint = endpoint
        self._api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self._timeout = timeout
        self._post = transport if transport is not None else requests.post

    def complete(self, prompt: str) -> str:
        headers = {"Content-Type": "application/json"}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        response = self._post(
            self._endpoint, json={"prompt": prompt}, headers=headers, timeout=self._timeout
        )
        response.raise_for_status()
        body = response.json()
        if not isinstance(body, dict) or not isinstance(body.get("text"), str):
            raise ValueError(f"generation endpoint returned unexpected payload: {json.dumps(body)[:200]}")
        return body["text"]


def feedback_for_error(error: FormatError) -> tuple[FeedbackKind, str | None]:
    """Pick the feedback template for a parse failure.

    Returns (kind, place_label); the label is only set for time-format
    errors that could name the offending stop.
    """
    if isinstance(error, InvalidTimeFormatError):
        return FeedbackKind.TIME_FORMAT, error.place_label
    if isinstance(error, InsufficientStopsError):
        return FeedbackKind.INSUFFICIENT_STOPS, None
    return FeedbackKind.JSON_ERROR, None


def generate_itinerary(
    client: GenerationClient,
    request: GenerationRequest,
    *,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> tuple[Itinerary, int]:
    """Generate until the response parses, retrying on format errors only.

    Returns (itinerary, attempts). Raises GenerationFailed once the initial
    attempt plus max_retries retries have all failed to parse.
    """
    base_prompt = build_base_prompt(request)
    feedback: str | None = None
    last_error: FormatError | None = None
    total_attempts = 1 + max_retries
    for attempt in range(1, total_attempts + 1):
        prompt = feedback + base_prompt if feedback else base_prompt
        raw = client.complete(prompt)
        try:
            itinerary = parse_itinerary(raw, expected_stops=request.num_destinations)
            return itinerary, attempt
        except FormatError as err:
            last_error = err
            kind, place_label = feedback_for_error(err)
            feedback = build_feedback(kind, request, place_label=place_label)
            log.debug("attempt %d failed to parse (%s), retrying with %s feedback",
                      attempt, type(err).__name__, kind.value)
    assert last_error is not None
    raise GenerationFailed(attempts=total_attempts, last_error=last_error)
