"""Command-line front end.

Four subcommands: validate (check files, report issues), correct (repair a
file and print the fixed document), generate (prompt a model, then validate
and correct the result), and bench (validate a corpus and print aggregate
statistics).

Exit codes are part of the contract: 0 everything valid, 1 at least one
itinerary invalid, 2 input or provider problem, 3 correction failed to
converge, 4 generation retries exhausted.

Settings resolve as flags > config file > environment > built-in defaults.
The config file is one JSON object whose keys mirror AppConfig.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from datetime import date
from pathlib import Path

from .airports import AIRPORT_COORDS
from .correction import CorrectionTrace, NonConvergenceError, correct
from .durations import (
    CachedProvider,
    DurationProvider,
    FixtureProvider,
    GreatCircleProvider,
    RemoteDurationClient,
)
from .gateway import (
    GenerationFailed,
    HttpGenerationClient,
    ReplayClient,
    generate_itinerary,
)
from .metrics import (
    CorpusRecord,
    EmptyGroupError,
    aggregate,
    failure_mode_breakdown,
    load_manifest,
    render_stats,
)
from .model import (
    AirportCode,
    FormatError,
    Itinerary,
    format_minutes,
    parse_itinerary,
    render_itinerary,
)
from .prompts import GenerationRequest
from .validation import Issue, IssueKind, ProviderError, ValidationPolicy, validate

log = logging.getLogger(__name__)

EXIT_VALID = 0
EXIT_INVALID = 1
EXIT_INPUT = 2
EXIT_NON_CONVERGENCE = 3
EXIT_GENERATION = 4

DEMO_CITY_POOL = (
    ("Sydney", "SYD"),
    ("Frankfurt", "FRA"),
    ("Cairo", "CAI"),
    ("Casablanca", "CMN"),
    ("London", "LHR"),
    ("Paris", "CDG"),
    ("Tokyo", "HND"),
    ("New York", "JFK"),
)


@dataclass(frozen=True)
class AppConfig:
    """Resolved settings shared by all subcommands."""

    provider: str = "great-circle"
    buffer_hours: float = 4.0
    min_stay_hours: float = 48.0
    max_multiplier: float = 2.0
    strict: bool = False
    trace: bool = False
    format: str = "table"
    cache_file: str | None = None
    workers: int = 4
    fixture_file: str | None = None
    base_url: str | None = None


def resolve_config(args: argparse.Namespace) -> AppConfig:
    """Layer config sources: defaults, then config file, then explicit flags.

    Flags parsed with default=None count as "not given" and leave the lower
    layers alone.
    """
    config = AppConfig()
    config_path = getattr(args, "config", None)
    if config_path:
        data = json.loads(Path(config_path).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        known = {f.name for f in fields(AppConfig)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        config = replace(config, **data)
    overrides = {}
    for f in fields(AppConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            overrides[f.name] = value
    return replace(config, **overrides) if overrides else config


def build_policy(config: AppConfig) -> ValidationPolicy:
    return ValidationPolicy(
        min_stay_minutes=round(config.min_stay_hours * 60),
        buffer_minutes=round(config.buffer_hours * 60),
        max_multiplier=config.max_multiplier,
        strict=bool(config.strict),
    )


def build_provider(config: AppConfig) -> DurationProvider:
    if config.provider == "fixture":
        if not config.fixture_file:
            raise ValueError("--fixture-file is required with --provider fixture")
        base: DurationProvider = FixtureProvider.from_file(config.fixture_file)
    elif config.provider == "great-circle":
        base = GreatCircleProvider(AIRPORT_COORDS)
    elif config.provider == "live":
        if not config.base_url:
            raise ValueError("--base-url is required with --provider live")
        base = RemoteDurationClient(config.base_url)
    else:
        raise ValueError(f"unknown provider kind {config.provider!r}")
    if config.cache_file:
        return CachedProvider(base, path=config.cache_file)
    if config.provider == "live":
        # Never hit the network twice for one route, even without a cache file.
        return CachedProvider(base)
    return base


def _issue_line(issue: Issue, itin: Itinerary) -> str:
    if issue.kind is IssueKind.STAY_TOO_SHORT:
        where = f"stop {issue.subject} ({itin.stops[issue.subject].place})"
    else:
        origin = itin.stops[issue.subject].airport
        destination = itin.stops[issue.subject + 1].airport
        where = f"segment {issue.subject} ({origin}->{destination})"
    detail = ""
    if issue.observed is not None and issue.required is not None:
        detail = f": observed {format_minutes(issue.observed)}, required {format_minutes(issue.required)}"
    return f"  - {issue.kind.value} {where}{detail}"


def cmd_validate(args: argparse.Namespace, config: AppConfig) -> int:
    if config.format not in ("table", "json"):
        print(f"error: validate supports --format table or json, not {config.format!r}", file=sys.stderr)
        return EXIT_INPUT
    provider = build_provider(config)
    policy = build_policy(config)
    results = []
    had_error = False
    for path in args.inputs:
        try:
            itinerary = parse_itinerary(Path(path).read_text(encoding="utf-8"), None)
            report = validate(itinerary, provider, policy)
        except (OSError, FormatError, ProviderError) as err:
            print(f"{path}: error: {err}", file=sys.stderr)
            had_error = True
            continue
        results.append((path, itinerary, report))
    if config.format == "json":
        payload = [{"file": path, **report.to_dict()} for path, _, report in results]
        print(json.dumps(payload, indent=2))
    else:
        for path, itinerary, report in results:
            if report.is_valid:
                line = f"{path}: valid"
            else:
                line = f"{path}: INVALID ({len(report.issues)} issue(s))"
            if report.unverifiable_segments:
                line += f", {len(report.unverifiable_segments)} unverifiable segment(s)"
            print(line)
            for issue in report.issues:
                print(_issue_line(issue, itinerary))
    if had_error:
        return EXIT_INPUT
    if any(not report.is_valid for _, _, report in results):
        return EXIT_INVALID
    return EXIT_VALID


def cmd_correct(args: argparse.Namespace, config: AppConfig) -> int:
    provider = build_provider(config)
    policy = build_policy(config)
    try:
        itinerary = parse_itinerary(Path(args.input).read_text(encoding="utf-8"), None)
    except (OSError, FormatError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    try:
        corrected, trace = correct(itinerary, provider, policy)
    except ProviderError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergenceError as err:
        print(f"error: correction did not converge: {err}", file=sys.stderr)
        return EXIT_NON_CONVERGENCE
    print(render_itinerary(corrected))
    if config.trace:
        print(json.dumps(trace.to_dict(), indent=2), file=sys.stderr)
    return EXIT_VALID


def _parse_city_list(raw: str) -> tuple[tuple[str, AirportCode], ...]:
    """Parse 'Name:IATA,Name:IATA,...' into (name, code) pairs."""
    cities = []
    for part in raw.split(","):
        name, sep, code = part.strip().rpartition(":")
        if not sep or not name.strip():
            raise ValueError(f"city entry {part.strip()!r} must look like 'Name:IATA'")
        cities.append((name.strip(), AirportCode(code.strip().upper())))
    return tuple(cities)


def cmd_generate(args: argparse.Namespace, config: AppConfig) -> int:
    provider = build_provider(config)
    policy = build_policy(config)
    city_pool = _parse_city_list(args.cities) if args.cities else tuple(
        (name, AirportCode(code)) for name, code in DEMO_CITY_POOL
    )
    sequence = _parse_city_list(args.route) if args.route else None
    request = GenerationRequest(
        num_destinations=len(sequence) if sequence else args.destinations,
        city_pool=city_pool,
        window_start=args.window_start,
        window_end=args.window_end,
        fixed_sequence=sequence,
    )
    if args.replay_dir:
        try:
            client = ReplayClient.for_request(args.replay_dir, args.model_tag, request.num_destinations)
        except FileNotFoundError as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_INPUT
    elif args.endpoint:
        client = HttpGenerationClient(args.endpoint)
    else:
        print("error: configure a generation client with --replay-dir or --endpoint", file=sys.stderr)
        return EXIT_INPUT
    try:
        itinerary, attempts = generate_itinerary(client, request, max_retries=args.max_retries)
    except GenerationFailed as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_GENERATION
    except RuntimeError as err:
        # Replay recording ran out before an attempt could parse.
        print(f"error: {err}", file=sys.stderr)
        return EXIT_GENERATION
    try:
        report = validate(itinerary, provider, policy)
        trace: CorrectionTrace | None = None
        final = itinerary
        if not report.is_valid and not args.no_correct:
            final, trace = correct(itinerary, provider, policy)
    except ProviderError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergenceError as err:
        print(f"error: correction did not converge: {err}", file=sys.stderr)
        return EXIT_NON_CONVERGENCE
    print(render_itinerary(final))
    adjustments = len(trace.adjustments) if trace else 0
    print(
        f"generation: {attempts} attempt(s); {len(report.issues)} issues found; "
        f"{adjustments} adjustment(s) applied",
        file=sys.stderr,
    )
    if config.trace and trace is not None:
        print(json.dumps(trace.to_dict(), indent=2), file=sys.stderr)
    return EXIT_VALID


def cmd_bench(args: argparse.Namespace, config: AppConfig) -> int:
    provider = build_provider(config)
    policy = build_policy(config)
    try:
        entries = load_manifest(args.manifest)
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    root = Path(args.manifest).parent

    def check_one(entry):
        text = (root / entry.file).read_text(encoding="utf-8")
        itinerary = parse_itinerary(text, entry.num_cities)
        return CorpusRecord(entry.model_tag, entry.num_cities, validate(itinerary, provider, policy))

    records = []
    with ThreadPoolExecutor(max_workers=max(1, config.workers)) as executor:
        futures = [(entry, executor.submit(check_one, entry)) for entry in entries]
        for entry, future in futures:
            try:
                records.append(future.result())
            except Exception as err:
                print(f"warning: skipping {entry.file}: {err}", file=sys.stderr)
    try:
        stats = aggregate(records, include_stays=args.include_stays)
    except EmptyGroupError:
        stats = []
    if config.format == "json":
        print(json.dumps([asdict(row) for row in stats], indent=2))
    else:
        print(render_stats(stats, config.format), end="")
    if args.breakdown:
        breakdown = failure_mode_breakdown(records)
        for tag in sorted(breakdown):
            counts = ", ".join(
                f"{kind.value}={count}"
                for kind, count in sorted(breakdown[tag].items(), key=lambda item: item[0].value)
            )
            print(f"{tag}: {counts}")
    return EXIT_VALID


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; keys mirror the defaults")
    common.add_argument("--provider", choices=["live", "fixture", "great-circle"],
                        help="flight duration source (default: great-circle)")
    common.add_argument("--fixture-file", help="duration table for --provider fixture")
    common.add_argument("--base-url", help="duration API root for --provider live")
    common.add_argument("--cache-file", help="persistent duration cache")
    common.add_argument("--buffer-hours", type=float, help="airport buffer added to flight time (default: 4)")
    common.add_argument("--min-stay-hours", type=float, help="minimum stay per city (default: 48)")
    common.add_argument("--max-multiplier", type=float,
                        help="max transit as a multiple of minimum transit (default: 2)")
    common.add_argument("--strict", action="store_true", default=None,
                        help="treat unresolvable routes as errors instead of skipping them")

    parser = argparse.ArgumentParser(
        prog="itiguard",
        description="Validate, correct, and generate multi-city flight itineraries.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_validate = subparsers.add_parser("validate", parents=[common],
                                       help="check itinerary files against the temporal rules")
    p_validate.add_argument("inputs", nargs="+", help="itinerary JSON file(s)")
    p_validate.add_argument("--format", choices=["table", "json"], default=None)

    p_correct = subparsers.add_parser("correct", parents=[common],
                                      help="repair an itinerary and print the corrected JSON")
    p_correct.add_argument("input", help="itinerary JSON file")
    p_correct.add_argument("--trace", action="store_true", default=None,
                           help="print the adjustment log to stderr")

    p_generate = subparsers.add_parser("generate", parents=[common],
                                       help="generate an itinerary, then validate and correct it")
    p_generate.add_argument("--destinations", type=int, default=4,
                            help="number of stops (default: 4; ignored with --route)")
    p_generate.add_argument("--cities", help="city pool as 'Name:IATA,Name:IATA,...'")
    p_generate.add_argument("--route", help="fixed city sequence as 'Name:IATA,...'")
    p_generate.add_argument("--window-start", type=date.fromisoformat, default=date(2025, 6, 1))
    p_generate.add_argument("--window-end", type=date.fromisoformat, default=date(2025, 6, 30))
    p_generate.add_argument("--replay-dir", help="serve recorded model responses from this directory")
    p_generate.add_argument("--model-tag", default="demo", help="recording subdirectory (default: demo)")
    p_generate.add_argument("--endpoint", help="live generation endpoint URL")
    p_generate.add_argument("--max-retries", type=int, default=3,
                            help="format-feedback retries after the first attempt (default: 3)")
    p_generate.add_argument("--no-correct", action="store_true",
                            help="emit the validated itinerary without repairing it")
    p_generate.add_argument("--trace", action="store_true", default=None,
                            help="print the adjustment log to stderr")

    p_bench = subparsers.add_parser("bench", parents=[common],
                                    help="validate a corpus and print aggregate statistics")
    p_bench.add_argument("manifest", help="corpus manifest JSON")
    p_bench.add_argument("--format", choices=["table", "csv", "json"], default=None)
    p_bench.add_argument("--workers", type=int, default=None, help="concurrent validations (default: 4)")
    p_bench.add_argument("--include-stays", action="store_true",
                         help="count stay violations in the invalid-segment rate")
    p_bench.add_argument("--breakdown", action="store_true",
                         help="also print issue-kind counts per model tag")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = resolve_config(args)
    except (OSError, ValueError) as err:
        print(f"error: bad configuration: {err}", file=sys.stderr)
        return EXIT_INPUT
    handlers = {
        "validate": cmd_validate,
        "correct": cmd_correct,
        "generate": cmd_generate,
        "bench": cmd_bench,
    }
    try:
        return handlers[args.command](args, config)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


def entrypoint() -> None:
    sys.exit(main())
