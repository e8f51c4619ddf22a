from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from itiguard.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
DEMO_FLAGS = ["--provider", "fixture", "--fixture-file", str(FIXTURES / "demo_durations.txt")]


def write_itinerary(path: Path, stops: list[tuple[str, str, str, str]]) -> Path:
    doc = {
        "itinerary": [
            {
                "place": f"{name} ({code})",
                "arrival_time": arrival,
                "departure_time": departure,
            }
            for name, code, arrival, departure in stops
        ]
    }
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def short_stay_file(tmp_path) -> Path:
    # Transit gap is exactly t_min for a 60 minute flight; only the first
    # stay (2h) breaks the default 48h rule.
    return write_itinerary(
        tmp_path / "short_stay.json",
        [
            ("Alpha", "AAA", "2025-06-01 08:00", "2025-06-01 10:00"),
            ("Beta", "BBB", "2025-06-01 15:00", "2025-06-04 15:00"),
        ],
    )


@pytest.fixture
def pair_durations(tmp_path) -> Path:
    path = tmp_path / "durations.txt"
    path.write_text("AAA BBB 60\n", encoding="utf-8")
    return path


def pair_flags(pair_durations: Path) -> list[str]:
    return ["--provider", "fixture", "--fixture-file", str(pair_durations)]


class TestValidate:
    def test_invalid_file_exits_1(self, capsys):
        code = main(["validate", str(FIXTURES / "sample_invalid.json"), *DEMO_FLAGS])
        assert code == 1
        out = capsys.readouterr().out
        assert "INVALID (3 issue(s))" in out
        assert "stay_too_short stop 0 (Sydney (SYD))" in out
        assert "transit_too_short segment 0 (SYD->FRA)" in out
        assert "transit_too_long segment 1 (FRA->CAI)" in out

    def test_valid_file_exits_0(self, capsys):
        code = main(["validate", str(FIXTURES / "sample_corrected.json"), *DEMO_FLAGS])
        assert code == 0
        assert "sample_corrected.json: valid" in capsys.readouterr().out

    def test_mixed_files_exit_1(self, capsys):
        code = main(
            [
                "validate",
                str(FIXTURES / "sample_corrected.json"),
                str(FIXTURES / "sample_invalid.json"),
                *DEMO_FLAGS,
            ]
        )
        assert code == 1
        out = capsys.readouterr().out
        assert ": valid" in out
        assert "INVALID" in out

    def test_missing_file_exits_2(self, capsys):
        code = main(["validate", "no_such_file.json", *DEMO_FLAGS])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_error_dominates_invalid(self, capsys):
        code = main(
            ["validate", "no_such_file.json", str(FIXTURES / "sample_invalid.json"), *DEMO_FLAGS]
        )
        assert code == 2

    def test_unparseable_file_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{ not json")
        code = main(["validate", str(bad), *DEMO_FLAGS])
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_json_format(self, capsys):
        code = main(
            ["validate", str(FIXTURES / "sample_invalid.json"), "--format", "json", *DEMO_FLAGS]
        )
        assert code == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload[0]["file"].endswith("sample_invalid.json")
        assert payload[0]["verdict"] == "invalid"
        kinds = [issue["kind"] for issue in payload[0]["issues"]]
        assert kinds == ["stay_too_short", "transit_too_short", "transit_too_long"]

    def test_csv_format_rejected(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text('{"format": "csv"}')
        code = main(
            ["validate", str(FIXTURES / "sample_invalid.json"), "--config", str(config), *DEMO_FLAGS]
        )
        assert code == 2
        assert "table or json" in capsys.readouterr().err

    def test_default_provider_is_great_circle(self, capsys):
        # No provider flags: distances come from the built-in airport table.
        code = main(["validate", str(FIXTURES / "sample_invalid.json")])
        assert code == 1


class TestCorrect:
    def test_stdout_matches_fixture(self, capsys):
        code = main(["correct", str(FIXTURES / "sample_invalid.json"), *DEMO_FLAGS])
        assert code == 0
        expected = (FIXTURES / "sample_corrected.json").read_text(encoding="utf-8")
        assert capsys.readouterr().out == expected

    def test_trace_on_stderr(self, capsys):
        code = main(["correct", str(FIXTURES / "sample_invalid.json"), "--trace", *DEMO_FLAGS])
        assert code == 0
        trace = json.loads(capsys.readouterr().err)
        assert trace["passes"] == 1
        assert len(trace["adjustments"]) == 4

    def test_valid_input_is_identity(self, capsys):
        code = main(["correct", str(FIXTURES / "sample_corrected.json"), *DEMO_FLAGS])
        assert code == 0
        expected = (FIXTURES / "sample_corrected.json").read_text(encoding="utf-8")
        assert capsys.readouterr().out == expected

    def test_strict_missing_route_exits_2(self, tmp_path, short_stay_file, capsys):
        empty = tmp_path / "empty_durations.txt"
        empty.write_text("CCC DDD 60\n")
        code = main(
            [
                "correct",
                str(short_stay_file),
                "--strict",
                "--provider",
                "fixture",
                "--fixture-file",
                str(empty),
            ]
        )
        assert code == 2
        assert "error" in capsys.readouterr().err

    def test_missing_input_exits_2(self, capsys):
        assert main(["correct", "no_such.json", *DEMO_FLAGS]) == 2


class TestGenerate:
    def test_replay_demo_recording(self, capsys):
        code = main(
            [
                "generate",
                "--replay-dir",
                str(FIXTURES / "replay"),
                *DEMO_FLAGS,
            ]
        )
        assert code == 0
        captured = capsys.readouterr()
        assert captured.out == (FIXTURES / "sample_corrected.json").read_text(encoding="utf-8")
        assert "generation: 1 attempt(s); 3 issues found; 4 adjustment(s) applied" in captured.err

    def test_valid_recording_reports_zero_issues(self, tmp_path, capsys):
        recording = tmp_path / "rec" / "demo" / "4"
        recording.mkdir(parents=True)
        (recording / "001.txt").write_text(
            (FIXTURES / "sample_corrected.json").read_text(encoding="utf-8")
        )
        code = main(["generate", "--replay-dir", str(tmp_path / "rec"), *DEMO_FLAGS])
        assert code == 0
        captured = capsys.readouterr()
        assert "generation: 1 attempt(s); 0 issues found; 0 adjustment(s) applied" in captured.err

    def test_no_correct_emits_raw(self, capsys):
        code = main(
            ["generate", "--replay-dir", str(FIXTURES / "replay"), "--no-correct", *DEMO_FLAGS]
        )
        assert code == 0
        captured = capsys.readouterr()
        assert captured.out == (FIXTURES / "sample_invalid.json").read_text(encoding="utf-8")
        assert "3 issues found; 0 adjustment(s) applied" in captured.err

    def test_all_malformed_exits_4(self, tmp_path, capsys):
        recording = tmp_path / "rec" / "demo" / "4"
        recording.mkdir(parents=True)
        for i in range(1, 5):
            (recording / f"{i:03d}.txt").write_text("not json")
        code = main(["generate", "--replay-dir", str(tmp_path / "rec"), *DEMO_FLAGS])
        assert code == 4
        assert "4 attempts" in capsys.readouterr().err

    def test_recording_exhausted_exits_4(self, tmp_path, capsys):
        recording = tmp_path / "rec" / "demo" / "4"
        recording.mkdir(parents=True)
        (recording / "001.txt").write_text("not json")
        code = main(["generate", "--replay-dir", str(tmp_path / "rec"), *DEMO_FLAGS])
        assert code == 4
        assert "exhausted" in capsys.readouterr().err

    def test_missing_recording_dir_exits_2(self, tmp_path, capsys):
        code = main(["generate", "--replay-dir", str(tmp_path / "nope"), *DEMO_FLAGS])
        assert code == 2

    def test_no_client_exits_2(self, capsys):
        code = main(["generate", *DEMO_FLAGS])
        assert code == 2
        assert "--replay-dir or --endpoint" in capsys.readouterr().err

    def test_route_sets_destination_count(self, tmp_path, capsys):
        recording = tmp_path / "rec" / "demo" / "2"
        recording.mkdir(parents=True)
        write_itinerary(
            recording / "001.txt",
            [
                ("Sydney", "SYD", "2025-06-07 10:00", "2025-06-09 10:00"),
                ("Frankfurt", "FRA", "2025-06-10 07:00", "2025-06-12 07:00"),
            ],
        )
        code = main(
            [
                "generate",
                "--replay-dir",
                str(tmp_path / "rec"),
                "--route",
                "Sydney:SYD,Frankfurt:FRA",
                "--cities",
                "Sydney:SYD,Frankfurt:FRA",
                *DEMO_FLAGS,
            ]
        )
        assert code == 0
        assert "0 issues found" in capsys.readouterr().err

    def test_bad_city_spec_exits_2(self, capsys):
        code = main(["generate", "--cities", "Sydney", "--replay-dir", "x", *DEMO_FLAGS])
        assert code == 2
        assert "Name:IATA" in capsys.readouterr().err


class TestBench:
    CORPUS = FIXTURES / "corpus"

    def corpus_flags(self) -> list[str]:
        return ["--provider", "fixture", "--fixture-file", str(self.CORPUS / "durations.txt")]

    def test_bundled_corpus_table(self, capsys):
        code = main(["bench", str(self.CORPUS / "manifest.json"), *self.corpus_flags()])
        assert code == 0
        out = capsys.readouterr().out
        lines = out.splitlines()
        assert lines[0].startswith("Model")
        row_a = next(line for line in lines if line.startswith("model-a"))
        row_b = next(line for line in lines if line.startswith("model-b"))
        assert row_a.split()[1:] == ["4", "48.00%", "21.00%", "0.63"]
        assert row_b.split()[1:] == ["4", "97.00%", "78.00%", "2.34"]

    def test_csv_format(self, capsys):
        code = main(
            ["bench", str(self.CORPUS / "manifest.json"), "--format", "csv", *self.corpus_flags()]
        )
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[1] == "model-a,4,48.00,21.00,0.63"
        assert lines[2] == "model-b,4,97.00,78.00,2.34"

    def test_json_format(self, capsys):
        code = main(
            ["bench", str(self.CORPUS / "manifest.json"), "--format", "json", *self.corpus_flags()]
        )
        assert code == 0
        rows = json.loads(capsys.readouterr().out)
        by_tag = {row["model_tag"]: row for row in rows}
        assert by_tag["model-a"]["invalid_itineraries_pct"] == pytest.approx(48.0)
        assert by_tag["model-b"]["segment_issue_count"] == 234

    def test_breakdown(self, capsys):
        code = main(
            ["bench", str(self.CORPUS / "manifest.json"), "--breakdown", *self.corpus_flags()]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "model-a: transit_too_long=27, transit_too_short=36" in out
        assert "model-b: transit_too_long=119, transit_too_short=115" in out

    def test_include_stays_keeps_rates(self, capsys):
        # The corpus has no stay violations, but the denominator widens
        # from 3 to 7 slots per itinerary, so the rate drops.
        code = main(
            [
                "bench",
                str(self.CORPUS / "manifest.json"),
                "--include-stays",
                *self.corpus_flags(),
            ]
        )
        assert code == 0
        row_a = next(
            line for line in capsys.readouterr().out.splitlines() if line.startswith("model-a")
        )
        assert row_a.split()[3] == "9.00%"

    def test_empty_manifest_header_only(self, tmp_path, capsys):
        manifest = tmp_path / "manifest.json"
        manifest.write_text("[]")
        code = main(["bench", str(manifest), *self.corpus_flags()])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 2

    def test_corrupt_file_warns_and_continues(self, tmp_path, capsys):
        (tmp_path / "good.json").write_text(
            (FIXTURES / "sample_invalid.json").read_text(encoding="utf-8")
        )
        (tmp_path / "bad.json").write_text("nope")
        manifest = tmp_path / "manifest.json"
        manifest.write_text(
            json.dumps(
                [
                    {"file": "good.json", "model_tag": "m", "num_cities": 4},
                    {"file": "bad.json", "model_tag": "m", "num_cities": 4},
                ]
            )
        )
        code = main(["bench", str(manifest), *DEMO_FLAGS, "--workers", "2"])
        assert code == 0
        captured = capsys.readouterr()
        assert "warning: skipping bad.json" in captured.err
        row = next(line for line in captured.out.splitlines() if line.startswith("m"))
        assert row.split()[1:] == ["4", "100.00%", "66.67%", "3.00"]

    def test_missing_manifest_exits_2(self, capsys):
        assert main(["bench", "no_manifest.json"]) == 2


class TestConfigResolution:
    def test_config_file_applies(self, tmp_path, short_stay_file, pair_durations, capsys):
        config = tmp_path / "config.json"
        config.write_text('{"min_stay_hours": 2.0}')
        without = main(["validate", str(short_stay_file), *pair_flags(pair_durations)])
        with_config = main(
            ["validate", str(short_stay_file), "--config", str(config), *pair_flags(pair_durations)]
        )
        assert without == 1
        assert with_config == 0

    def test_flag_overrides_config(self, tmp_path, short_stay_file, pair_durations, capsys):
        config = tmp_path / "config.json"
        config.write_text('{"min_stay_hours": 48.0}')
        code = main(
            [
                "validate",
                str(short_stay_file),
                "--config",
                str(config),
                "--min-stay-hours",
                "2",
                *pair_flags(pair_durations),
            ]
        )
        assert code == 0

    def test_config_can_set_provider(self, tmp_path, short_stay_file, pair_durations, capsys):
        config = tmp_path / "config.json"
        config.write_text(
            json.dumps(
                {
                    "provider": "fixture",
                    "fixture_file": str(pair_durations),
                    "min_stay_hours": 2.0,
                }
            )
        )
        assert main(["validate", str(short_stay_file), "--config", str(config)]) == 0

    def test_unknown_key_exits_2(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text('{"min_stay": 1}')
        code = main(["validate", "whatever.json", "--config", str(config)])
        assert code == 2
        assert "unknown config keys: min_stay" in capsys.readouterr().err

    def test_non_object_config_exits_2(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text("[1, 2]")
        assert main(["validate", "whatever.json", "--config", str(config)]) == 2

    def test_fixture_provider_requires_file(self, capsys):
        code = main(["validate", str(FIXTURES / "sample_invalid.json"), "--provider", "fixture"])
        assert code == 2
        assert "--fixture-file" in capsys.readouterr().err


class TestEntrypoint:
    def test_module_invocation(self):
        result = subprocess.run(
            [
                sys.executable,
                "-m",
                "itiguard",
                "validate",
                str(FIXTURES / "sample_corrected.json"),
                *DEMO_FLAGS,
            ],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert "valid" in result.stdout
