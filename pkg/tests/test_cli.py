import json
import subprocess
import sys
from pathlib import Path

import pytest

from bdfkalc.cli import (
    EXIT_PARSE,
    EXIT_VALIDATION,
    EXIT_WINDOW,
    SpecError,
    parse_spec,
    serialize_spec,
)

GOLDEN = Path(__file__).parent / "golden"


def run_cli(*args, spec=None, tmp_path=None):
    argv = [sys.executable, "-m", "bdfkalc"]
    if spec is not None:
        path = tmp_path / "job.json"
        path.write_text(json.dumps(spec))
        argv += ["--spec", str(path)]
    argv += list(args)
    return subprocess.run(argv, capture_output=True, text=True)


MINIMAL = {
    "ring": {"columns": [1, 1]},
    "module": {"node": "quotient", "gens": [[[1, 1], [2, 1]]]},
    "window": [[[1, 3], [2, 3]]],
}


class TestParseSpec:
    def test_minimal_spec_parses(self):
        job = parse_spec(json.dumps(MINIMAL), command="kseries")
        assert job.command == "kseries"
        assert len(job.ring.variables) == 2

    def test_zero_coefficient_degree_is_a_parse_error(self):
        bad = dict(MINIMAL, window=[[[1, 0]]])
        with pytest.raises(SpecError) as info:
            parse_spec(json.dumps(bad), command="kseries")
        assert any("zero coefficient" in message for _, message in info.value.errors)

    def test_unknown_command_named_in_error(self):
        with pytest.raises(SpecError) as info:
            parse_spec(json.dumps(MINIMAL), command=None)
        assert any("None" in message for _, message in info.value.errors)
        bad = dict(MINIMAL, command="frobnicate")
        with pytest.raises(SpecError) as info:
            parse_spec(json.dumps(bad))
        assert any("frobnicate" in message for _, message in info.value.errors)

    def test_every_error_is_positioned(self):
        bad = {
            "ring": {"columns": [1, -1]},
            "module": {"node": "mystery"},
            "window": [],
        }
        with pytest.raises(SpecError) as info:
            parse_spec(json.dumps(bad), command="kseries")
        assert {where for where, _ in info.value.errors} >= {"ring.columns", "window"}

    def test_serialize_round_trip_is_idempotent(self):
        job = parse_spec(json.dumps(MINIMAL), command="betti")
        once = serialize_spec(job)
        again = serialize_spec(parse_spec(once))
        assert once == again


class TestExitCodes:
    def test_parse_error(self, tmp_path):
        bad = dict(MINIMAL, module={"node": "quotient", "gens": [[[1, 0]]]})
        result = run_cli("--command", "kseries", spec=bad, tmp_path=tmp_path)
        assert result.returncode == EXIT_PARSE
        record = json.loads(result.stderr)
        assert record["error"]["kind"] == "parse"
        assert record["error"]["details"]

    def test_validation_error_for_unpointed_ring(self, tmp_path):
        bad = {
            "ring": {"variables": [{"id": "a", "degree": [[1, 1], [2, -1]]}]},
            "module": {"node": "free", "shifts": [[]]},
            "window": [[[1, 2]]],
        }
        result = run_cli("--command", "hilbert", spec=bad, tmp_path=tmp_path)
        assert result.returncode == EXIT_VALIDATION
        assert json.loads(result.stderr)["error"]["kind"] == "validation"

    def test_window_error_for_out_of_window_degree(self, tmp_path):
        spec = dict(MINIMAL, degree=[[1, 9]])
        result = run_cli("--command", "torsion-dim", spec=spec, tmp_path=tmp_path)
        assert result.returncode == EXIT_WINDOW
        assert json.loads(result.stderr)["error"]["kind"] == "window"

    def test_success_is_zero(self, tmp_path):
        result = run_cli("--command", "kseries", spec=MINIMAL, tmp_path=tmp_path)
        assert result.returncode == 0
        assert result.stdout.endswith("\n")


class TestCommands:
    def test_kseries_output(self, tmp_path):
        result = run_cli("--command", "kseries", spec=MINIMAL, tmp_path=tmp_path)
        payload = json.loads(result.stdout)
        assert payload["coeffs"] == [[[], 1], [[[1, 1], [2, 1]], -1]]

    def test_invert_geometric(self, tmp_path):
        spec = {
            "ring": {"columns": [1]},
            "series": [[[], 1], [[[1, 1]], -1]],
            "window": [[[1, 4]]],
        }
        result = run_cli("--command", "invert", spec=spec, tmp_path=tmp_path)
        payload = json.loads(result.stdout)
        assert [c for _, c in payload["coeffs"]] == [1, 1, 1, 1, 1]

    def test_invert_rejects_bad_constant_term(self, tmp_path):
        spec = {
            "ring": {"columns": [1]},
            "series": [[[], 2]],
            "window": [[[1, 4]]],
        }
        result = run_cli("--command", "invert", spec=spec, tmp_path=tmp_path)
        assert result.returncode == EXIT_VALIDATION

    def test_torsion_dim_payload(self, tmp_path):
        spec = dict(MINIMAL, degree=[[1, 1], [2, 1]])
        result = run_cli("--command", "torsion-dim", spec=spec, tmp_path=tmp_path)
        payload = json.loads(result.stdout)
        assert payload["torsion_dimension"] == 1
        assert payload["projective_dimension"] == 1

    def test_euler_check_rows_balance(self, tmp_path):
        result = run_cli("--command", "euler-check", spec=MINIMAL, tmp_path=tmp_path)
        payload = json.loads(result.stdout)
        assert payload["equal"] is True
        assert all(terms == homology for _, terms, homology in payload["rows"])

    def test_table_output_smoke(self, tmp_path):
        result = run_cli(
            "--command", "betti", "--output", "table", spec=MINIMAL, tmp_path=tmp_path
        )
        assert "beta" in result.stdout

    def test_prime_field_flag(self, tmp_path):
        plain = run_cli("--command", "betti", spec=MINIMAL, tmp_path=tmp_path)
        mod2 = run_cli("--command", "betti", "--char", "2", spec=MINIMAL, tmp_path=tmp_path)
        assert plain.returncode == mod2.returncode == 0
        assert plain.stdout == mod2.stdout  # this table is characteristic-free

    def test_composite_characteristic_rejected(self, tmp_path):
        result = run_cli("--command", "betti", "--char", "6", spec=MINIMAL, tmp_path=tmp_path)
        assert result.returncode == EXIT_VALIDATION


class TestGolden:
    cases = [
        ("betti_xy.json", "kseries", "json", "kseries_xy.json.golden"),
        ("betti_xy.json", "betti", "json", "betti_xy.json.golden"),
        ("betti_xy.json", "betti", "csv", "betti_xy.csv.golden"),
        ("serre_xz.json", "serre", "json", "serre_xz.json.golden"),
        ("koszul_m3.json", "koszul-verify", "json", "koszul_m3.json.golden"),
    ]

    @pytest.mark.parametrize("spec,command,output,golden", cases)
    def test_byte_identical_across_runs_and_threads(self, spec, command, output, golden):
        expected = (GOLDEN / golden).read_bytes()
        for threads in ("1", "2"):
            result = subprocess.run(
                [
                    sys.executable,
                    "-m",
                    "bdfkalc",
                    "--spec",
                    str(GOLDEN / spec),
                    "--command",
                    command,
                    "--output",
                    output,
                    "--threads",
                    threads,
                ],
                capture_output=True,
            )
            assert result.returncode == 0, result.stderr
            assert result.stdout == expected
