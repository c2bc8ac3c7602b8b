import json
import os
from fractions import Fraction

import pytest

jsonschema = pytest.importorskip("jsonschema")

from vfkit.cli import main
from vfkit.systems import SystemParseError, parse_grid, parse_point, parse_system

SHEAR = """\
system shear dim 2
# a comment line
field X1 = (1, 0)
field X2 = (0, x1)
"""

PARTIAL = """\
system partial dim 2
field X1 = (1, 0) on x1 < 1
field X2 = (0, 1) on x1 > -1
"""

ISOLATED = """\
system isolated dim 3
field X1 = (x1*x3, 1, 0)
field X2 = (0, 0, 1)
"""


class TestSystemFormat:
    def test_parse_basic(self):
        sys_ = parse_system(SHEAR)
        assert sys_.name == "shear" and sys_.dim == 2
        assert [f.name for f in sys_.fields] == ["X1", "X2"]

    def test_domains(self):
        sys_ = parse_system(PARTIAL)
        x1, x2 = sys_.fields
        assert x1.domain.contains((0, 0)) and not x1.domain.contains((2, 0))
        assert x2.domain.contains((0, 0)) and not x2.domain.contains((-2, 0))

    def test_component_count_mismatch(self):
        with pytest.raises(SystemParseError) as err:
            parse_system("system s dim 2\nfield X = (x1)\n")
        assert "components" in str(err.value)

    def test_bad_expression_reports_line(self):
        with pytest.raises(SystemParseError) as err:
            parse_system("system s dim 1\nfield X = (x1 +)\n")
        assert "line 2" in str(err.value)

    def test_missing_header(self):
        with pytest.raises(SystemParseError):
            parse_system("field X = (x1)\n")

    def test_inequality_outside_dimension(self):
        with pytest.raises(SystemParseError):
            parse_system("system s dim 1\nfield X = (1) on x2 < 0\n")

    def test_parse_point(self):
        assert parse_point("1/2,-3", 2) == (Fraction(1, 2), Fraction(-3))
        with pytest.raises(SystemParseError):
            parse_point("1,2,3", 2)

    def test_parse_grid(self):
        axes = parse_grid("x1=-1:1:1/2,x2=0:1:1", 2)
        assert axes[1] == [Fraction(-1), Fraction(-1, 2), 0, Fraction(1, 2), 1]
        assert axes[2] == [0, 1]


@pytest.fixture
def shear_file(tmp_path):
    path = tmp_path / "shear.vf"
    path.write_text(SHEAR)
    return str(path)


@pytest.fixture
def isolated_file(tmp_path):
    path = tmp_path / "isolated.vf"
    path.write_text(ISOLATED)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestCli:
    def test_bracket_text(self, capsys, isolated_file):
        code, out = run_cli(capsys, "bracket", "--system", isolated_file,
                            "--fields", "X1,X2")
        assert code == 0
        assert '"-x1"' in out  # first slot of the bracket

    def test_rank_point_json(self, capsys, shear_file):
        code, out = run_cli(capsys, "rank", "--system", shear_file,
                            "--point", "0,5", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["results"]["rank"] == 1
        assert payload["results"]["minors"] == ["x1"]

    def test_rank_grid_csv(self, capsys, shear_file):
        code, out = run_cli(capsys, "rank", "--system", shear_file,
                            "--grid", "x1=-1:1:1/2,x2=0:0:1", "--format", "csv")
        assert code == 0
        assert "0;0,1,singular" in out

    def test_usage_error(self, capsys, shear_file):
        code, _ = run_cli(capsys, "rank", "--system", shear_file)
        assert code == 1

    def test_parse_error_exit(self, capsys, tmp_path):
        bad = tmp_path / "bad.vf"
        bad.write_text("system s dim 1\nfield X = (x7)\n")
        code, _ = run_cli(capsys, "rank", "--system", str(bad), "--point", "0")
        assert code == 2

    def test_numeric_failure_exit(self, capsys, tmp_path):
        blow = tmp_path / "blow.vf"
        blow.write_text("system blow dim 1\nfield X = (1) on x1 < 1\n")
        code, out = run_cli(capsys, "orbit", "--system", str(blow),
                            "--point", "5", "--words", "5")
        assert code == 3

    def test_lie_command(self, capsys, shear_file):
        code, out = run_cli(capsys, "lie", "--system", shear_file,
                            "--point", "0,0", "--depth", "4", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["results"]["ranks_by_depth"] == [1, 2, 2, 2]
        assert payload["results"]["stabilized_at"] == 2

    def test_member_command(self, capsys, shear_file):
        code, out = run_cli(capsys, "member", "--system", shear_file,
                            "--target", "(0,x1^2)", "--gens", "X2",
                            "--degree", "3", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["results"]["member"] is True
        assert payload["results"]["multipliers"] == ["x1"]

    def test_orbit_fixed_time(self, capsys, shear_file):
        code, out = run_cli(capsys, "orbit", "--system", shear_file,
                            "--point", "0,0", "--words", "60", "--seed", "5",
                            "--fixed-time", "0.0", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["results"]["dimension"] == 2

    def test_frobenius_command(self, capsys, isolated_file):
        code, out = run_cli(capsys, "frobenius", "--system", isolated_file,
                            "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["results"]["integrable"] == "no"

    def test_examples_list(self, capsys):
        code, out = run_cli(capsys, "examples", "--list", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        names = {entry["name"] for entry in payload["results"]}
        assert "nine-orbits" in names and "umbrella-ideal" in names

    def test_examples_run_green_preset(self, capsys):
        code, out = run_cli(capsys, "examples", "--run", "linear-shear",
                            "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["results"]["mismatches"] == 0

    def test_examples_run_refuted_fact(self, capsys):
        # the corpus keeps one stated fact the implementation refutes: the
        # axis fixed-time orbit is sampled one-dimensional, not a singleton
        code, out = run_cli(capsys, "examples", "--run", "hyperbola-fixed-time",
                            "--format", "json")
        assert code == 4
        payload = json.loads(out)
        assert payload["results"]["mismatches"] == 1
        failing = [
            f for run in payload["results"]["runs"] for f in run["facts"] if not f["ok"]
        ]
        assert [f["id"] for f in failing] == ["axis-singleton"]

    def test_unknown_preset_usage(self, capsys):
        code, _ = run_cli(capsys, "examples", "--run", "nope")
        assert code == 1


class TestReports:
    def test_reports_validate_against_schema(self, capsys, shear_file):
        import vfkit

        schema_path = os.path.join(os.path.dirname(vfkit.__file__), "report_schema.json")
        schema = json.load(open(schema_path))
        invocations = [
            ("bracket", "--system", shear_file, "--fields", "X1,X2"),
            ("rank", "--system", shear_file, "--point", "1,1"),
            ("lie", "--system", shear_file, "--point", "0,0"),
            ("orbit", "--system", shear_file, "--point", "1,1", "--words", "30"),
            ("examples", "--list"),
        ]
        for argv in invocations:
            code, out = run_cli(capsys, *argv, "--format", "json")
            assert code == 0
            jsonschema.validate(json.loads(out), schema)

    def test_byte_identical_reports(self, capsys, shear_file):
        args = ("orbit", "--system", shear_file, "--point", "1,1",
                "--words", "40", "--seed", "3", "--format", "json")
        _, first = run_cli(capsys, *args)
        _, second = run_cli(capsys, *args)
        assert first == second

    def test_seed_env_variable(self, capsys, shear_file, monkeypatch):
        monkeypatch.setenv("VFKIT_SEED", "99")
        code, out = run_cli(capsys, "orbit", "--system", shear_file,
                            "--point", "1,1", "--words", "10", "--format", "json")
        assert code == 0
        assert json.loads(out)["seed"] == 99
