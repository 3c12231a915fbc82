import csv
import io
import json
from pathlib import Path

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError
from rest_framework import serializers

from curves.models import CuspCurve, ParamCurve
from .runner import run
from .serializers import CommandSerializer, parse_complex

INTRO_CURVE = Path(__file__).resolve().parent.parent / "curves" / "fixtures" / "intro_curve.json"
COARSE = ["--panels", "4", "--order", "8", "--theta", "64"]


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestParseComplex:
    @pytest.mark.parametrize(
        "text, value",
        [
            ("0.2+0.1i", 0.2 + 0.1j),
            ("-0.4i", -0.4j),
            ("i", 1j),
            ("-i", -1j),
            ("0.3-i", 0.3 - 1j),
            ("3", 3),
            (" 1e-2 + 2i ", 0.01 + 2j),
        ],
    )
    def test_accepts(self, text, value):
        assert parse_complex(text) == value

    @pytest.mark.parametrize("text", ["", "abc", "1+2", "2j", "i3"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            parse_complex(text)


class TestCommandSerializer:
    def test_represent_defaults_to_the_unit_circle(self):
        serializer = CommandSerializer(data={"verb": "represent", "r": 2, "s": 3, "phi": "tau^2", "t": ["0.3"]})
        assert serializer.is_valid(), serializer.errors
        assert serializer.validated_data["rho"] == 1.0
        assert serializer.validated_data["curve"] == CuspCurve(2, 3)
        assert serializer.validated_data["t"] == [0.3 + 0j]

    def test_missing_options_are_named(self):
        serializer = CommandSerializer(data={"verb": "solve", "curve": "2,3"})
        assert not serializer.is_valid()
        message = str(serializer.errors["non_field_errors"][0])
        assert "--phi or --ambient" in message
        assert "--t" in message

    def test_moment_requires_a_cusp(self):
        serializer = CommandSerializer(data={"verb": "moment", "curve": "smooth", "phi": "tau"})
        assert not serializer.is_valid()

    @pytest.mark.parametrize(
        "spec, kind",
        [
            ("smooth", ParamCurve),
            ("3, 5", CuspCurve),
            ('{"type": "cusp", "r": 2, "s": 5}', CuspCurve),
            (str(INTRO_CURVE), ParamCurve),
        ],
    )
    def test_build_curve(self, spec, kind):
        assert isinstance(CommandSerializer.build_curve(spec), kind)

    @pytest.mark.parametrize("spec", ["no/such/curve.json", "{not json"])
    def test_build_curve_errors(self, spec):
        with pytest.raises(serializers.ValidationError):
            CommandSerializer.build_curve(spec)


class TestKoppelmanCommand:
    def test_semigroup(self, capsys):
        assert run(["semigroup", "--r", "3", "--s", "5"]) == 0
        assert json.loads(capsys.readouterr().out) == {"frobenius": 7, "gaps": [1, 2, 4, 7]}

    @pytest.mark.parametrize("phi, verdict", [("tau", False), ("tau^2", True), ("tau^3 + 2*tau^4", True)])
    def test_moment_verdict(self, capsys, phi, verdict):
        assert run(["moment", "--r", "2", "--s", "3", "--phi", phi]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] is verdict
        assert report["eps_used"] == 0.5
        assert report["eps_check"] == 1.0

    def test_moment_on_a_small_circle(self, capsys):
        assert run(["moment", "--r", "3", "--s", "5", "--phi", "1", "--eps", "0.1"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] is True
        assert report["eps_used"] == 0.1

    def test_represent_csv(self, capsys):
        assert run(["represent", "--r", "2", "--s", "3", "--phi", "tau^5", "--t", "0.3", "--t=-0.4i"]) == 0
        rows = _rows(capsys.readouterr().out)
        assert [float(row["t_im"]) for row in rows] == [0.0, -0.4]
        assert float(rows[0]["u_re"]) == pytest.approx(0.00243, abs=1e-10)
        assert float(rows[1]["u_im"]) == pytest.approx((-0.4) ** 5, abs=1e-10)

    def test_represent_on_a_curve_file(self, capsys):
        argv = ["represent", "--curve", str(INTRO_CURVE), "--phi", "tau^3", "--rho", "0.5", "--t", "0.2"]
        assert run(argv) == 0
        (row,) = _rows(capsys.readouterr().out)
        # τ³ = z₁ is a function on the curve, so it is reproduced
        assert complex(float(row["u_re"]), float(row["u_im"])) == pytest.approx(0.008, abs=1e-8)

    def test_malformed_curve_json_exits_with_2(self, capsys):
        bad = '{"type": "param", "pi1": {"coeffs": [[0, 0, 1]]}, "pi2": {"coeffs": []}, "f": {"terms": []}}'
        assert run(["represent", "--curve", bad, "--phi", "tau", "--t", "0.2"]) == 2
        assert capsys.readouterr().err

    def test_represent_json(self, capsys):
        argv = ["represent", "--curve", "2,3", "--phi", "tau^2", "--t", "0.2+0.1i", "--format", "json"]
        assert run(argv) == 0
        (value,) = json.loads(capsys.readouterr().out)["values"]
        assert complex(value["u_re"], value["u_im"]) == pytest.approx((0.2 + 0.1j) ** 2)

    def test_output_is_deterministic(self, capsys):
        argv = ["represent", "--r", "3", "--s", "4", "--phi", "tau^4 - i*tau^3", "--t", "0.1+0.3i"]
        run(argv)
        first = capsys.readouterr().out
        run(argv)
        assert capsys.readouterr().out == first

    def test_solve_rows(self, capsys):
        argv = ["solve", "--r", "2", "--s", "3", "--phi", "bump(0.04,0.36)*~tau, dbar", *COARSE]
        argv += ["--t", "0.3", "--t", "0.2i", "--t", "-0.25"]
        assert run(argv) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "t_re,t_im,u_re,u_im"
        assert len(_rows(out)) == 3

    def test_ambient_form_is_checked_for_integrability(self, capsys):
        argv = ["solve", "--curve", str(INTRO_CURVE), "--ambient", "~z2, dbar1", "--rho", "0.5", *COARSE]
        argv += ["--t", "0.3"]
        assert run(argv) == 2
        # ω has a pole of order 12 and 3τ̄⁹ dτ̄ is not integrable against it
        assert "not integrable" in capsys.readouterr().err

    def test_verify_writes_residuals(self, capsys, tmp_path):
        out = tmp_path / "verify.csv"
        argv = ["verify", "--curve", "smooth", "--phi", "bump(0.04,0.36)*~tau, dbar", "--t", "0.3"]
        argv += [*COARSE, "--out", str(out)]
        assert run(argv) == 0
        assert capsys.readouterr().out == ""
        (row,) = _rows(out.read_text())
        assert set(row) == {"t_re", "t_im", "u_re", "u_im", "residual"}

    def test_growth_table(self, capsys, tmp_path):
        table = tmp_path / "growth.csv"
        argv = ["growth", "--r", "2", "--s", "3", "--phi", "hole(0.04,0.0625)*bump(0.09,0.36)*tau, dbar"]
        argv += [*COARSE, "--table", str(table)]
        assert run(argv) == 0
        report = json.loads(capsys.readouterr().out)
        assert set(report) == {"slope", "residual"}
        lines = table.read_text().splitlines()
        assert lines[0] == "log_r,log_abs_u"
        assert len(lines) == 7

    @pytest.mark.parametrize(
        "argv",
        [
            ["semigroup", "--r", "2", "--s", "4"],
            ["solve", "--r", "2", "--s", "3"],
            ["represent", "--r", "2", "--s", "3", "--phi", "tau^", "--t", "0.3"],
            ["represent", "--r", "2", "--s", "3", "--phi", "tau", "--t", "1.5"],
            ["moment", "--curve", "smooth", "--phi", "tau"],
            ["solve", "--r", "2", "--s", "3", "--phi", "tau", "--t", "0.3"],
            ["represent", "--r", "2", "--s", "3", "--phi", "tau", "--t", "abc"],
            ["frobenius"],
            ["verify", "--curve", "smooth", "--phi", "bump(0.04,0.36)*~tau, dbar", "--t", "0.3", "--h", "0"],
            ["moment", "--r", "2", "--s", "3", "--phi", "tau^2", "--eps", "0"],
            ["represent", "--r", "2", "--s", "3", "--phi", "tau", "--t", "0.3", "--rho=-1"],
        ],
    )
    def test_invalid_input_exits_with_2(self, capsys, argv):
        assert run(argv) == 2
        assert capsys.readouterr().err

    def test_syntax_error_reports_the_position(self, capsys):
        run(["represent", "--r", "2", "--s", "3", "--phi", "tau + $", "--t", "0.3"])
        assert "position 6" in capsys.readouterr().err

    def test_non_convergence_exits_with_3(self, capsys):
        assert run(["moment", "--r", "2", "--s", "3", "--phi", "tau^2*~tau"]) == 3
        assert "differs" in capsys.readouterr().err

    def test_call_command_raises(self):
        with pytest.raises(CommandError) as excinfo:
            call_command("koppelman", "semigroup", "--r", "2", "--s", "2")
        assert excinfo.value.returncode == 2
