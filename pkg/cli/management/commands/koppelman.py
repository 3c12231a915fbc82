import argparse
import csv
import io
import logging
from pathlib import Path

import numpy as np
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers
from rest_framework.renderers import JSONRenderer

from cli.serializers import CommandSerializer, parse_complex
from core.exceptions import ConvergenceError
from curves.pullback import pullback
from curves.semigroups import semigroup
from curves.serializers import SemigroupInfoSerializer
from differentials.parser import parse_expr
from kernels.models import KernelContext
from operators.integrals import moment_check, represent_boundary_many, solve_area
from operators.serializers import (
    GrowthReportSerializer,
    MomentReportSerializer,
    SolveValueSerializer,
)
from operators.verification import growth_profile, koppelman_residuals
from quadrature.models import PVConfig

logger = logging.getLogger(__name__)

SOLVE_COLUMNS = ["t_re", "t_im", "u_re", "u_im"]


def _complex_arg(text):
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _radii_arg(text):
    return [float(x) for x in text.split(",") if x.strip()]


class Command(BaseCommand):
    help = (
        "Koppelman operators on singular plane curves: semigroup, represent, "
        "solve, moment, verify, growth. Negative complex values are passed as "
        "--t=-0.4i."
    )
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument("verb", choices=CommandSerializer.VERBS)
        parser.add_argument("--r", type=int, help="Cusp exponent r")
        parser.add_argument("--s", type=int, help="Cusp exponent s")
        parser.add_argument("--curve", help="'smooth', 'r,s', a curve JSON file or inline JSON")
        parser.add_argument("--phi", help="Function or (0,1)-form in tau")
        parser.add_argument("--ambient", help="Expression in z1, z2, ~z1, ~z2 pulled back to the curve")
        parser.add_argument("--rho", type=float, help="Outer radius")
        parser.add_argument("--eps", type=float, help="Moment circle radius")
        parser.add_argument("--mu", type=int, default=0, help="Weight power")
        parser.add_argument("--nodes", type=int, help="Circle rule nodes")
        parser.add_argument("--panels", type=int, help="Radial Gauss-Legendre panels")
        parser.add_argument("--order", type=int, help="Gauss-Legendre order per panel")
        parser.add_argument("--theta", type=int, help="Angular nodes of the annulus rule")
        parser.add_argument("--t", type=_complex_arg, action="append", help="Target, e.g. 0.2+0.1i")
        parser.add_argument("--ray", type=float, default=0.0, help="Ray direction for growth")
        parser.add_argument(
            "--radii",
            type=_radii_arg,
            default=[0.1 * 2.0 ** -k for k in range(6)],
            help="Comma-separated radii for growth",
        )
        parser.add_argument("--h", type=float, help="Finite-difference step")
        parser.add_argument("--eps0", type=float, help="Principal value: first inner radius")
        parser.add_argument("--shrink", type=float, help="Principal value: shrink factor")
        parser.add_argument("--tol", type=float, help="Principal value: stopping tolerance")
        parser.add_argument("--format", choices=["json", "csv"], help="Output format")
        parser.add_argument("--out", help="Write the report to this file instead of stdout")
        parser.add_argument("--table", help="growth: also write the log_r,log_abs_u rows here")

    def handle(self, *args, **options):
        if options["verbosity"] >= 2:
            logging.getLogger().setLevel(logging.DEBUG if options["verbosity"] >= 3 else logging.INFO)
        try:
            serializer = CommandSerializer(data={k: v for k, v in options.items() if v is not None})
            serializer.is_valid(raise_exception=True)
            command = serializer.validated_data
            output = getattr(self, f"run_{command['verb']}")(command, options)
        except (ValidationError, serializers.ValidationError) as exc:
            raise CommandError(_describe(exc), returncode=2)
        except ConvergenceError as exc:
            raise CommandError(str(exc), returncode=3)
        self._emit(output, options.get("out"))

    def _emit(self, text, out):
        if out:
            Path(out).write_text(text)
        else:
            self.stdout.write(text, ending="" if text.endswith("\n") else "\n")

    def _form(self, command, degree):
        curve = command["curve"]
        if command.get("phi"):
            form = parse_expr(command["phi"])
        else:
            form = pullback(command["ambient"], curve)
        if form.degree != degree:
            kind = "a function" if degree == 0 else "a (0,1)-form (append ', dbar')"
            raise ValidationError(f"Expected {kind}.", code="bad_degree")
        return form

    def _context(self, command):
        return KernelContext.create(command["curve"], command.get("mu", 0))

    def _solve_options(self, command):
        return {
            "rho": command.get("rho"),
            "panels": command.get("panels"),
            "order": command.get("order"),
            "n_theta": command.get("theta"),
            "pv": PVConfig.create(command.get("eps0"), command.get("shrink"), None, command.get("tol")),
        }

    def run_semigroup(self, command, options):
        info = semigroup(command["r"], command["s"])
        return _json(SemigroupInfoSerializer(info).data)

    def run_represent(self, command, options):
        phi = parse_expr(command["phi"])
        report = represent_boundary_many(command["curve"], phi, command["rho"], command["t"], command.get("nodes"))
        return self._table(report.values, options, SOLVE_COLUMNS)

    def run_solve(self, command, options):
        report = solve_area(self._context(command), self._form(command, 1), command["t"], **self._solve_options(command))
        return self._table(report.values, options, SOLVE_COLUMNS)

    def run_verify(self, command, options):
        report = koppelman_residuals(
            self._context(command),
            self._form(command, 1),
            command["t"],
            command.get("h"),
            **self._solve_options(command),
        )
        logger.info("maximum Koppelman residual %.3e", report.max_residual)
        return self._table(report.values, options, SOLVE_COLUMNS + ["residual"])

    def run_moment(self, command, options):
        eps = command.get("eps")
        if eps is None:
            eps = 0.5
        report = moment_check(command["curve"], self._form(command, 0), eps, command.get("nodes"))
        return _json(MomentReportSerializer(report).data)

    def run_growth(self, command, options):
        ctx = self._context(command)
        phi = self._form(command, 1)
        solve_options = self._solve_options(command)

        def u(points):
            report = solve_area(ctx, phi, points, **solve_options)
            return np.array([value.u for value in report.values])

        report = growth_profile(u, command["ray"], command["radii"])
        if options.get("table"):
            rows = io.StringIO()
            writer = csv.writer(rows, lineterminator="\n")
            writer.writerow(["log_r", "log_abs_u"])
            writer.writerows(zip(report.log_r, report.log_abs_u))
            Path(options["table"]).write_text(rows.getvalue())
        return _json(GrowthReportSerializer(report).data)

    def _table(self, values, options, columns):
        rows = SolveValueSerializer(values, many=True).data
        if options.get("format") == "json":
            return _json({"values": [{key: row[key] for key in columns} for row in rows]})
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([repr(float(row[key])) for key in columns])
        return buffer.getvalue()


def _json(data) -> str:
    return JSONRenderer().render(data, renderer_context={"indent": 2}).decode() + "\n"


def _describe(exc) -> str:
    if isinstance(exc, serializers.ValidationError):
        return f"Invalid options: {exc.detail}"
    return "; ".join(exc.messages)
