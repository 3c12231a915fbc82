import json
import re
from pathlib import Path

from rest_framework import serializers

from curves.models import CuspCurve, make_curve, smooth_model

COMPLEX_RE = re.compile(r"^[+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:[+-](?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?i|i)?$")


def parse_complex(text: str) -> complex:
    """Read an 'a+bi' literal; 'i', '-i', '0.3' and '-0.4i' are accepted too."""
    compact = str(text).replace(" ", "")
    if not compact or not COMPLEX_RE.match(compact):
        raise ValueError(f"not a complex literal: {text!r}")
    compact = re.sub(r"(^|[+-])i$", r"\g<1>1i", compact)
    return complex(compact.replace("i", "j"))


class ComplexField(serializers.Field):
    def to_internal_value(self, data):
        if isinstance(data, (complex, float, int)):
            return complex(data)
        try:
            return parse_complex(data)
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))

    def to_representation(self, value):
        return [value.real, value.imag]


class CommandSerializer(serializers.Serializer):
    """Options of one ``koppelman`` invocation, checked per verb."""

    VERBS = ("semigroup", "represent", "solve", "moment", "verify", "growth")

    # options each verb cannot do without; a tuple means "one of"
    REQUIRED = {
        "semigroup": ("r", "s"),
        "represent": ("curve", "phi", "t"),
        "solve": ("curve", ("phi", "ambient"), "t"),
        "moment": ("curve", "phi"),
        "verify": ("curve", ("phi", "ambient"), "t"),
        "growth": ("curve", ("phi", "ambient")),
    }
    POSITIVE = ("rho", "eps", "h", "eps0")

    verb = serializers.ChoiceField(choices=VERBS)
    r = serializers.IntegerField(required=False, allow_null=True)
    s = serializers.IntegerField(required=False, allow_null=True)
    curve = serializers.CharField(required=False, allow_null=True)
    phi = serializers.CharField(required=False, allow_null=True)
    ambient = serializers.CharField(required=False, allow_null=True)
    rho = serializers.FloatField(required=False, allow_null=True)
    eps = serializers.FloatField(required=False, allow_null=True)
    mu = serializers.IntegerField(required=False, default=0, min_value=0)
    nodes = serializers.IntegerField(required=False, allow_null=True, min_value=1)
    panels = serializers.IntegerField(required=False, allow_null=True, min_value=1)
    order = serializers.IntegerField(required=False, allow_null=True, min_value=1)
    theta = serializers.IntegerField(required=False, allow_null=True, min_value=1)
    t = serializers.ListField(child=ComplexField(), required=False, allow_null=True)
    ray = serializers.FloatField(required=False, default=0.0)
    radii = serializers.ListField(child=serializers.FloatField(min_value=0), required=False, allow_null=True)
    h = serializers.FloatField(required=False, allow_null=True)
    eps0 = serializers.FloatField(required=False, allow_null=True)
    shrink = serializers.FloatField(required=False, allow_null=True)
    tol = serializers.FloatField(required=False, allow_null=True, min_value=0)

    def validate(self, data):
        """Resolve the curve and check the verb's required options."""
        if data.get("curve") is None and data.get("r") is not None and data.get("s") is not None:
            data["curve"] = f"{data['r']},{data['s']}"
        missing = []
        for option in self.REQUIRED[data["verb"]]:
            names = option if isinstance(option, tuple) else (option,)
            if all(data.get(name) in (None, []) for name in names):
                missing.append(" or ".join(f"--{name}" for name in names))
        if missing:
            raise serializers.ValidationError(f"{data['verb']} requires {', '.join(missing)}.")
        non_positive = [
            f"--{name}" for name in self.POSITIVE if data.get(name) is not None and not data[name] > 0
        ]
        if non_positive:
            raise serializers.ValidationError(f"{', '.join(non_positive)} must be positive.")
        if data["verb"] == "represent" and data.get("rho") is None:
            data["rho"] = 1.0
        if data["verb"] != "semigroup":
            data["curve"] = self.build_curve(data["curve"])
        if data["verb"] == "moment" and not isinstance(data["curve"], CuspCurve):
            raise serializers.ValidationError("moment requires a cusp curve (--r, --s).")
        return data

    @staticmethod
    def build_curve(spec: str):
        """'smooth', 'r,s', a curve JSON file or inline curve JSON."""
        spec = spec.strip()
        if spec == "smooth":
            return smooth_model()
        if re.fullmatch(r"\d+\s*,\s*\d+", spec):
            r, s = (int(x) for x in spec.split(","))
            return make_curve((r, s))
        if not spec.startswith("{"):
            path = Path(spec)
            if not path.exists():
                raise serializers.ValidationError(f"Curve file {spec} does not exist.")
            spec = path.read_text()
        try:
            payload = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise serializers.ValidationError(f"Curve JSON is malformed: {exc}")
        return make_curve(payload)
