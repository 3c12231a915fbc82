from rest_framework import serializers

from polyalg.serializers import BiPolySerializer, UniPolySerializer
from .models import CuspCurve, ParamCurve


class CurveSerializer(serializers.Serializer):
    """Curve JSON: {"type": "cusp", "r", "s"} or {"type": "param", "pi1", "pi2", "f"}."""

    CURVE_TYPES = (
        ("cusp", "Cusp"),
        ("param", "Parametrized"),
    )

    type = serializers.ChoiceField(choices=CURVE_TYPES)
    r = serializers.IntegerField(required=False)
    s = serializers.IntegerField(required=False)
    pi1 = UniPolySerializer(required=False)
    pi2 = UniPolySerializer(required=False)
    f = BiPolySerializer(required=False)

    def validate(self, data):
        """Check type-specific keys and the curve invariants."""
        if data["type"] == "cusp":
            missing = [key for key in ("r", "s") if key not in data]
            if missing:
                raise serializers.ValidationError(f"Cusp curve requires {', '.join(missing)}.")
            curve = CuspCurve(data["r"], data["s"])
        else:
            missing = [key for key in ("pi1", "pi2", "f") if key not in data]
            if missing:
                raise serializers.ValidationError(
                    f"Parametrized curve requires {', '.join(missing)}."
                )
            curve = ParamCurve(
                UniPolySerializer().create(data["pi1"]),
                UniPolySerializer().create(data["pi2"]),
                BiPolySerializer().create(data["f"]),
            )
        curve.clean()
        data["curve"] = curve
        return data

    def create(self, validated_data):
        return validated_data["curve"]

    def to_representation(self, instance):
        if isinstance(instance, CuspCurve):
            return {"type": "cusp", "r": instance.r, "s": instance.s}
        return {
            "type": "param",
            "pi1": UniPolySerializer(instance.pi1).data,
            "pi2": UniPolySerializer(instance.pi2).data,
            "f": BiPolySerializer(instance.f).data,
        }


class SemigroupInfoSerializer(serializers.Serializer):
    frobenius = serializers.IntegerField(read_only=True)
    gaps = serializers.ListField(child=serializers.IntegerField(), read_only=True)
