from rest_framework import serializers


class MomentEntrySerializer(serializers.Serializer):
    j = serializers.IntegerField()
    re = serializers.FloatField(source="value.real")
    im = serializers.FloatField(source="value.imag")
    zero = serializers.BooleanField()


class MomentReportSerializer(serializers.Serializer):
    """{"entries": [{"j", "re", "im", "zero"}], "verdict": bool, ...}."""

    entries = MomentEntrySerializer(many=True)
    verdict = serializers.BooleanField()
    eps_used = serializers.FloatField()
    eps_check = serializers.FloatField()


class SolveValueSerializer(serializers.Serializer):
    """One CSV row: t_re, t_im, u_re, u_im and an optional residual."""

    t_re = serializers.FloatField(source="t.real")
    t_im = serializers.FloatField(source="t.imag")
    u_re = serializers.FloatField(source="u.real")
    u_im = serializers.FloatField(source="u.imag")
    residual = serializers.FloatField(allow_null=True, required=False)
    pv_increment = serializers.FloatField(allow_null=True, required=False)


class GrowthReportSerializer(serializers.Serializer):
    slope = serializers.FloatField()
    residual = serializers.FloatField()
