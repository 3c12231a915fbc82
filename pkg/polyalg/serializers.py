from rest_framework import serializers

from .polynomials import BiPoly, UniPoly


class FixedLengthFloatListField(serializers.ListField):
    """A list of exactly ``length`` floats.

    The length is checked on the parsed list, before it is turned into a
    value object.
    """

    child = serializers.FloatField()
    length = 0

    def to_internal_value(self, data):
        values = super().to_internal_value(data)
        if len(values) != self.length:
            raise serializers.ValidationError(
                f"Expected {self.length} numbers, got {len(values)}.", code="length"
            )
        return values


class ComplexPairField(FixedLengthFloatListField):
    """A complex number written as [re, im]."""

    length = 2

    def to_internal_value(self, data):
        re, im = super().to_internal_value(data)
        return complex(re, im)

    def to_representation(self, value):
        value = complex(value)
        return [value.real, value.imag]


class UniPolySerializer(serializers.Serializer):
    """{"coeffs": [[re, im], ...]} in ascending degree."""

    coeffs = serializers.ListField(child=ComplexPairField(), allow_empty=True)

    def create(self, validated_data) -> UniPoly:
        return UniPoly(validated_data["coeffs"])

    def to_representation(self, instance: UniPoly):
        return {"coeffs": [[c.real, c.imag] for c in instance.coeffs]}


class BiPolyTermField(FixedLengthFloatListField):
    """One term [i, j, re, im]."""

    length = 4

    def to_internal_value(self, data):
        i, j, re, im = super().to_internal_value(data)
        if i != int(i) or j != int(j) or i < 0 or j < 0:
            raise serializers.ValidationError("Exponents must be non-negative integers.")
        return (int(i), int(j), complex(re, im))


class BiPolySerializer(serializers.Serializer):
    """{"terms": [[i, j, re, im], ...]}."""

    terms = serializers.ListField(child=BiPolyTermField(), allow_empty=True)

    def validate_terms(self, terms):
        seen = set()
        for i, j, _ in terms:
            if (i, j) in seen:
                raise serializers.ValidationError(f"Duplicate term z1^{i} z2^{j}.")
            seen.add((i, j))
        return terms

    def create(self, validated_data) -> BiPoly:
        return BiPoly(tuple(validated_data["terms"]))

    def to_representation(self, instance: BiPoly):
        return {"terms": [[i, j, c.real, c.imag] for i, j, c in instance.terms]}
