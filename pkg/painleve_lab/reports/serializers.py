from dataclasses import dataclass, field

from mpmath import mp, mpf
from rest_framework import serializers

from moments.tables import WeightParams
from numerics.conf import default_tolerances, lab_setting
from numerics.precision import MIN_PRECISION_BITS, precision, significant_digits

# Decimal input is read this wide and rounded once the working precision is known
PARSE_PRECISION_BITS = 1024


class ExtRealField(serializers.Field):
    """
    Real number exchanged as a decimal string.

    Values render with the number of significant digits given by the
    ``digits`` serializer context, so CSV and JSON carry the same text.
    """

    default_error_messages = {"invalid": "A valid real number is required."}

    def to_internal_value(self, data):
        if isinstance(data, bool):
            self.fail("invalid")
        try:
            with mp.workprec(PARSE_PRECISION_BITS):
                value = mpf(data.strip() if isinstance(data, str) else data)
        except (TypeError, ValueError):
            self.fail("invalid")
        if not mp.isfinite(value):
            self.fail("invalid")
        return value

    def to_representation(self, value):
        digits = self.context.get("digits") or significant_digits()
        if not isinstance(value, mpf):
            value = mpf(value)
        return mp.nstr(value, digits, min_fixed=-4, max_fixed=digits)


@dataclass(frozen=True)
class RunConfig:
    alpha: mpf
    t_grid: tuple
    n_max: int
    precision_bits: int
    h: mpf = None
    tolerances: dict = field(default_factory=dict)
    output_format: str = "csv"
    workers: int = 1
    fault: bool = False

    def params(self, t):
        with precision(self.precision_bits):
            return WeightParams(+self.alpha, +mpf(t))

    @property
    def digits(self):
        return significant_digits(self.precision_bits)


class RunConfigSerializer(serializers.Serializer):
    """
    Validate command options into a RunConfig.

    Pass ``min_n_max`` in the context to relax the lower bound on n_max.
    """

    alpha = ExtRealField()
    t = ExtRealField(required=False, allow_null=True, default=None)
    t_min = ExtRealField(required=False, allow_null=True, default=None)
    t_max = ExtRealField(required=False, allow_null=True, default=None)
    t_steps = serializers.IntegerField(min_value=1, default=1)
    n_max = serializers.IntegerField()
    precision_bits = serializers.IntegerField(
        min_value=MIN_PRECISION_BITS, required=False, allow_null=True, default=None
    )
    h = ExtRealField(required=False, allow_null=True, default=None)
    tolerances = serializers.DictField(child=ExtRealField(), default=dict)
    output_format = serializers.ChoiceField(choices=["csv", "json"], default="csv")
    workers = serializers.IntegerField(min_value=1, default=1)
    fault = serializers.BooleanField(default=False)

    def validate_alpha(self, value):
        if not value > -1:
            raise serializers.ValidationError("alpha must exceed -1.")
        return value

    def validate_n_max(self, value):
        minimum = self.context.get("min_n_max", 1)
        if value < minimum:
            raise serializers.ValidationError(f"n_max must be at least {minimum}.")
        return value

    def validate_h(self, value):
        if value is not None and not value > 0:
            raise serializers.ValidationError("h must be positive.")
        return value

    def validate_tolerances(self, value):
        known = default_tolerances()
        unknown = sorted(set(value) - set(known))
        if unknown:
            raise serializers.ValidationError(f"unknown tolerances: {unknown}")
        if any(not tolerance > 0 for tolerance in value.values()):
            raise serializers.ValidationError("tolerances must be positive.")
        return value

    def validate(self, data):
        grid = (data["t_min"], data["t_max"])
        if data["t"] is not None:
            if any(bound is not None for bound in grid):
                raise serializers.ValidationError(
                    "give either t or t_min/t_max, not both."
                )
            if data["t_steps"] != 1:
                raise serializers.ValidationError("t_steps needs t_min and t_max.")
        elif any(bound is None for bound in grid):
            raise serializers.ValidationError(
                "t or both t_min and t_max are required."
            )
        elif data["t_max"] < data["t_min"]:
            raise serializers.ValidationError("t_max must not be below t_min.")
        elif data["t_steps"] == 1 and data["t_max"] != data["t_min"]:
            raise serializers.ValidationError(
                "a single t step needs t_min == t_max."
            )
        return data

    def create(self, validated_data):
        bits = validated_data["precision_bits"] or lab_setting("PRECISION_BITS")
        with precision(bits):
            if validated_data["t"] is not None:
                grid = (+validated_data["t"],)
            else:
                low, high = validated_data["t_min"], validated_data["t_max"]
                steps = validated_data["t_steps"]
                if steps == 1:
                    grid = (+low,)
                else:
                    grid = tuple(
                        low + (high - low) * k / (steps - 1) for k in range(steps)
                    )
            tolerances = {
                key: mpf(value) for key, value in default_tolerances().items()
            }
            tolerances.update(
                {key: +value for key, value in validated_data["tolerances"].items()}
            )
            h = validated_data["h"]
            return RunConfig(
                alpha=+validated_data["alpha"],
                t_grid=grid,
                n_max=validated_data["n_max"],
                precision_bits=bits,
                h=None if h is None else +h,
                tolerances=tolerances,
                output_format=validated_data["output_format"],
                workers=validated_data["workers"],
                fault=validated_data["fault"],
            )


class CoeffRowSerializer(serializers.Serializer):
    t = ExtRealField()
    n = serializers.IntegerField()
    a2 = ExtRealField()
    b = ExtRealField()


class RouteComparisonRowSerializer(serializers.Serializer):
    t = ExtRealField()
    n = serializers.IntegerField()
    a2_hankel = ExtRealField(allow_null=True)
    a2_discrete = ExtRealField(allow_null=True)
    a2_diff = ExtRealField(allow_null=True)
    b_hankel = ExtRealField()
    b_discrete = ExtRealField()
    b_diff = ExtRealField()


class CheckRowSerializer(serializers.Serializer):
    suite = serializers.CharField()
    identity = serializers.CharField()
    n = serializers.IntegerField()
    t = ExtRealField()
    z = ExtRealField(allow_null=True)
    residual = ExtRealField()
    tolerance = ExtRealField()
    passed = serializers.BooleanField()


class QRowSerializer(serializers.Serializer):
    t = ExtRealField()
    z = ExtRealField()
    n = serializers.IntegerField()
    q = ExtRealField()
    q1 = ExtRealField()


class FreudRowSerializer(serializers.Serializer):
    t = ExtRealField()
    n = serializers.IntegerField()
    A2 = ExtRealField()
