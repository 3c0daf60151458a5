from rest_framework import serializers

from common.serializer_fields import BooleanStringField, CommaSeparatedListField, IterationBudgetField
from estimator.domain import DescentConfig, LossKind, LossSpec


class LossSpecSerializer(serializers.Serializer):
    """--loss / --lambda / --iters / --tol"""

    loss = serializers.ChoiceField(choices=[kind.value for kind in LossKind])
    lam = serializers.FloatField(required=False, allow_null=True)
    iters = IterationBudgetField(required=False, allow_null=True, default=None)
    tol = serializers.FloatField(required=False, allow_null=True, default=None)

    def validate_tol(self, value):
        if value is not None and value <= 0:
            raise serializers.ValidationError("tolerance 는 0보다 커야 합니다")
        return value

    def validate(self, attrs):
        if attrs['loss'] != LossKind.W0.value:
            lam = attrs.get('lam')
            if lam is None or lam <= 0:
                raise serializers.ValidationError({'lam': f"{attrs['loss']} 손실에는 0보다 큰 lambda 가 필요합니다"})
        return attrs

    def build(self):
        data = self.validated_data
        return LossSpec(data['loss'], lam=data.get('lam'), iteration_budget=data.get('iters'))


class DescentConfigSerializer(serializers.Serializer):
    step_size = serializers.FloatField(required=False, allow_null=True, default=None)
    max_outer_iterations = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    theta_tolerance = serializers.FloatField(required=False, allow_null=True, default=None)
    backtracking_factor = serializers.FloatField(required=False, allow_null=True, default=None)
    max_halvings = serializers.IntegerField(min_value=0, required=False, allow_null=True, default=None)
    seed_theta = CommaSeparatedListField(child=serializers.FloatField(min_value=0.0), required=False,
                                         allow_null=True, default=None)
    warm_start = BooleanStringField(required=False, default=True)
    tolerance = serializers.FloatField(required=False, allow_null=True, default=None)

    def validate(self, attrs):
        for name in ('step_size', 'theta_tolerance', 'tolerance'):
            if attrs.get(name) is not None and attrs[name] <= 0:
                raise serializers.ValidationError({name: "0보다 커야 합니다"})
        factor = attrs.get('backtracking_factor')
        if factor is not None and not 0 < factor < 1:
            raise serializers.ValidationError({'backtracking_factor': "(0, 1) 범위여야 합니다"})
        seed = attrs.get('seed_theta')
        if seed is not None and abs(sum(seed) - 1.0) > 1e-8:
            raise serializers.ValidationError({'seed_theta': "합이 1이어야 합니다"})
        return attrs

    def build(self):
        data = self.validated_data
        return DescentConfig(
            step_size=data.get('step_size'),
            max_outer_iterations=data.get('max_outer_iterations'),
            theta_tolerance=data.get('theta_tolerance'),
            backtracking_factor=data.get('backtracking_factor'),
            max_halvings=data.get('max_halvings'),
            seed_theta=data.get('seed_theta') or 'uniform',
            warm_start=data.get('warm_start', True),
            sinkhorn_tolerance=data.get('tolerance'),
        )
