"""
Validation of mixture spec files for the simulate / experiment commands.

    per_class_source = 3, 3
    per_class_target = 2, 2
    dimension = 2
    sigma = 1.0
    # means = 0, 0; 5, 5      (생략하면 seed 로 분리된 평균을 추출)
"""
import numpy as np
from rest_framework import serializers

from common.serializer_fields import CommaSeparatedListField, MatrixField
from datagen.domain import GaussianMixtureSpec, SampleBudget
from datagen.generator import separated_means
from datagen.rng import MEANS_STREAM, RandomStream
from measures.domain import SimplexVector


class MixtureSpecSerializer(serializers.Serializer):
    per_class_source = CommaSeparatedListField(child=serializers.IntegerField(min_value=1), min_length=1)
    per_class_target = CommaSeparatedListField(child=serializers.IntegerField(min_value=1), min_length=1)
    dimension = serializers.IntegerField(min_value=1, required=False)
    sigma = serializers.FloatField(min_value=0.0, default=1.0)
    means = MatrixField(required=False)
    means_seed = serializers.IntegerField(min_value=0, required=False)
    source_props = CommaSeparatedListField(child=serializers.FloatField(min_value=0.0), required=False)
    target_props = CommaSeparatedListField(child=serializers.FloatField(min_value=0.0), required=False)

    def validate_sigma(self, value):
        if value <= 0:
            raise serializers.ValidationError("sigma 는 0보다 커야 합니다")
        return value

    def validate(self, attrs):
        k = len(attrs['per_class_source'])
        if len(attrs['per_class_target']) != k:
            raise serializers.ValidationError("per_class_source 와 per_class_target 의 클래스 수가 다릅니다")

        means = attrs.get('means')
        if means is None and 'dimension' not in attrs:
            raise serializers.ValidationError("means 또는 dimension 중 하나는 필요합니다")
        if means is not None:
            if len(means) != k:
                raise serializers.ValidationError(f"means 는 {k} 개의 행이 필요합니다")
            if 'dimension' in attrs and len(means[0]) != attrs['dimension']:
                raise serializers.ValidationError("means 의 열 수가 dimension 과 다릅니다")

        for name in ('source_props', 'target_props'):
            props = attrs.get(name)
            if props is not None:
                if len(props) != k:
                    raise serializers.ValidationError(f"{name} 는 {k} 개의 값이 필요합니다")
                if abs(sum(props) - 1.0) > 1e-8:
                    raise serializers.ValidationError(f"{name} 의 합이 1이 아닙니다")
        return attrs

    def build(self, seed):
        """
        Returns:
            (GaussianMixtureSpec, SampleBudget)
        """
        data = self.validated_data
        k = len(data['per_class_source'])
        sigma = data['sigma']
        if data.get('means') is not None:
            means = np.asarray(data['means'])
        else:
            stream = RandomStream(data.get('means_seed', seed), stream=MEANS_STREAM)
            means = separated_means(stream, k, data['dimension'], sigma)

        budget = SampleBudget(data['per_class_source'], data['per_class_target'])
        spec = GaussianMixtureSpec(
            means=means,
            sigma=sigma,
            source_props=SimplexVector(data['source_props']) if 'source_props' in data
            else SimplexVector.from_counts(budget.per_class_source),
            target_props=SimplexVector(data['target_props']) if 'target_props' in data
            else SimplexVector.from_counts(budget.per_class_target),
        )
        return spec, budget
