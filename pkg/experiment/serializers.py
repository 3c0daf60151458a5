"""
Validation of experiment config files (flat key=value, flags override file values).

    lambda_grid = 0.01, 0.1, 1.0
    losses = W0, Wlambda, Slambda
    iteration_budgets = none, 5
    repetitions = 20
"""
from rest_framework import serializers

from common.config_file import read_key_value_file
from common.serializer_fields import CommaSeparatedListField, IterationBudgetField
from datagen.generator import default_reference_spec
from datagen.serializers import MixtureSpecSerializer
from estimator.domain import LossKind
from estimator.serializers import DescentConfigSerializer
from experiment.domain import EXECUTORS, SweepConfig
from experiment.harness import IngestedData, SimulatedData
from measures.domain import LabeledSample
from measures.io import read_source_csv, read_target_csv
from ot_core.bounds import SCHEDULE_VARIANTS

CONFIG_KEYS = (
    'lambda_grid', 'losses', 'iteration_budgets', 'repetitions', 'base_seed', 'theta_star',
    'spec_file', 'source_csv', 'target_csv', 'per_class_source', 'n_target',
    'step_size', 'max_outer_iterations', 'theta_tolerance', 'backtracking_factor', 'max_halvings', 'tolerance',
    'threads', 'executor', 'lambda_schedule', 'iteration_schedule', 'schedule_radius',
)

DESCENT_KEYS = ('step_size', 'max_outer_iterations', 'theta_tolerance', 'backtracking_factor', 'max_halvings',
                'tolerance')


class SweepConfigSerializer(serializers.Serializer):
    lambda_grid = CommaSeparatedListField(child=serializers.FloatField(), required=False, min_length=1)
    losses = CommaSeparatedListField(child=serializers.ChoiceField(choices=[kind.value for kind in LossKind]),
                                     required=False, min_length=1)
    iteration_budgets = CommaSeparatedListField(child=IterationBudgetField(allow_null=True), required=False,
                                                min_length=1)
    repetitions = serializers.IntegerField(min_value=1, default=1)
    base_seed = serializers.IntegerField(min_value=0, default=0)
    theta_star = CommaSeparatedListField(child=serializers.FloatField(min_value=0.0), required=False)

    spec_file = serializers.CharField(required=False)
    source_csv = serializers.CharField(required=False)
    target_csv = serializers.CharField(required=False)
    per_class_source = serializers.IntegerField(min_value=1, required=False)
    n_target = serializers.IntegerField(min_value=1, required=False)

    step_size = serializers.FloatField(required=False)
    max_outer_iterations = serializers.IntegerField(min_value=1, required=False)
    theta_tolerance = serializers.FloatField(required=False)
    backtracking_factor = serializers.FloatField(required=False)
    max_halvings = serializers.IntegerField(min_value=0, required=False)
    tolerance = serializers.FloatField(required=False)

    threads = serializers.IntegerField(min_value=1, default=1)
    executor = serializers.ChoiceField(choices=EXECUTORS, default='threads')
    lambda_schedule = serializers.ChoiceField(choices=SCHEDULE_VARIANTS, required=False)
    iteration_schedule = serializers.ChoiceField(choices=SCHEDULE_VARIANTS, required=False)
    schedule_radius = serializers.FloatField(min_value=0.0, default=1.0)

    def validate_lambda_grid(self, value):
        if any(lam <= 0 for lam in value):
            raise serializers.ValidationError("lambda 는 0보다 커야 합니다")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise serializers.ValidationError("lambda grid 는 순증가해야 합니다")
        return value

    def validate(self, attrs):
        if ('source_csv' in attrs) != ('target_csv' in attrs):
            raise serializers.ValidationError("source_csv 와 target_csv 는 함께 지정해야 합니다")
        if 'source_csv' in attrs and 'spec_file' in attrs:
            raise serializers.ValidationError("spec_file 과 source_csv 는 동시에 사용할 수 없습니다")
        if 'source_csv' not in attrs and ('per_class_source' in attrs or 'n_target' in attrs):
            raise serializers.ValidationError("per_class_source / n_target 은 CSV 입력에서만 사용합니다")

        theta_star = attrs.get('theta_star')
        if theta_star is not None and abs(sum(theta_star) - 1.0) > 1e-8:
            raise serializers.ValidationError({'theta_star': "합이 1이어야 합니다"})

        descent = DescentConfigSerializer(data={key: attrs[key] for key in DESCENT_KEYS if key in attrs})
        descent.is_valid(raise_exception=True)
        attrs['descent'] = descent
        return attrs

    def build_provider(self):
        """
        Returns:
            SimulatedData 또는 IngestedData
        """
        data = self.validated_data
        if 'source_csv' in data:
            source = read_source_csv(data['source_csv'])
            target, labels = read_target_csv(data['target_csv'], with_labels=True)
            if labels is None:
                raise serializers.ValidationError(
                    {'target_csv': "실측 데이터 실험에는 theta* 계산을 위한 label 열이 필요합니다"})
            return IngestedData(
                source,
                LabeledSample(target.points, labels, n_classes=source.n_classes),
                per_class_source=data.get('per_class_source'),
                n_target=data.get('n_target'),
            )

        if 'spec_file' in data:
            spec_serializer = MixtureSpecSerializer(data=read_key_value_file(data['spec_file']))
            spec_serializer.is_valid(raise_exception=True)
            spec, budget = spec_serializer.build(seed=data['base_seed'])
        else:
            spec, budget = default_reference_spec(data['base_seed'])
        return SimulatedData(spec, budget)

    def build(self):
        """
        Returns:
            SweepConfig
        """
        data = self.validated_data
        options = {
            'repetitions': data['repetitions'],
            'base_seed': data['base_seed'],
            'descent': data['descent'].build(),
            'threads': data['threads'],
            'executor': data['executor'],
            'lambda_schedule': data.get('lambda_schedule'),
            'iteration_schedule': data.get('iteration_schedule'),
            'schedule_radius': data['schedule_radius'],
        }
        for key in ('lambda_grid', 'losses', 'iteration_budgets', 'theta_star'):
            if data.get(key) is not None:
                options[key] = tuple(data[key])
        return SweepConfig(**options)
