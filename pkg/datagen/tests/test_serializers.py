import numpy as np

from datagen.serializers import MixtureSpecSerializer


class TestMixtureSpecSerializer:
    """MixtureSpecSerializer 테스트"""

    def test_explicit_means(self):
        """means 를 직접 지정"""
        serializer = MixtureSpecSerializer(data={
            'per_class_source': '3, 3',
            'per_class_target': '2, 2',
            'means': '0, 0; 5, 5',
        })
        assert serializer.is_valid(), serializer.errors
        spec, budget = serializer.build(seed=0)
        assert spec.K == 2 and spec.d == 2
        assert budget.m == 6 and budget.n == 4
        assert np.allclose(spec.means, [[0, 0], [5, 5]])
        assert np.allclose(spec.target_props.theta, [0.5, 0.5])

    def test_drawn_means(self):
        """means 생략 시 seed 로 추출"""
        data = {'per_class_source': '2, 2, 2', 'per_class_target': '1, 2, 3', 'dimension': '4'}
        first = MixtureSpecSerializer(data=data)
        second = MixtureSpecSerializer(data=data)
        assert first.is_valid() and second.is_valid()
        assert np.array_equal(first.build(seed=3)[0].means, second.build(seed=3)[0].means)
        assert first.build(seed=3)[0].d == 4

    def test_class_count_mismatch(self):
        """source / target 클래스 수 불일치"""
        serializer = MixtureSpecSerializer(data={'per_class_source': '3, 3', 'per_class_target': '2', 'dimension': 2})
        assert not serializer.is_valid()

    def test_needs_means_or_dimension(self):
        """means 와 dimension 모두 없음"""
        serializer = MixtureSpecSerializer(data={'per_class_source': '3', 'per_class_target': '2'})
        assert not serializer.is_valid()

    def test_props_must_sum_to_one(self):
        """비율 합 != 1"""
        serializer = MixtureSpecSerializer(data={
            'per_class_source': '3, 3', 'per_class_target': '2, 2', 'dimension': 2, 'target_props': '0.5, 0.6',
        })
        assert not serializer.is_valid()

    def test_non_positive_sigma(self):
        """sigma <= 0"""
        serializer = MixtureSpecSerializer(data={
            'per_class_source': '3', 'per_class_target': '2', 'dimension': 2, 'sigma': '0',
        })
        assert not serializer.is_valid()
