import numpy as np
import pytest

from common.exceptions import (
    DimensionMismatchError,
    InvalidMeasureError,
    InvalidSimplexError,
    NonFiniteError,
    UnknownClassError,
)
from factories import DiscreteMeasureFactory, LabeledSampleFactory
from measures.domain import DiscreteMeasure, LabeledSample, MixtureModel, SimplexVector


class TestDiscreteMeasure:
    """DiscreteMeasure 테스트"""

    def test_uniform_weights(self):
        """균등 가중치 생성"""
        measure = DiscreteMeasure.uniform([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        assert measure.n == 4
        assert measure.d == 2
        assert np.allclose(measure.weights, 0.25)

    def test_one_dimensional_points_become_column(self):
        """1차원 입력은 n x 1 행렬"""
        measure = DiscreteMeasure.uniform([0.0, 3.0])
        assert measure.points.shape == (2, 1)

    def test_weights_renormalized_within_slack(self):
        """허용 오차 안의 합계는 재정규화"""
        measure = DiscreteMeasure([[0.0], [1.0]], [0.5, 0.5 + 1e-10])
        assert abs(measure.weights.sum() - 1.0) <= 1e-12

    def test_weights_not_summing_to_one(self):
        """합이 1이 아닌 가중치 거부"""
        with pytest.raises(InvalidMeasureError):
            DiscreteMeasure([[0.0], [1.0]], [0.5, 0.6])

    def test_negative_weight(self):
        """음수 가중치 거부"""
        with pytest.raises(InvalidMeasureError):
            DiscreteMeasure([[0.0], [1.0]], [1.5, -0.5])

    def test_non_finite_points(self):
        """NaN 좌표 거부"""
        with pytest.raises(NonFiniteError):
            DiscreteMeasure.uniform([[0.0], [np.nan]])

    def test_weight_count_mismatch(self):
        """가중치 수와 atom 수 불일치"""
        with pytest.raises(DimensionMismatchError):
            DiscreteMeasure([[0.0], [1.0]], [1.0])

    def test_arrays_are_read_only(self):
        """생성 후 배열 수정 불가"""
        measure = DiscreteMeasureFactory()
        with pytest.raises(ValueError):
            measure.points[0, 0] = 10.0

    def test_second_moment(self):
        """int ||x||^2"""
        measure = DiscreteMeasure([[1.0, 0.0], [0.0, 2.0]], [0.5, 0.5])
        assert measure.second_moment() == pytest.approx(2.5)

    def test_without_null_atoms(self):
        """null atom 제거와 원래 인덱스"""
        # Given: 가운데 atom 의 가중치가 0
        measure = DiscreteMeasure([[0.0], [1.0], [2.0]], [0.5, 0.0, 0.5])

        # When
        reduced, kept = measure.without_null_atoms()

        # Then
        assert reduced.n == 2
        assert kept.tolist() == [0, 2]
        assert np.allclose(reduced.points[:, 0], [0.0, 2.0])

    def test_without_null_atoms_returns_self_when_nothing_dropped(self):
        """제거할 atom 이 없으면 같은 객체"""
        measure = DiscreteMeasureFactory()
        reduced, kept = measure.without_null_atoms()
        assert reduced is measure
        assert kept.tolist() == list(range(measure.n))

    def test_pushforward_and_translation(self):
        """스케일/평행이동은 가중치 유지"""
        measure = DiscreteMeasureFactory(random_weights=True)
        scaled = measure.pushforward_scaled(2.0)
        moved = measure.translated([1.0, -1.0])
        assert np.allclose(scaled.points, 2.0 * measure.points)
        assert np.allclose(moved.points, measure.points + [1.0, -1.0])
        assert np.array_equal(scaled.weights, measure.weights)

    def test_translation_dimension_mismatch(self):
        """평행이동 벡터 차원 불일치"""
        with pytest.raises(DimensionMismatchError):
            DiscreteMeasureFactory(d=2).translated([1.0, 2.0, 3.0])

    def test_same_as(self):
        """같은 atom/가중치 판정"""
        a = DiscreteMeasureFactory(seed=1)
        b = DiscreteMeasure(a.points.copy(), a.weights.copy())
        c = DiscreteMeasureFactory(seed=2)
        assert a.same_as(b)
        assert not a.same_as(c)


class TestLabeledSample:
    """LabeledSample 테스트"""

    def test_class_counts(self):
        """클래스별 관측 수"""
        sample = LabeledSampleFactory(per_class=(2, 3, 1))
        assert sample.n_classes == 3
        assert sample.class_counts().tolist() == [2, 3, 1]
        assert sample.m == 6

    def test_unknown_class(self):
        """범위 밖 라벨"""
        with pytest.raises(UnknownClassError) as exc_info:
            LabeledSample([[0.0], [1.0]], [1, 3], n_classes=2)
        assert exc_info.value.class_id == 3

    def test_zero_label(self):
        """라벨은 1부터 시작"""
        with pytest.raises(UnknownClassError):
            LabeledSample([[0.0], [1.0]], [0, 1])

    def test_non_integer_labels(self):
        """정수가 아닌 라벨"""
        with pytest.raises(InvalidMeasureError):
            LabeledSample([[0.0], [1.0]], [1.0, 1.5])


class TestSimplexVector:
    """SimplexVector 테스트"""

    def test_uniform(self):
        """균등 비율"""
        assert np.allclose(SimplexVector.uniform(4).theta, 0.25)

    def test_one_hot(self):
        """one-hot (0-based index)"""
        theta = SimplexVector.one_hot(3, 1)
        assert theta.tolist() == [0.0, 1.0, 0.0]
        assert theta.has_zero_entries()

    def test_from_counts(self):
        """개수로부터 비율"""
        theta = SimplexVector.from_counts([20, 5, 8, 7, 10])
        assert np.allclose(theta.theta, [0.4, 0.1, 0.16, 0.14, 0.2])

    def test_negative_entry(self):
        """음수 원소 거부"""
        with pytest.raises(InvalidSimplexError):
            SimplexVector([1.2, -0.2])

    def test_sum_not_one(self):
        """합이 1이 아닌 벡터 거부"""
        with pytest.raises(InvalidSimplexError):
            SimplexVector([0.5, 0.4])

    def test_distance_squared(self):
        """제곱 거리"""
        a = SimplexVector([1.0, 0.0])
        b = SimplexVector([0.5, 0.5])
        assert a.distance_squared(b) == pytest.approx(0.5)
        assert a.distance_squared([0.0, 1.0]) == pytest.approx(2.0)


class TestMixtureModel:
    """MixtureModel 테스트"""

    def test_offsets_and_owners(self):
        """성분별 slice 와 atom 소유 성분"""
        model = MixtureModel((DiscreteMeasure.uniform([[0.0], [1.0]]), DiscreteMeasure.uniform([[5.0]])))
        assert model.K == 2
        assert model.offsets == (slice(0, 2), slice(2, 3))
        assert model.component_of_atom.tolist() == [0, 0, 1]
        assert model.points.shape == (3, 1)

    def test_dimension_mismatch(self):
        """성분 차원 불일치"""
        with pytest.raises(DimensionMismatchError):
            MixtureModel((DiscreteMeasure.uniform([[0.0]]), DiscreteMeasure.uniform([[0.0, 1.0]])))

    def test_empty(self):
        """성분 없음"""
        with pytest.raises(InvalidMeasureError):
            MixtureModel(())
