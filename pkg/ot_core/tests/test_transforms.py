import numpy as np
import pytest

from common.exceptions import ConfigurationError, DimensionMismatchError
from factories import DiscreteMeasureFactory, SinkhornConfigFactory
from measures.domain import DiscreteMeasure
from ot_core.sinkhorn import sinkhorn
from ot_core.transforms import c_transform, dual_value, s_transform, semidual_value


class TestCTransform:
    """c_transform 테스트"""

    def test_hard_transform(self):
        """lambda = 0 은 min_y (||x - y||^2 - psi(y))"""
        b = DiscreteMeasure.uniform([[0.0], [2.0]])
        values = c_transform([0.0, 1.0], b, [[1.0], [3.0]], 0.0)
        assert np.allclose(values, [0.0, 0.0])

    def test_soft_transform_single_atom(self):
        """한 atom 이면 soft = hard"""
        b = DiscreteMeasure.uniform([[1.0, 1.0]])
        values = c_transform([0.5], b, [[0.0, 0.0]], 0.3)
        assert values[0] == pytest.approx(2.0 - 0.5)

    def test_soft_approaches_hard(self):
        """lambda -> 0 에서 hard transform 에 수렴"""
        b = DiscreteMeasureFactory(n=5)
        psi = np.linspace(0.0, 0.4, 5)
        query = DiscreteMeasureFactory(n=3).points
        hard = c_transform(psi, b, query, 0.0)
        soft = c_transform(psi, b, query, 1e-4)
        assert np.allclose(soft, hard, atol=1e-3)

    def test_constant_shift(self):
        """psi + k 의 c-transform 은 psi^c - k"""
        b = DiscreteMeasureFactory(n=6, random_weights=True)
        psi = np.sin(np.arange(6.0))
        query = DiscreteMeasureFactory(n=5).points
        for lam in (0.0, 0.1, 1.0):
            shifted = c_transform(psi + 2.5, b, query, lam)
            assert np.allclose(shifted, c_transform(psi, b, query, lam) - 2.5, atol=1e-10)

    def test_zero_weight_atoms_ignored(self):
        """가중치 0 atom 은 무시"""
        b = DiscreteMeasure([[0.0], [10.0]], [1.0, 0.0])
        assert c_transform([0.0, 1e6], b, [[10.0]], 0.0)[0] == pytest.approx(100.0)

    def test_negative_lambda(self):
        """음수 lambda 거부"""
        with pytest.raises(ConfigurationError):
            c_transform([0.0], DiscreteMeasure.uniform([[0.0]]), [[0.0]], -1.0)

    def test_potential_length(self):
        """potential 길이 불일치"""
        with pytest.raises(DimensionMismatchError):
            c_transform([0.0, 1.0], DiscreteMeasure.uniform([[0.0]]), [[0.0]], 0.1)


class TestSTransform:
    """s_transform 테스트"""

    def test_relation_to_c_transform(self):
        """psi^c(x) = ||x||^2 + (psi - ||y||^2)^s(x)"""
        # Given
        b = DiscreteMeasureFactory(n=6, random_weights=True)
        psi = np.cos(np.arange(6.0))
        query = DiscreteMeasureFactory(n=4).points
        shifted = psi - np.sum(b.points ** 2, axis=1)

        for lam in (0.0, 0.2):
            # When
            c_values = c_transform(psi, b, query, lam)
            s_values = np.sum(query ** 2, axis=1) + s_transform(shifted, b, query, lam)

            # Then
            assert np.allclose(c_values, s_values, atol=1e-10)

    def test_midpoint_concavity(self):
        """phi^s 는 y 에 대해 오목: phi^s((y1 + y2) / 2) >= (phi^s(y1) + phi^s(y2)) / 2"""
        # Given
        a = DiscreteMeasureFactory(n=7, random_weights=True)
        phi = np.cos(3.0 * np.arange(7.0))
        rng = np.random.default_rng(7)
        y1, y2 = rng.normal(size=(20, 2)), rng.normal(size=(20, 2))

        for lam in (0.0, 0.05, 0.5):
            # When
            middle = s_transform(phi, a, 0.5 * (y1 + y2), lam)
            ends = 0.5 * (s_transform(phi, a, y1, lam) + s_transform(phi, a, y2, lam))

            # Then
            assert np.all(middle >= ends - 1e-10)

    def test_dimension_mismatch(self):
        """query 차원 불일치"""
        with pytest.raises(DimensionMismatchError):
            s_transform([0.0], DiscreteMeasure.uniform([[0.0, 0.0]]), [[0.0]], 0.1)


class TestDualObjectives:
    """semidual_value / dual_value 테스트"""

    def setup_method(self):
        """각 테스트 전에 실행"""
        self.a = DiscreteMeasureFactory(n=6, random_weights=True)
        self.b = DiscreteMeasureFactory(n=5)
        self.lam = 0.25
        self.solution = sinkhorn(self.a, self.b, SinkhornConfigFactory(lam=self.lam))

    def test_semidual_at_solution(self):
        """최적 psi 에서 semi-dual = W_lambda"""
        value = semidual_value(self.solution.psi, self.a, self.b, self.lam)
        assert value == pytest.approx(self.solution.cost, abs=1e-8)

    def test_dual_at_solution(self):
        """최적 (phi, psi) 에서 dual = W_lambda"""
        value = dual_value(self.solution.phi, self.solution.psi, self.a, self.b, self.lam)
        assert value == pytest.approx(self.solution.cost, abs=1e-8)

    def test_dual_is_lower_bound(self):
        """임의 potential 의 dual 은 W_lambda 이하"""
        phi = self.solution.phi + 0.1 * np.sin(np.arange(6.0))
        psi = self.solution.psi - 0.05
        assert dual_value(phi, psi, self.a, self.b, self.lam) <= self.solution.cost + 1e-10

    def test_semidual_is_lower_bound(self):
        """임의 psi 의 semi-dual 은 W_lambda 이하"""
        rng = np.random.default_rng(3)
        for _ in range(10):
            psi = rng.normal(scale=0.5, size=5)
            assert semidual_value(psi, self.a, self.b, self.lam) <= self.solution.cost + 1e-10

    def test_non_positive_lambda(self):
        """semi-dual 은 lambda > 0 필요"""
        with pytest.raises(ConfigurationError):
            semidual_value(self.solution.psi, self.a, self.b, 0.0)
