import numpy as np
import pytest

from common.exceptions import ConfigurationError, DimensionMismatchError, ZeroWeightError
from exact_ot.solver import w0
from factories import DiscreteMeasureFactory, SinkhornConfigFactory
from measures.domain import DiscreteMeasure
from ot_core.domain import SinkhornConfig
from ot_core.sinkhorn import sinkhorn, sinkhorn_divergence, symmetric_sinkhorn, transport_plan


class TestSinkhornConfig:
    """SinkhornConfig 테스트"""

    def test_defaults_from_settings(self):
        """기본값은 OPTIMAL_TRANSPORT 설정"""
        cfg = SinkhornConfig(lam=0.1)
        assert cfg.tolerance == 1e-9
        assert cfg.stall_window == 100
        assert not cfg.bounded

    def test_non_positive_lambda(self):
        """lambda <= 0 거부"""
        with pytest.raises(ConfigurationError):
            SinkhornConfig(lam=0.0)

    def test_zero_iteration_budget(self):
        """반복 횟수 0 거부"""
        with pytest.raises(ConfigurationError):
            SinkhornConfig(lam=0.1, max_iterations=0)


class TestSinkhorn:
    """sinkhorn 테스트"""

    def test_single_atoms(self):
        """delta_0 vs delta_3 -> 9"""
        a = DiscreteMeasure.uniform([[0.0]])
        b = DiscreteMeasure.uniform([[3.0]])
        solution = sinkhorn(a, b, SinkhornConfig(lam=0.5))
        assert solution.cost == pytest.approx(9.0, abs=1e-9)
        assert solution.converged

    def test_bounded_mode_runs_exact_budget(self):
        """bounded 모드는 정확히 l 회"""
        a, b = DiscreteMeasureFactory(n=6), DiscreteMeasureFactory(n=4)
        for ell in (1, 3, 10):
            solution = sinkhorn(a, b, SinkhornConfig(lam=0.05, max_iterations=ell))
            assert solution.iterations == ell
            assert len(solution.residual_trace) == ell

    def test_converged_marginals(self):
        """수렴 후 계획의 marginal 일치"""
        # Given
        a = DiscreteMeasureFactory(n=7, random_weights=True)
        b = DiscreteMeasureFactory(n=5, random_weights=True)
        cfg = SinkhornConfigFactory(lam=0.2, tolerance=1e-10)

        # When
        solution = sinkhorn(a, b, cfg)
        plan = transport_plan(solution, a, b)

        # Then
        assert solution.marginal_residual <= 1e-10
        assert np.allclose(plan.sum(axis=1), a.weights, atol=1e-9)
        assert np.allclose(plan.sum(axis=0), b.weights, atol=1e-12)

    def test_not_below_exact_value(self):
        """W_lambda >= W_0"""
        a, b = DiscreteMeasureFactory(n=8), DiscreteMeasureFactory(n=6)
        for lam in (0.01, 0.1, 1.0):
            assert sinkhorn(a, b, SinkhornConfigFactory(lam=lam)).cost >= w0(a, b) - 1e-9

    def test_approaches_exact_value(self):
        """작은 lambda 에서 W_0 에 근접"""
        a, b = DiscreteMeasureFactory(n=6, seed=3), DiscreteMeasureFactory(n=6, seed=4)
        gap = sinkhorn(a, b, SinkhornConfigFactory(lam=1e-3)).cost - w0(a, b)
        assert -1e-9 <= gap < 0.05

    def test_large_costs_stay_finite(self):
        """큰 비용과 작은 lambda 에서도 overflow 없음"""
        a = DiscreteMeasure.uniform([[0.0], [1000.0]])
        b = DiscreteMeasure.uniform([[1.0], [999.0]])
        solution = sinkhorn(a, b, SinkhornConfig(lam=1e-3))
        assert np.isfinite(solution.cost)
        assert solution.cost == pytest.approx(1.0, abs=1e-2)

    def test_warm_start_reduces_iterations(self):
        """수렴한 psi 로 시작하면 반복이 줄어듦"""
        a, b = DiscreteMeasureFactory(n=10), DiscreteMeasureFactory(n=10)
        cfg = SinkhornConfig(lam=0.05)
        cold = sinkhorn(a, b, cfg)
        warm = sinkhorn(a, b, cfg, init_psi=cold.psi)
        assert warm.iterations < cold.iterations
        assert warm.cost == pytest.approx(cold.cost, abs=1e-8)

    def test_warm_start_ignored_in_bounded_mode(self):
        """bounded 모드에서는 warm start 무시"""
        a, b = DiscreteMeasureFactory(n=4), DiscreteMeasureFactory(n=4)
        cfg = SinkhornConfig(lam=0.1, max_iterations=3)
        plain = sinkhorn(a, b, cfg)
        warm = sinkhorn(a, b, cfg, init_psi=np.full(4, 5.0))
        assert warm.cost == plain.cost

    def test_warm_start_length_mismatch(self):
        """warm start 길이 불일치"""
        a, b = DiscreteMeasureFactory(n=4), DiscreteMeasureFactory(n=3)
        with pytest.raises(DimensionMismatchError):
            sinkhorn(a, b, SinkhornConfig(lam=0.1), init_psi=np.zeros(4))

    def test_zero_weight_atom(self):
        """가중치 0 atom 은 Sinkhorn 전에 제거해야 함"""
        a = DiscreteMeasure([[0.0], [1.0]], [1.0, 0.0])
        b = DiscreteMeasure.uniform([[0.5]])
        with pytest.raises(ZeroWeightError):
            sinkhorn(a, b, SinkhornConfig(lam=0.1))

    def test_dimension_mismatch(self):
        """차원 불일치"""
        with pytest.raises(DimensionMismatchError):
            sinkhorn(DiscreteMeasureFactory(d=2), DiscreteMeasureFactory(d=3), SinkhornConfig(lam=0.1))

    def test_matches_kernel_scaling(self):
        """plan 공간의 Gibbs kernel 행렬 스케일링과 같은 계획 / 값"""
        # Given
        a = DiscreteMeasureFactory(n=6, random_weights=True)
        b = DiscreteMeasureFactory(n=4, random_weights=True)
        lam = 0.5
        cost = np.sum((a.points[:, None, :] - b.points[None, :, :]) ** 2, axis=2)
        kernel = np.exp(-cost / lam)
        u, v = np.ones(a.n), np.ones(b.n)
        for _ in range(2000):
            u = a.weights / (kernel @ v)
            v = b.weights / (kernel.T @ u)
        expected_plan = u[:, None] * kernel * v[None, :]
        entropy = np.sum(expected_plan * np.log(expected_plan / np.outer(a.weights, b.weights)))
        expected_cost = np.sum(expected_plan * cost) + lam * entropy

        # When
        solution = sinkhorn(a, b, SinkhornConfigFactory(lam=lam))

        # Then
        assert np.allclose(transport_plan(solution, a, b), expected_plan, atol=1e-10)
        assert solution.cost == pytest.approx(expected_cost, abs=1e-9)

    def test_residual_trace_non_increasing(self):
        """marginal residual 은 반복마다 증가하지 않음"""
        a = DiscreteMeasureFactory(n=8, random_weights=True)
        b = DiscreteMeasureFactory(n=6, random_weights=True)
        for lam in (0.02, 0.2):
            trace = np.array(sinkhorn(a, b, SinkhornConfig(lam=lam, max_iterations=60)).residual_trace)
            assert np.all(np.diff(trace) <= 1e-12)

    def test_translation_invariance(self):
        """W_lambda(a + t, b + t) = W_lambda(a, b)"""
        a = DiscreteMeasureFactory(n=6, random_weights=True)
        b = DiscreteMeasureFactory(n=5)
        offset = np.array([3.0, -2.0])
        cfg = SinkhornConfigFactory(lam=0.1)
        moved = sinkhorn(a.translated(offset), b.translated(offset), cfg)
        assert moved.cost == pytest.approx(sinkhorn(a, b, cfg).cost, abs=1e-9)

    def test_iteration_cap_is_not_an_error(self):
        """반복 상한 도달은 converged=False 로 보고"""
        a, b = DiscreteMeasureFactory(n=10), DiscreteMeasureFactory(n=10)
        solution = sinkhorn(a, b, SinkhornConfig(lam=0.001, tolerance=1e-14, iteration_cap=3))
        assert solution.iterations <= 3
        assert not solution.converged


class TestSymmetricSinkhorn:
    """symmetric_sinkhorn 테스트"""

    def test_fixed_point(self):
        """수렴한 f 는 T(f) = f"""
        a = DiscreteMeasureFactory(n=6, random_weights=True)
        solution = symmetric_sinkhorn(a, SinkhornConfig(lam=0.3))
        assert solution.symmetric
        assert solution.phi is solution.psi
        assert solution.marginal_residual <= 1e-9

    def test_matches_alternating_solver(self):
        """W(a, a) 는 교대 갱신 결과와 같음"""
        a = DiscreteMeasureFactory(n=6)
        cfg = SinkhornConfigFactory(lam=0.3)
        assert symmetric_sinkhorn(a, cfg).cost == pytest.approx(sinkhorn(a, a, cfg).cost, abs=1e-8)

    def test_bounded_budget(self):
        """bounded 모드의 반복 횟수"""
        a = DiscreteMeasureFactory(n=5)
        assert symmetric_sinkhorn(a, SinkhornConfig(lam=0.1, max_iterations=4)).iterations == 4


class TestSinkhornDivergence:
    """sinkhorn_divergence 테스트"""

    def test_identical_measures_give_zero(self):
        """S(a, a) = 0 (정확히)"""
        a = DiscreteMeasureFactory(n=7, random_weights=True)
        twin = DiscreteMeasure(a.points.copy(), a.weights.copy())
        assert sinkhorn_divergence(a, twin, SinkhornConfig(lam=0.2)).value == 0.0

    def test_single_point_files(self):
        """같은 한 점 -> 0"""
        a = DiscreteMeasure.uniform([[1.0, 2.0]])
        assert sinkhorn_divergence(a, DiscreteMeasure.uniform([[1.0, 2.0]]), SinkhornConfig(lam=0.5)).value == 0.0

    def test_nonnegative(self):
        """S(a, b) >= 0"""
        for seed in range(5):
            a = DiscreteMeasureFactory(n=6, seed=seed)
            b = DiscreteMeasureFactory(n=4, seed=seed + 100)
            assert sinkhorn_divergence(a, b, SinkhornConfigFactory(lam=0.1)).value >= -1e-8

    def test_combines_three_terms(self):
        """S = W(a, b) - (W(a, a) + W(b, b)) / 2"""
        a, b = DiscreteMeasureFactory(n=5), DiscreteMeasureFactory(n=3)
        result = sinkhorn_divergence(a, b, SinkhornConfig(lam=0.4))
        expected = result.cross.cost - 0.5 * (result.source_symmetric.cost + result.target_symmetric.cost)
        assert result.value == pytest.approx(expected)
        assert result.converged

    def test_bounded_iterations_sum(self):
        """bounded 모드는 세 항 모두 l 회"""
        a, b = DiscreteMeasureFactory(n=5), DiscreteMeasureFactory(n=3)
        result = sinkhorn_divergence(a, b, SinkhornConfig(lam=0.1, max_iterations=2))
        assert result.iterations == 6

    def test_approaches_exact_value(self):
        """lambda -> 0 에서 S_lambda -> W_0"""
        a, b = DiscreteMeasureFactory(n=6, seed=3), DiscreteMeasureFactory(n=6, seed=4)
        exact = w0(a, b)
        for lam, tolerance in ((1e-2, 0.1), (1e-3, 0.02)):
            value = sinkhorn_divergence(a, b, SinkhornConfigFactory(lam=lam)).value
            assert abs(value - exact) < tolerance
