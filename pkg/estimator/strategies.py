"""
Loss strategies (Strategy Pattern)

Each loss L in {W0, Wlambda, Slambda} evaluates theta -> L(mu_theta, nu) and its
envelope gradient g_k = <phi, mu_k>, where phi is the source-side dual potential.
Atoms of components with theta_k = 0 are dropped before solving; phi is then
extended to them with the c-transform of the target-side potential so that mass
can re-enter a zeroed class.
"""
import logging
from abc import ABC, abstractmethod
from typing import Dict, Optional

import numpy as np

from common.exceptions import ConfigurationError, DimensionMismatchError
from estimator.domain import LossEvaluation, LossKind, LossSpec
from exact_ot.solver import solve_exact
from measures.domain import DiscreteMeasure, MixtureModel, SimplexVector
from measures.services import reweight
from ot_core.sinkhorn import sinkhorn, sinkhorn_divergence
from ot_core.transforms import c_transform

logger = logging.getLogger(__name__)


class _Reweighted:
    """mu_theta 와 null atom 을 제거한 측도, 원래 atom 인덱스"""

    def __init__(self, model, theta):
        self.model = model
        self.full = reweight(model, theta)
        self.measure, self.kept = self.full.without_null_atoms()
        self.dropped = np.setdiff1d(np.arange(self.full.n), self.kept)

    def scatter(self, values_on_kept, extend):
        """
        kept atom 의 potential 을 전체 atom 으로 확장

        extend(points) 는 제거된 atom 위치에서의 c-transform 값
        """
        full = np.empty(self.full.n)
        full[self.kept] = values_on_kept
        if self.dropped.size:
            full[self.dropped] = extend(self.full.points[self.dropped])
        return full

    def component_averages(self, potential):
        """k -> <potential, mu_k>"""
        return np.array([
            np.dot(component.weights, potential[offset])
            for component, offset in zip(self.model.components, self.model.offsets)
        ])


class LossStrategy(ABC):
    """손실 전략 추상 클래스"""

    kind = None

    @abstractmethod
    def _evaluate(self, reweighted: _Reweighted, target: DiscreteMeasure, spec: LossSpec,
                  tolerance: Optional[float], warm: Dict[str, np.ndarray]) -> LossEvaluation:
        pass

    def evaluate(self, model: MixtureModel, theta: SimplexVector, target: DiscreteMeasure, spec: LossSpec,
                 tolerance: Optional[float] = None,
                 warm: Optional[Dict[str, np.ndarray]] = None) -> LossEvaluation:
        """
        L(mu_theta, target) 값과 gradient

        Args:
            warm: 이전 평가의 LossEvaluation.warm (unbounded Sinkhorn 에서만 사용)
        """
        if model.d != target.d:
            raise DimensionMismatchError(model.d, target.d)
        reweighted = _Reweighted(model, theta)
        evaluation = self._evaluate(reweighted, target, spec, tolerance, warm or {})
        if reweighted.dropped.size:
            logger.debug(f"Gradient with zero-weight components: loss={spec.label} "
                         f"dropped_atoms={reweighted.dropped.size}")
        return evaluation

    def value(self, model: MixtureModel, theta: SimplexVector, target: DiscreteMeasure, spec: LossSpec,
              tolerance: Optional[float] = None) -> float:
        return self.evaluate(model, theta, target, spec, tolerance=tolerance).value


class ExactLossStrategy(LossStrategy):
    """W_0: network simplex, LP dual phi 는 subgradient (basic dual)"""

    kind = LossKind.W0

    def _evaluate(self, reweighted, target, spec, tolerance, warm):
        plan = solve_exact(reweighted.measure, target)
        phi = reweighted.scatter(
            plan.dual_phi,
            lambda points: c_transform(plan.dual_psi, target, points, 0.0),
        )
        return LossEvaluation(
            value=plan.cost,
            gradient=reweighted.component_averages(phi),
            zero_entries=bool(reweighted.dropped.size),
        )


class RegularizedLossStrategy(LossStrategy):
    """W_lambda / W_lambda^(l): 첫 번째 Sinkhorn potential phi"""

    kind = LossKind.WLAMBDA

    def _evaluate(self, reweighted, target, spec, tolerance, warm):
        cfg = spec.sinkhorn_config(tolerance)
        solution = sinkhorn(reweighted.measure, target, cfg, init_psi=warm.get('psi'))
        phi = reweighted.scatter(
            solution.phi,
            lambda points: c_transform(solution.psi, target, points, cfg.lam),
        )
        return LossEvaluation(
            value=solution.cost,
            gradient=reweighted.component_averages(phi),
            sinkhorn_iterations=solution.iterations,
            zero_entries=bool(reweighted.dropped.size),
            converged=solution.converged,
            warm={'psi': solution.psi},
        )


class DivergenceLossStrategy(LossStrategy):
    """
    S_lambda / S_lambda^(l)

    grad_k = <phi_cross, mu_k> - <f_sym, mu_k>, f_sym 는 W_lambda(mu_theta, mu_theta) 의 대칭 potential
    """

    kind = LossKind.SLAMBDA

    def _evaluate(self, reweighted, target, spec, tolerance, warm):
        cfg = spec.sinkhorn_config(tolerance)
        source_init = warm.get('source_f')
        if source_init is not None:
            source_init = source_init[reweighted.kept]

        result = sinkhorn_divergence(
            reweighted.measure,
            target,
            cfg,
            init_psi=warm.get('psi'),
            init_source=source_init,
            init_target=warm.get('target_f'),
        )
        cross, symmetric = result.cross, result.source_symmetric

        phi = reweighted.scatter(
            cross.phi,
            lambda points: c_transform(cross.psi, target, points, cfg.lam),
        )
        f_sym = reweighted.scatter(
            symmetric.phi,
            lambda points: c_transform(symmetric.phi, reweighted.measure, points, cfg.lam),
        )
        return LossEvaluation(
            value=result.value,
            gradient=reweighted.component_averages(phi) - reweighted.component_averages(f_sym),
            sinkhorn_iterations=result.iterations,
            zero_entries=bool(reweighted.dropped.size),
            converged=result.converged,
            warm={'psi': cross.psi, 'source_f': f_sym, 'target_f': result.target_symmetric.phi},
        )


class LossStrategyFactory:
    """손실 전략 팩토리"""

    _strategies = {
        LossKind.W0: ExactLossStrategy,
        LossKind.WLAMBDA: RegularizedLossStrategy,
        LossKind.SLAMBDA: DivergenceLossStrategy,
    }

    @classmethod
    def get_strategy(cls, kind):
        """
        손실 종류에 맞는 전략 반환

        Raises:
            ConfigurationError: 지원하지 않는 손실
        """
        try:
            strategy_class = cls._strategies.get(LossKind.parse(kind))
        except ConfigurationError:
            strategy_class = None
        if not strategy_class:
            raise ConfigurationError(f"지원하지 않는 손실입니다: {kind}")
        return strategy_class()

    @classmethod
    def get_supported_kinds(cls):
        return [kind.value for kind in cls._strategies]

    @classmethod
    def register_strategy(cls, kind, strategy_class):
        cls._strategies[kind] = strategy_class
