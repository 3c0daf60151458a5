"""
Projected gradient descent over the simplex

    theta <- project_simplex(theta - step * grad L(mu_theta, nu))

with backtracking on loss increase. The step size is reset at every outer
iteration; the best theta seen is returned.
"""
import logging

import numpy as np

from estimator.domain import DescentConfig, EstimateResult
from estimator.services import tangent_projection
from estimator.strategies import LossStrategyFactory
from measures.services import project_simplex

logger = logging.getLogger(__name__)


class ProjectedGradientDescent:
    """
    단일 추정 문제 (model, target, spec) 에 대한 descent 상태
    """

    def __init__(self, model, target, spec, cfg):
        self.model = model
        self.target = target
        self.spec = spec
        self.cfg = cfg
        self.strategy = LossStrategyFactory.get_strategy(spec.kind)
        self.sinkhorn_iterations = 0
        self.zero_entry_gradients = 0

    def _evaluate(self, theta, warm):
        evaluation = self.strategy.evaluate(
            self.model, theta, self.target, self.spec,
            tolerance=self.cfg.sinkhorn_tolerance,
            warm=warm if self.cfg.warm_start else None,
        )
        self.sinkhorn_iterations += evaluation.sinkhorn_iterations
        if evaluation.zero_entries:
            self.zero_entry_gradients += 1
        return evaluation

    def _line_search(self, theta, current):
        """
        Returns:
            ('stationary', None, None) | ('accepted', theta, evaluation) | ('failed', None, None)
        """
        cfg = self.cfg
        step = cfg.step_size
        for halving in range(cfg.max_halvings + 1):
            candidate = project_simplex(theta.theta - step * current.gradient)
            displacement = np.sqrt(candidate.distance_squared(theta))
            if halving == 0 and displacement <= cfg.theta_tolerance:
                return 'stationary', None, None
            trial = self._evaluate(candidate, current.warm)
            if trial.value <= current.value:
                return 'accepted', candidate, trial
            step *= cfg.backtracking_factor
        return 'failed', None, None

    def run(self):
        cfg = self.cfg
        theta = cfg.initial_theta(self.model.K)
        current = self._evaluate(theta, None)

        best_theta, best_loss = theta, current.value
        loss_trace = [current.value]
        gradient_norm_trace = [float(np.linalg.norm(tangent_projection(current.gradient)))]
        converged = False
        line_search_failed = False
        outer = 0

        while outer < cfg.max_outer_iterations:
            outer += 1
            status, candidate, trial = self._line_search(theta, current)
            if status == 'stationary':
                converged = True
                break
            if status == 'failed':
                line_search_failed = True
                logger.warning(f"Line search failed: loss={self.spec.label} outer={outer} "
                               f"loss_value={current.value:.12g}")
                break

            displacement = np.sqrt(candidate.distance_squared(theta))
            theta, current = candidate, trial
            loss_trace.append(current.value)
            gradient_norm_trace.append(float(np.linalg.norm(tangent_projection(current.gradient))))
            if current.value < best_loss:
                best_theta, best_loss = theta, current.value

            logger.debug(f"Descent step: loss={self.spec.label} outer={outer} value={current.value:.12g} "
                         f"displacement={displacement:.3e}")
            if displacement <= cfg.theta_tolerance:
                converged = True
                break
        else:
            logger.warning(f"Descent reached max outer iterations: loss={self.spec.label} "
                           f"iterations={cfg.max_outer_iterations}")

        if self.zero_entry_gradients:
            logger.warning(f"Gradients evaluated at theta with zero entries: loss={self.spec.label} "
                           f"count={self.zero_entry_gradients}")
        logger.info(f"Estimate finished: loss={self.spec.label} outer={outer} converged={converged} "
                    f"best_loss={best_loss:.12g} sinkhorn_iterations={self.sinkhorn_iterations}")

        return EstimateResult(
            theta_hat=best_theta,
            loss_trace=tuple(loss_trace),
            gradient_norm_trace=tuple(gradient_norm_trace),
            converged=converged,
            total_sinkhorn_iterations=self.sinkhorn_iterations,
            outer_iterations=outer,
            best_loss=best_loss,
            line_search_failed=line_search_failed,
            zero_entry_gradients=self.zero_entry_gradients,
        )


def estimate(model, target, spec, cfg=None):
    """
    theta_hat = argmin_{theta in Sigma_K} L(mu_theta, target)

    수렴 실패는 예외가 아니라 EstimateResult.converged 로 보고합니다.
    """
    return ProjectedGradientDescent(model, target, spec, cfg or DescentConfig()).run()
