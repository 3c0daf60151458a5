"""
Loss evaluation entry points and reference searches over the simplex.
"""
import logging

import numpy as np

from common.exceptions import ConfigurationError
from estimator.strategies import LossStrategyFactory
from exact_ot.solver import w0
from measures.domain import SimplexVector
from measures.services import reweight

logger = logging.getLogger(__name__)

MAX_GRID_COMPONENTS = 3


def evaluate(model, theta, target, spec, tolerance=None, warm=None):
    """LossEvaluation (값, gradient, Sinkhorn 반복 수, zero-entry 여부)"""
    strategy = LossStrategyFactory.get_strategy(spec.kind)
    evaluation = strategy.evaluate(model, theta, target, spec, tolerance=tolerance, warm=warm)
    if evaluation.zero_entries:
        logger.warning(f"Gradient at theta with zero entries: loss={spec.label} "
                       f"theta={np.round(getattr(theta, 'theta', theta), 6).tolist()}")
    return evaluation


def loss(model, theta, target, spec, tolerance=None):
    """L(mu_theta, target)"""
    return LossStrategyFactory.get_strategy(spec.kind).value(model, theta, target, spec, tolerance=tolerance)


def gradient(model, theta, target, spec, tolerance=None):
    """envelope gradient, g_k = <phi, mu_k>"""
    return evaluate(model, theta, target, spec, tolerance=tolerance).gradient


def tangent_projection(g):
    """simplex 접공간 (sum = 0) 으로의 사영"""
    g = np.asarray(g, dtype=np.float64)
    return g - g.mean()


def simplex_lattice(k, resolution):
    """간격 resolution 의 Sigma_K 격자점"""
    steps = int(round(1.0 / resolution))
    if steps < 1 or not np.isclose(steps * resolution, 1.0):
        raise ConfigurationError(f"resolution must divide 1, got {resolution}")

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    for counts in compositions(steps, k):
        yield SimplexVector(np.asarray(counts, dtype=np.float64) / steps)


def grid_search(model, target, spec, resolution=0.01, tolerance=None):
    """
    격자 위 전수 탐색으로 argmin (K <= 3 참조용)

    Returns:
        (SimplexVector, float): 최소 손실 격자점과 그 값
    """
    if model.K > MAX_GRID_COMPONENTS:
        raise ConfigurationError(f"grid search is limited to {MAX_GRID_COMPONENTS} components")
    strategy = LossStrategyFactory.get_strategy(spec.kind)

    best_theta, best_value = None, np.inf
    for theta in simplex_lattice(model.K, resolution):
        value = strategy.value(model, theta, target, spec, tolerance=tolerance)
        if value < best_value:
            best_theta, best_value = theta, value
    logger.debug(f"Grid search finished: loss={spec.label} resolution={resolution} "
                 f"theta={best_theta.tolist()} value={best_value:.12g}")
    return best_theta, best_value


def empirical_excess_risk(model, target, theta_hat, theta_ref):
    """
    W_0(mu_theta_hat, target) - W_0(mu_theta_ref, target)

    population 측도 대신 경험 측도로 계산한 surrogate
    """
    def exact(theta):
        measure, _ = reweight(model, theta).without_null_atoms()
        return w0(measure, target)

    return exact(theta_hat) - exact(theta_ref)
