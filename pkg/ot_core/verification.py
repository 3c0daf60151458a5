"""
Randomized checks of the regularization bounds and transport identities.

Each check returns the worst slack (bound minus observed deviation) over its
instances; a negative slack is a violation.
"""
import logging
from dataclasses import dataclass

import numpy as np

from datagen.rng import RandomStream
from exact_ot.solver import w0
from measures.domain import DiscreteMeasure
from ot_core.bounds import iteration_error_bound, regularization_bias_bound
from ot_core.costs import cost_matrix
from ot_core.domain import SinkhornConfig
from ot_core.identities import rescaling_check, s_cost_identity_check
from ot_core.sinkhorn import sinkhorn, sinkhorn_divergence

logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = 1e-6
SELF_DIVERGENCE_TOLERANCE = 1e-12
NONNEGATIVITY_SLACK = 1e-8
# 수렴 판정 오차만큼의 여유
BIAS_LOWER_SLACK = 1e-8
VERIFY_TOLERANCE = 1e-12


@dataclass
class PropertyCheck:
    name: str
    evaluations: int = 0
    violations: int = 0
    worst_slack: float = np.inf

    def record(self, slack):
        self.evaluations += 1
        self.worst_slack = min(self.worst_slack, float(slack))
        if slack < 0:
            self.violations += 1

    @property
    def passed(self):
        return self.violations == 0


def random_ball_points(stream, n, d, radius=1.0):
    """B(0, R) 안의 균등 분포 점"""
    direction = stream.normal((n, d))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    scale = radius * stream.uniform(n) ** (1.0 / d)
    return direction * scale[:, None]


def random_pair(stream, max_atoms=20, dimensions=(2, 6), radius=1.0):
    d = int(dimensions[int(stream.uniform() * len(dimensions))])
    n_a = 1 + int(stream.uniform() * max_atoms)
    n_b = 1 + int(stream.uniform() * max_atoms)
    a = DiscreteMeasure.uniform(random_ball_points(stream, n_a, d, radius))
    b = DiscreteMeasure.uniform(random_ball_points(stream, n_b, d, radius))
    return a, b


def _converged(lam):
    return SinkhornConfig(lam=lam, tolerance=VERIFY_TOLERANCE)


def check_regularization_bias(pairs, lambdas=(0.01, 0.05, 0.1), radius=1.0):
    """0 <= W_lam - W_0 <= B(lam)"""
    check = PropertyCheck('regularization bias')
    for a, b in pairs:
        exact = w0(a, b)
        for lam in lambdas:
            gap = sinkhorn(a, b, _converged(lam)).cost - exact
            bound = regularization_bias_bound(lam, a.d, radius)
            check.record(min(gap + BIAS_LOWER_SLACK, bound - gap))
    return check


def check_iteration_error(pairs, lambdas=(0.1, 0.5), budgets=(1, 5, 20)):
    """|W^(l) - W_converged| <= ||c||_inf^2 / (lam l)"""
    check = PropertyCheck('iteration error')
    for a, b in pairs:
        max_cost = cost_matrix(a, b).max_entry
        for lam in lambdas:
            reference = sinkhorn(a, b, _converged(lam)).cost
            for ell in budgets:
                value = sinkhorn(a, b, SinkhornConfig(lam=lam, max_iterations=ell)).cost
                check.record(iteration_error_bound(max_cost, lam, ell) - abs(value - reference))
    return check


def check_rescaling(pairs, lambdas=(0.25, 1.0, 4.0)):
    check = PropertyCheck('rescaling identity')
    for a, b in pairs:
        for lam in lambdas:
            lhs, rhs = rescaling_check(a, b, lam, _converged(lam))
            check.record(IDENTITY_TOLERANCE - abs(lhs - rhs))
    return check


def check_s_cost_identity(pairs, lambdas=(0.3,)):
    check = PropertyCheck('s-cost identity')
    for a, b in pairs:
        for lam in lambdas:
            lhs, rhs = s_cost_identity_check(a, b, lam, _converged(lam))
            check.record(IDENTITY_TOLERANCE - abs(lhs - rhs))
    return check


def check_divergence(pairs, lam=0.1):
    """S(a, a) = 0 와 S(a, b) >= 0"""
    check = PropertyCheck('divergence sign')
    cfg = _converged(lam)
    for a, b in pairs:
        check.record(SELF_DIVERGENCE_TOLERANCE - abs(sinkhorn_divergence(a, a, cfg).value))
        check.record(sinkhorn_divergence(a, b, cfg).value + NONNEGATIVITY_SLACK)
    return check


def verify_bounds(instances=20, seed=0):
    """
    Returns:
        list[PropertyCheck]
    """
    stream = RandomStream(seed)
    pairs = [random_pair(stream) for _ in range(instances)]
    checks = [
        check_regularization_bias(pairs),
        check_iteration_error(pairs),
        check_rescaling(pairs),
        check_s_cost_identity(pairs),
        check_divergence(pairs),
    ]
    for check in checks:
        log = logger.info if check.passed else logger.warning
        log(f"Property check: name={check.name} evaluations={check.evaluations} "
            f"violations={check.violations} worst_slack={check.worst_slack:.3e}")
    return checks
