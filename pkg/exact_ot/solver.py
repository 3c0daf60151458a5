"""
Un-regularized discrete optimal transport through the network simplex
(POT's ``ot.emd``).
"""
import logging
import warnings

import numpy as np
import ot

from common.conf import transport_setting
from common.exceptions import DimensionMismatchError, InternalSolverError, SolverError, ZeroWeightError
from exact_ot.domain import TransportPlan
from ot_core.costs import squared_distances

logger = logging.getLogger(__name__)

# network simplex 결과 코드
RESULT_INFEASIBLE = 0
RESULT_OPTIMAL = 1
RESULT_UNBOUNDED = 2
RESULT_MAX_ITER_REACHED = 3


def solve_exact(a, b, max_iterations=None):
    """
    W_0(a, b) 의 최적 계획 (basic solution) 과 dual

    Raises:
        SolverError: 반복 횟수 상한 도달
        InternalSolverError: infeasible / unbounded (balanced 입력에서는 발생하지 않음)
    """
    if a.d != b.d:
        raise DimensionMismatchError(a.d, b.d)
    if np.any(a.weights <= 0) or np.any(b.weights <= 0):
        raise ZeroWeightError("exact solver needs strictly positive weights; drop null atoms first")
    if max_iterations is None:
        max_iterations = transport_setting('LP_MAX_ITERATIONS')

    cost = squared_distances(a, b)
    with warnings.catch_warnings():
        # 결과 코드는 아래에서 직접 처리
        warnings.simplefilter('ignore', UserWarning)
        plan, log = ot.emd(
            np.ascontiguousarray(a.weights),
            np.ascontiguousarray(b.weights),
            np.ascontiguousarray(cost),
            numItermax=int(max_iterations),
            log=True,
            center_dual=False,
        )

    result_code = int(log['result_code'])
    if result_code == RESULT_MAX_ITER_REACHED:
        raise SolverError(f"network simplex reached {max_iterations} iterations", result_code=result_code)
    if result_code != RESULT_OPTIMAL:
        raise InternalSolverError(f"network simplex failed: {log.get('warning')}", result_code=result_code)

    u = np.asarray(log['u'], dtype=np.float64)
    v = np.asarray(log['v'], dtype=np.float64)
    anchor = v[0]
    value = float(np.sum(plan * cost))

    logger.debug(f"Exact OT solved: I={a.n} J={b.n} cost={value:.12g} support={np.count_nonzero(plan)}")
    return TransportPlan(plan=plan, cost=value, dual_phi=u + anchor, dual_psi=v - anchor, result_code=result_code)


def w0(a, b):
    return solve_exact(a, b).cost
