"""
Log-domain Sinkhorn iterations.

Alternating updates, starting from psi^0 = 0:

    phi_i <- -lam log sum_j exp((psi_j - c_ij) / lam) nu_j
    psi_j <- -lam log sum_i exp((phi_i - c_ij) / lam) mu_i

and the averaged symmetric update f <- (f + T(f)) / 2 for W_lam(a, a).
Every log-sum-exp goes through scipy.special.logsumexp (max-subtracted).
"""
import logging

import numpy as np
from scipy.special import logsumexp

from common.exceptions import DimensionMismatchError, NonFiniteError, ZeroWeightError
from ot_core.costs import cost_matrix
from ot_core.domain import DivergenceResult, DualSolution

logger = logging.getLogger(__name__)


def log_weights(measure):
    if np.any(measure.weights <= 0):
        raise ZeroWeightError(
            f"measure has {int(np.sum(measure.weights <= 0))} zero-weight atoms; drop them before Sinkhorn"
        )
    return np.log(measure.weights)


def row_transform(cost, psi, log_nu, lam):
    """phi_i = -lam log sum_j exp((psi_j - c_ij) / lam) nu_j"""
    return -lam * logsumexp((psi[None, :] - cost) / lam + log_nu[None, :], axis=1)


def column_transform(cost, phi, log_mu, lam):
    """psi_j = -lam log sum_i exp((phi_i - c_ij) / lam) mu_i"""
    return -lam * logsumexp((phi[:, None] - cost) / lam + log_mu[:, None], axis=0)


def row_residual(weights, current, updated, lam):
    """
    L1 거리 sum_i |sum_j pi_ij - mu_i|

    psi 갱신 직후에는 열 marginal 이 정확하므로 행 marginal 만 남습니다.
    sum_j pi_ij = mu_i exp((phi_i - phi_i') / lam), phi' = row_transform(psi)
    """
    return float(np.sum(weights * np.abs(np.expm1((current - updated) / lam))))


def _resolve_cost(a, b, cost):
    if cost is None:
        return cost_matrix(a, b).entries
    entries = getattr(cost, 'entries', cost)
    if entries.shape != (a.n, b.n):
        raise DimensionMismatchError((a.n, b.n), entries.shape, what='cost matrix shape')
    return entries


def _check_finite(*arrays):
    for array in arrays:
        if not np.all(np.isfinite(array)):
            raise NonFiniteError("Sinkhorn potentials overflowed despite log-domain stabilization")


class _StopRule:
    """bounded: 정확히 max_iterations 회 / unbounded: tolerance, stall, iteration cap"""

    def __init__(self, cfg):
        self.cfg = cfg
        self.converged = False
        self.stalled = False
        self.capped = False

    def should_stop(self, iterations, trace):
        cfg = self.cfg
        residual = trace[-1]
        self.converged = residual <= cfg.tolerance
        if cfg.bounded:
            return iterations >= cfg.max_iterations
        if self.converged:
            return True
        window = cfg.stall_window
        if len(trace) > window and trace[-window - 1] - residual < cfg.stall_min_improvement:
            self.stalled = True
            return True
        if iterations >= cfg.iteration_cap:
            self.capped = True
            return True
        return False

    def report(self, kind, iterations, residual):
        if self.stalled:
            logger.warning(f"Sinkhorn stalled: kind={kind} lambda={self.cfg.lam} "
                           f"iterations={iterations} residual={residual:.3e}")
        elif self.capped:
            logger.warning(f"Sinkhorn hit iteration cap: kind={kind} lambda={self.cfg.lam} "
                           f"iterations={iterations} residual={residual:.3e}")
        else:
            logger.debug(f"Sinkhorn finished: kind={kind} lambda={self.cfg.lam} "
                         f"iterations={iterations} residual={residual:.3e}")


def sinkhorn(a, b, cfg, cost=None, init_psi=None):
    """
    W_lambda^(l)(a, b) 와 dual potential (phi^(l), psi^(l))

    Args:
        a, b: 양의 가중치만 가진 DiscreteMeasure (null atom 은 미리 제거)
        cfg: SinkhornConfig
        cost: 미리 계산한 CostMatrix 또는 배열 (s-cost 등), 없으면 quadratic cost
        init_psi: warm start 용 psi^0 (unbounded 모드에서만 사용)

    Returns:
        DualSolution: cost = <mu, phi> + <nu, psi>
    """
    lam = cfg.lam
    c = _resolve_cost(a, b, cost)
    log_mu, log_nu = log_weights(a), log_weights(b)

    psi = np.zeros(b.n)
    if init_psi is not None and not cfg.bounded:
        psi = np.asarray(init_psi, dtype=np.float64).copy()
        if psi.shape != (b.n,):
            raise DimensionMismatchError(b.n, psi.shape[0], what='warm start length')

    rule = _StopRule(cfg)
    trace = []
    iterations = 0
    phi = row_transform(c, psi, log_nu, lam)
    while True:
        psi = column_transform(c, phi, log_mu, lam)
        iterations += 1
        phi_next = row_transform(c, psi, log_nu, lam)
        _check_finite(phi, psi, phi_next)
        trace.append(row_residual(a.weights, phi, phi_next, lam))
        if rule.should_stop(iterations, trace):
            break
        phi = phi_next

    value = float(np.dot(a.weights, phi) + np.dot(b.weights, psi))
    if not np.isfinite(value):
        raise NonFiniteError(f"Sinkhorn cost is not finite: lambda={lam}")
    rule.report('alternating', iterations, trace[-1])

    return DualSolution(
        phi=phi,
        psi=psi,
        cost=value,
        iterations=iterations,
        marginal_residual=trace[-1],
        lam=lam,
        converged=rule.converged,
        stalled=rule.stalled,
        residual_trace=trace,
    )


def symmetric_sinkhorn(a, cfg, cost=None, init=None):
    """
    W_lambda(a, a) 의 대칭 potential f

    f <- (f + T(f)) / 2 를 반복하고 마지막 한 번은 f <- T(f) 로 끝냅니다.
    평균 갱신과 마지막 갱신 모두 1 iteration 으로 계산합니다.
    cost = 2 <a, f>
    """
    lam = cfg.lam
    c = _resolve_cost(a, a, cost)
    log_a = log_weights(a)

    def transform(potential):
        return row_transform(c, potential, log_a, lam)

    f = np.zeros(a.n)
    if init is not None and not cfg.bounded:
        f = np.asarray(init, dtype=np.float64).copy()
        if f.shape != (a.n,):
            raise DimensionMismatchError(a.n, f.shape[0], what='warm start length')

    rule = _StopRule(cfg)
    trace = []
    iterations = 0
    while True:
        g = transform(f)
        iterations += 1
        _check_finite(g)
        trace.append(row_residual(a.weights, f, g, lam))
        if rule.should_stop(iterations, trace):
            f = g
            break
        f = 0.5 * (f + g)

    # 반환하는 f 자체의 residual
    residual = row_residual(a.weights, f, transform(f), lam)
    trace.append(residual)
    converged = residual <= cfg.tolerance
    value = float(2.0 * np.dot(a.weights, f))
    if not np.isfinite(value):
        raise NonFiniteError(f"symmetric Sinkhorn cost is not finite: lambda={lam}")
    rule.report('symmetric', iterations, residual)

    return DualSolution(
        phi=f,
        psi=f,
        cost=value,
        iterations=iterations,
        marginal_residual=residual,
        lam=lam,
        converged=converged,
        stalled=rule.stalled,
        symmetric=True,
        residual_trace=trace,
    )


def sinkhorn_divergence(a, b, cfg, init_psi=None, init_source=None, init_target=None):
    """
    S_lambda(a, b) = W(a, b) - (W(a, a) + W(b, b)) / 2

    bounded 모드에서는 세 항 모두 l 회 반복한 값 (S_lambda^(l)).
    a 와 b 가 같은 측도면 대칭 해 하나를 재사용하고 값은 정확히 0 입니다.
    """
    if a.same_as(b):
        sym = symmetric_sinkhorn(a, cfg, init=init_source)
        return DivergenceResult(value=0.0, cross=sym, source_symmetric=sym, target_symmetric=sym)

    cross = sinkhorn(a, b, cfg, init_psi=init_psi)
    source_sym = symmetric_sinkhorn(a, cfg, init=init_source)
    target_sym = symmetric_sinkhorn(b, cfg, init=init_target)
    value = cross.cost - 0.5 * (source_sym.cost + target_sym.cost)

    logger.debug(f"Sinkhorn divergence: lambda={cfg.lam} value={value:.12g} "
                 f"iterations={cross.iterations}+{source_sym.iterations}+{target_sym.iterations}")
    return DivergenceResult(value=value, cross=cross, source_symmetric=source_sym, target_symmetric=target_sym)


def transport_plan(solution, a, b, cost=None):
    """pi_ij = exp((phi_i + psi_j - c_ij) / lam) mu_i nu_j"""
    c = _resolve_cost(a, b, cost)
    lam = solution.lam
    log_plan = (solution.phi[:, None] + solution.psi[None, :] - c) / lam
    return np.exp(log_plan + np.log(a.weights)[:, None] + np.log(b.weights)[None, :])
