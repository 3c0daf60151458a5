"""
Numerical identities between regularized transport values.
"""
import logging

import numpy as np

from ot_core.costs import s_cost_matrix
from ot_core.domain import SinkhornConfig
from ot_core.sinkhorn import sinkhorn

logger = logging.getLogger(__name__)


def _converged_config(lam, cfg):
    """identity 검증은 항상 수렴 모드로 실행"""
    if cfg is None:
        return SinkhornConfig(lam=lam)
    return SinkhornConfig(
        lam=lam,
        max_iterations=None,
        tolerance=cfg.tolerance,
        stall_window=cfg.stall_window,
        stall_min_improvement=cfg.stall_min_improvement,
        iteration_cap=cfg.iteration_cap,
    )


def s_cost_identity_check(a, b, lam, cfg=None):
    """
    W_lam(a, b) 와 int ||x||^2 da + int ||y||^2 db + W^s_lam(a, b)

    W^s_lam 는 s(x, y) = -2 <x, y> 비용으로 Sinkhorn 을 실행한 값

    Returns:
        (lhs, rhs)
    """
    cfg = _converged_config(lam, cfg)
    lhs = sinkhorn(a, b, cfg).cost
    scost = sinkhorn(a, b, cfg, cost=s_cost_matrix(a, b)).cost
    rhs = a.second_moment() + b.second_moment() + scost
    logger.debug(f"s-cost identity: lambda={lam} lhs={lhs:.12g} rhs={rhs:.12g}")
    return lhs, rhs


def rescaling_check(a, b, lam, cfg=None):
    """
    W_lam(a, b) 와 lam * W_1(T#a, T#b), T x = x / sqrt(lam)

    Returns:
        (lhs, rhs)
    """
    cfg = _converged_config(lam, cfg)
    lhs = sinkhorn(a, b, cfg).cost
    factor = 1.0 / np.sqrt(lam)
    unit = sinkhorn(a.pushforward_scaled(factor), b.pushforward_scaled(factor), cfg.with_lambda(1.0)).cost
    rhs = lam * unit
    logger.debug(f"rescaling identity: lambda={lam} lhs={lhs:.12g} rhs={rhs:.12g}")
    return lhs, rhs
