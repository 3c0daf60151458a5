"""
Checkable error bounds and the lambda_n / l_n schedules.
"""
import math

from common.exceptions import ConfigurationError

DIMENSION_FREE = 'dimension_free'
CLASSICAL = 'classical'
SCHEDULE_VARIANTS = (DIMENSION_FREE, CLASSICAL)


def regularization_bias_bound(lam, d, radius):
    """
    B(lam) = 2 d lam log(8 e^2 R^2 / (sqrt(d) lam))

    supp(mu), supp(nu) in B(0, R) 일 때 0 <= W_lam - W_0 <= B(lam)
    """
    if lam <= 0 or d < 1 or radius <= 0:
        raise ConfigurationError(f"invalid bound arguments: lambda={lam} d={d} R={radius}")
    return 2.0 * d * lam * math.log(8.0 * math.e ** 2 * radius ** 2 / (math.sqrt(d) * lam))


def iteration_error_bound(max_cost, lam, iterations):
    """|W^(l) - W_converged| <= ||c||_inf^2 / (lam l)"""
    if lam <= 0 or iterations < 1:
        raise ConfigurationError(f"invalid bound arguments: lambda={lam} iterations={iterations}")
    return max_cost ** 2 / (lam * iterations)


def iterations_for_accuracy(max_cost, lam, target_error):
    """iteration_error_bound 가 target_error 이하가 되는 최소 l"""
    if target_error <= 0:
        raise ConfigurationError(f"target error must be > 0, got {target_error}")
    return max(1, math.ceil(max_cost ** 2 / (lam * target_error)))


def _check_schedule(n, d, loss, variant):
    if n < 2 or d < 1:
        raise ConfigurationError(f"schedule needs n >= 2 and d >= 1, got n={n} d={d}")
    if loss not in ('Wlambda', 'Slambda'):
        raise ConfigurationError(f"schedules exist for Wlambda and Slambda only, got {loss}")
    if variant not in SCHEDULE_VARIANTS:
        raise ConfigurationError(f"unknown schedule variant {variant}, expected one of {SCHEDULE_VARIANTS}")


def regularization_schedule(n, d, loss, variant=DIMENSION_FREE):
    """
    lambda_n

    dimension_free: W_lam -> n^(-2/d), S_lam -> n^(-1/d)
    classical:      W_lam -> n^(-1/(d+2)), S_lam -> n^(-1/(d+4))
    """
    _check_schedule(n, d, loss, variant)
    if variant == DIMENSION_FREE:
        exponent = 2.0 / d if loss == 'Wlambda' else 1.0 / d
    else:
        exponent = 1.0 / (d + 2) if loss == 'Wlambda' else 1.0 / (d + 4)
    return n ** -exponent


def iteration_schedule(n, d, loss, radius=1.0, variant=DIMENSION_FREE):
    """
    l_n, lambda_n 와 함께 알고리즘 오차를 통계 오차 이하로 유지하는 Sinkhorn 반복 횟수

    dimension_free: W_lam -> 32 R^4 n^(4/d), S_lam -> 64 R^4 n^(3/d)
    classical:      W_lam -> 32 R^4 n^(2/(d+2)) / log n, S_lam -> 64 R^4 n^(3/(d+4))
    """
    _check_schedule(n, d, loss, variant)
    r4 = radius ** 4
    if variant == DIMENSION_FREE:
        value = 32 * r4 * n ** (4.0 / d) if loss == 'Wlambda' else 64 * r4 * n ** (3.0 / d)
    elif loss == 'Wlambda':
        value = 32 * r4 * n ** (2.0 / (d + 2)) / math.log(n)
    else:
        value = 64 * r4 * n ** (3.0 / (d + 4))
    return max(1, math.ceil(value))
