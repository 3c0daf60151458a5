"""
Numerical defaults, overridable through settings.OPTIMAL_TRANSPORT.
"""
from django.conf import settings

DEFAULTS = {
    # Sinkhorn
    'SINKHORN_TOLERANCE': 1e-9,
    'STALL_WINDOW': 100,
    'STALL_MIN_IMPROVEMENT': 1e-16,
    'UNBOUNDED_ITERATION_CAP': 100_000,
    'NULL_WEIGHT_THRESHOLD': 1e-15,
    # 측도 정규화 허용 오차
    'WEIGHT_SUM_TOLERANCE': 1e-12,
    'WEIGHT_SUM_SLACK': 1e-8,
    # exact OT
    'LP_MAX_ITERATIONS': 1_000_000,
    # gradient descent
    'STEP_SIZE': 0.05,
    'BACKTRACKING_FACTOR': 0.5,
    'MAX_HALVINGS': 8,
    'MAX_OUTER_ITERATIONS': 500,
    'THETA_TOLERANCE': 1e-6,
    # experiment
    'LAMBDA_GRID': [0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0],
}


def transport_setting(name):
    """
    settings.OPTIMAL_TRANSPORT[name] 반환, 없으면 DEFAULTS 사용

    Django settings가 구성되지 않은 환경(라이브러리 단독 사용)에서도 동작합니다.
    """
    if name not in DEFAULTS:
        raise KeyError(f"Unknown optimal transport setting: {name}")
    if not settings.configured:
        return DEFAULTS[name]
    overrides = getattr(settings, 'OPTIMAL_TRANSPORT', {})
    return overrides.get(name, DEFAULTS[name])
