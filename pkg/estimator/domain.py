"""
Loss specifications, descent settings and estimation results.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from common.conf import transport_setting
from common.exceptions import ConfigurationError
from measures.domain import SimplexVector
from ot_core.domain import SinkhornConfig


class LossKind(str, Enum):
    W0 = 'W0'
    WLAMBDA = 'Wlambda'
    SLAMBDA = 'Slambda'

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        for kind in cls:
            if str(value).strip().lower() == kind.value.lower():
                return kind
        raise ConfigurationError(f"unknown loss {value!r}, expected one of {[k.value for k in cls]}")

    @property
    def regularized(self):
        return self is not LossKind.W0


@dataclass(frozen=True)
class LossSpec:
    """
    kind: W0 / Wlambda / Slambda
    lam: W0 이외에는 필수 (> 0)
    iteration_budget: Sinkhorn 반복 횟수 l, None 이면 수렴까지 (unbounded)
    """

    kind: LossKind
    lam: float = None
    iteration_budget: int = None

    def __post_init__(self):
        kind = LossKind.parse(self.kind)
        object.__setattr__(self, 'kind', kind)
        if not kind.regularized:
            # W0 는 lambda, l 과 무관
            object.__setattr__(self, 'lam', None)
            object.__setattr__(self, 'iteration_budget', None)
            return
        if self.lam is None or not np.isfinite(self.lam) or self.lam <= 0:
            raise ConfigurationError(f"{kind.value} needs lambda > 0, got {self.lam}")
        if self.iteration_budget is not None and int(self.iteration_budget) < 1:
            raise ConfigurationError(f"iteration budget must be >= 1 or unbounded, got {self.iteration_budget}")

    def sinkhorn_config(self, tolerance=None):
        if not self.kind.regularized:
            raise ConfigurationError("W0 has no Sinkhorn configuration")
        return SinkhornConfig(lam=self.lam, max_iterations=self.iteration_budget, tolerance=tolerance)

    @property
    def label(self):
        if not self.kind.regularized:
            return self.kind.value
        budget = 'inf' if self.iteration_budget is None else self.iteration_budget
        return f"{self.kind.value}(lambda={self.lam}, l={budget})"


@dataclass(frozen=True)
class DescentConfig:
    step_size: float = None
    max_outer_iterations: int = None
    theta_tolerance: float = None
    backtracking_factor: float = None
    max_halvings: int = None
    seed_theta: object = 'uniform'
    warm_start: bool = True
    sinkhorn_tolerance: float = None

    def __post_init__(self):
        defaults = {
            'step_size': 'STEP_SIZE',
            'max_outer_iterations': 'MAX_OUTER_ITERATIONS',
            'theta_tolerance': 'THETA_TOLERANCE',
            'backtracking_factor': 'BACKTRACKING_FACTOR',
            'max_halvings': 'MAX_HALVINGS',
            'sinkhorn_tolerance': 'SINKHORN_TOLERANCE',
        }
        for name, setting in defaults.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, transport_setting(setting))

        if self.step_size <= 0 or self.theta_tolerance <= 0 or self.sinkhorn_tolerance <= 0:
            raise ConfigurationError("step_size, theta_tolerance and sinkhorn_tolerance must be > 0")
        if self.max_outer_iterations < 1 or self.max_halvings < 0:
            raise ConfigurationError("max_outer_iterations must be >= 1 and max_halvings >= 0")
        if not 0 < self.backtracking_factor < 1:
            raise ConfigurationError(f"backtracking factor must be in (0, 1), got {self.backtracking_factor}")
        if not (self.uniform_seed or isinstance(self.seed_theta, SimplexVector)):
            object.__setattr__(self, 'seed_theta', SimplexVector(self.seed_theta))

    @property
    def uniform_seed(self):
        return isinstance(self.seed_theta, str) and self.seed_theta == 'uniform'

    def initial_theta(self, k):
        if isinstance(self.seed_theta, SimplexVector):
            if self.seed_theta.K != k:
                raise ConfigurationError(f"seed theta has {self.seed_theta.K} entries, model has {k} components")
            return self.seed_theta
        return SimplexVector.uniform(k)


@dataclass(frozen=True, eq=False)
class LossEvaluation:
    """
    한 번의 손실 계산 결과

    gradient[k] = <phi, mu_k> (S_lambda 는 대칭 항 보정 포함)
    warm: 다음 호출의 Sinkhorn warm start 용 potential (target 쪽 psi, 대칭 f 들)
    """

    value: float
    gradient: np.ndarray
    sinkhorn_iterations: int = 0
    zero_entries: bool = False
    converged: bool = True
    warm: dict = field(default_factory=dict, repr=False)


@dataclass(frozen=True, eq=False)
class EstimateResult:
    theta_hat: SimplexVector
    loss_trace: tuple
    gradient_norm_trace: tuple
    converged: bool
    total_sinkhorn_iterations: int
    outer_iterations: int = 0
    best_loss: float = None
    line_search_failed: bool = False
    zero_entry_gradients: int = 0

    def as_dict(self):
        return {
            'theta_hat': self.theta_hat.tolist(),
            'best_loss': self.best_loss,
            'converged': self.converged,
            'outer_iterations': self.outer_iterations,
            'total_sinkhorn_iterations': self.total_sinkhorn_iterations,
            'line_search_failed': self.line_search_failed,
            'zero_entry_gradients': self.zero_entry_gradients,
        }
