"""
Sweep configuration, cell keys and per-repetition records.
"""
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from common.conf import transport_setting
from common.exceptions import ConfigurationError
from estimator.domain import DescentConfig, LossKind, LossSpec
from measures.domain import SimplexVector
from ot_core.bounds import SCHEDULE_VARIANTS

EXECUTORS = ('threads', 'celery')


@dataclass(frozen=True)
class CellKey:
    """
    (loss, lambda, l): W0 셀은 lambda, l 이 None, 정규화 셀의 l = None 은 수렴까지 반복
    """

    loss: str
    lam: float = None
    ell: int = None

    def __post_init__(self):
        object.__setattr__(self, 'loss', LossKind.parse(self.loss).value)
        if self.loss == LossKind.W0.value:
            object.__setattr__(self, 'lam', None)
            object.__setattr__(self, 'ell', None)

    def loss_spec(self):
        return LossSpec(self.loss, lam=self.lam, iteration_budget=self.ell)

    @property
    def lambda_field(self):
        return '' if self.lam is None else repr(float(self.lam))

    @property
    def ell_field(self):
        if self.loss == LossKind.W0.value:
            return ''
        return 'inf' if self.ell is None else str(self.ell)

    @property
    def label(self):
        if self.loss == LossKind.W0.value:
            return self.loss
        return f"{self.loss}[lambda={self.lam:g},l={self.ell_field}]"

    @classmethod
    def from_fields(cls, loss, lam, ell):
        """CSV 의 문자열 필드에서 복원"""
        lam = None if lam in ('', None) or (isinstance(lam, float) and math.isnan(lam)) else float(lam)
        if ell in ('', None, 'inf') or (isinstance(ell, float) and math.isnan(ell)):
            ell = None
        return cls(loss, lam, None if ell is None else int(float(ell)))


@dataclass(frozen=True)
class SweepConfig:
    lambda_grid: tuple = None
    losses: tuple = (LossKind.W0.value, LossKind.WLAMBDA.value, LossKind.SLAMBDA.value)
    iteration_budgets: tuple = (None,)
    repetitions: int = 1
    base_seed: int = 0
    theta_star: SimplexVector = None
    descent: DescentConfig = field(default_factory=DescentConfig)
    threads: int = 1
    executor: str = 'threads'
    lambda_schedule: str = None
    iteration_schedule: str = None
    schedule_radius: float = 1.0

    def __post_init__(self):
        grid = transport_setting('LAMBDA_GRID') if self.lambda_grid is None else self.lambda_grid
        grid = tuple(float(lam) for lam in grid)
        if not grid or any(lam <= 0 or not np.isfinite(lam) for lam in grid):
            raise ConfigurationError(f"lambda grid must be non-empty and positive, got {grid}")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigurationError(f"lambda grid must be strictly increasing, got {grid}")
        object.__setattr__(self, 'lambda_grid', grid)

        losses = tuple(dict.fromkeys(LossKind.parse(loss).value for loss in self.losses))
        if not losses:
            raise ConfigurationError("at least one loss is required")
        object.__setattr__(self, 'losses', losses)

        budgets = tuple(None if b is None else int(b) for b in self.iteration_budgets)
        if not budgets or any(b is not None and b < 1 for b in budgets):
            raise ConfigurationError(f"iteration budgets must be >= 1 or unbounded, got {budgets}")
        object.__setattr__(self, 'iteration_budgets', budgets)

        if self.repetitions < 1:
            raise ConfigurationError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.base_seed < 0:
            raise ConfigurationError(f"base seed must be >= 0, got {self.base_seed}")
        if self.theta_star is not None and not isinstance(self.theta_star, SimplexVector):
            object.__setattr__(self, 'theta_star', SimplexVector(self.theta_star))
        if self.threads < 1:
            raise ConfigurationError(f"threads must be >= 1, got {self.threads}")
        if self.executor not in EXECUTORS:
            raise ConfigurationError(f"executor must be one of {EXECUTORS}, got {self.executor}")
        if self.lambda_schedule is not None and self.lambda_schedule not in SCHEDULE_VARIANTS:
            raise ConfigurationError(f"lambda schedule must be one of {SCHEDULE_VARIANTS}, got {self.lambda_schedule}")
        if self.iteration_schedule is not None and self.iteration_schedule not in SCHEDULE_VARIANTS:
            raise ConfigurationError(
                f"iteration schedule must be one of {SCHEDULE_VARIANTS}, got {self.iteration_schedule}")
        if not self.schedule_radius > 0:
            raise ConfigurationError(f"schedule radius must be > 0, got {self.schedule_radius}")

    def seed_for(self, repetition):
        return self.base_seed + repetition


@dataclass(frozen=True)
class CellRecord:
    cell: CellKey
    rep: int
    error: float
    seconds: float
    sinkhorn_iters: int
    converged: bool
    dataset_hash: str
    theta_hat: tuple = ()
    failure: str = None

    @property
    def failed(self):
        return self.failure is not None

    def as_row(self):
        return {
            'loss': self.cell.loss,
            'lambda': self.cell.lambda_field,
            'ell': self.cell.ell_field,
            'rep': self.rep,
            'error': self.error,
            'seconds': self.seconds,
            'sinkhorn_iters': self.sinkhorn_iters,
            'converged': self.converged,
            'dataset_hash': self.dataset_hash,
        }

    def as_payload(self):
        payload = asdict(self)
        payload['cell'] = asdict(self.cell)
        payload['theta_hat'] = list(self.theta_hat)
        return payload

    @classmethod
    def from_payload(cls, payload):
        payload = dict(payload)
        payload['cell'] = CellKey(**payload['cell'])
        payload['theta_hat'] = tuple(payload['theta_hat'])
        return cls(**payload)


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    """셀별 반복 기록 (cells 순서, 반복 순서로 정렬)"""

    records: tuple
    cells: tuple
    theta_star: tuple = ()
    dataset_hashes: tuple = ()

    def records_for(self, cell):
        return [record for record in self.records if record.cell == cell]
