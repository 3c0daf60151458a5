"""
Types shared by the entropic optimal transport solvers.
"""
from dataclasses import dataclass, field

import numpy as np

from common.conf import transport_setting
from common.exceptions import ConfigurationError, InvalidMeasureError

SQUARED_EUCLIDEAN = 'sqeuclidean'
S_COST = 'scost'


def _readonly(array):
    array = np.array(array, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """
    I x J ground cost

    kind 는 'sqeuclidean' (||x - y||^2) 또는 'scost' (-2 <x, y>)
    max_entry 는 ||c||_inf = max |c_ij|
    """

    entries: np.ndarray
    kind: str = SQUARED_EUCLIDEAN

    def __post_init__(self):
        entries = _readonly(self.entries)
        if entries.ndim != 2:
            raise InvalidMeasureError(f"cost matrix must be 2-D, got shape {entries.shape}")
        object.__setattr__(self, 'entries', entries)

    @property
    def shape(self):
        return self.entries.shape

    @property
    def max_entry(self):
        return float(np.max(np.abs(self.entries)))


@dataclass(frozen=True)
class SinkhornConfig:
    """
    lam: 정규화 파라미터 lambda > 0
    max_iterations: None 이면 marginal residual <= tolerance 까지 반복 (unbounded)
    """

    lam: float
    max_iterations: int = None
    tolerance: float = None
    stall_window: int = None
    stall_min_improvement: float = None
    iteration_cap: int = None

    def __post_init__(self):
        defaults = {
            'tolerance': 'SINKHORN_TOLERANCE',
            'stall_window': 'STALL_WINDOW',
            'stall_min_improvement': 'STALL_MIN_IMPROVEMENT',
            'iteration_cap': 'UNBOUNDED_ITERATION_CAP',
        }
        for name, setting in defaults.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, transport_setting(setting))

        if not np.isfinite(self.lam) or self.lam <= 0:
            raise ConfigurationError(f"lambda must be > 0, got {self.lam}")
        if self.max_iterations is not None and int(self.max_iterations) < 1:
            raise ConfigurationError(f"max_iterations must be >= 1 or unbounded, got {self.max_iterations}")
        if self.tolerance <= 0:
            raise ConfigurationError(f"tolerance must be > 0, got {self.tolerance}")
        if self.stall_window < 1 or self.iteration_cap < 1:
            raise ConfigurationError("stall_window and iteration_cap must be >= 1")

    @property
    def bounded(self):
        return self.max_iterations is not None

    def with_lambda(self, lam):
        return SinkhornConfig(
            lam=lam,
            max_iterations=self.max_iterations,
            tolerance=self.tolerance,
            stall_window=self.stall_window,
            stall_min_improvement=self.stall_min_improvement,
            iteration_cap=self.iteration_cap,
        )



@dataclass(frozen=True, eq=False)
class DualSolution:
    """
    Sinkhorn 결과: cost = <mu, phi> + <nu, psi>

    symmetric=True 이면 W_lambda(a, a) 의 대칭 potential (phi 와 psi 가 같은 배열)
    """

    phi: np.ndarray
    psi: np.ndarray
    cost: float
    iterations: int
    marginal_residual: float
    lam: float
    converged: bool = False
    stalled: bool = False
    symmetric: bool = False
    residual_trace: tuple = field(default=(), repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'phi', _readonly(self.phi))
        object.__setattr__(self, 'psi', self.phi if self.symmetric else _readonly(self.psi))
        if self.marginal_residual < 0:
            raise InvalidMeasureError(f"marginal residual must be >= 0, got {self.marginal_residual}")
        object.__setattr__(self, 'residual_trace', tuple(float(r) for r in self.residual_trace))


@dataclass(frozen=True, eq=False)
class DivergenceResult:
    """S_lambda(a, b) = W(a, b) - (W(a, a) + W(b, b)) / 2 와 세 개의 dual 해"""

    value: float
    cross: DualSolution
    source_symmetric: DualSolution
    target_symmetric: DualSolution

    @property
    def iterations(self):
        if self.cross is self.source_symmetric:
            return self.cross.iterations
        return self.cross.iterations + self.source_symmetric.iterations + self.target_symmetric.iterations

    @property
    def converged(self):
        return self.cross.converged and self.source_symmetric.converged and self.target_symmetric.converged
