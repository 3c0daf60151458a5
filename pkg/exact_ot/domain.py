from dataclasses import dataclass

import numpy as np


def _readonly(array):
    array = np.array(array, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """
    W_0 의 최적 수송 계획과 dual potential

    dual_psi 는 dual_psi[0] = 0 으로 고정 (potential 은 상수 차이만큼 자유로움)
    """

    plan: np.ndarray
    cost: float
    dual_phi: np.ndarray
    dual_psi: np.ndarray
    result_code: int = 1

    def __post_init__(self):
        for name in ('plan', 'dual_phi', 'dual_psi'):
            object.__setattr__(self, name, _readonly(getattr(self, name)))

    @property
    def dual_cost(self):
        """<phi, mu> + <psi, nu> 는 plan 의 marginal 로 계산"""
        return float(np.dot(self.plan.sum(axis=1), self.dual_phi) + np.dot(self.plan.sum(axis=0), self.dual_psi))

    def support_size(self, threshold=0.0):
        return int(np.count_nonzero(self.plan > threshold))
