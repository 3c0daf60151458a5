from dataclasses import dataclass

import numpy as np

from common.exceptions import ConfigurationError, DimensionMismatchError
from measures.domain import DiscreteMeasure, LabeledSample, SimplexVector


def _readonly(array, dtype=np.float64):
    array = np.array(array, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class GaussianMixtureSpec:
    """
    mu = sum_k pi_k N(rho_k, sigma^2 I_d), nu = sum_k theta*_k N(rho_k, sigma^2 I_d)

    실제 표본 수는 SampleBudget 의 고정 개수를 따르며 비율 벡터는 기록용입니다.
    """

    means: np.ndarray
    sigma: float
    source_props: SimplexVector
    target_props: SimplexVector

    def __post_init__(self):
        means = np.asarray(self.means, dtype=np.float64)
        if means.ndim == 1:
            means = means.reshape(-1, 1)
        if means.ndim != 2 or means.shape[0] < 1 or means.shape[1] < 1:
            raise ConfigurationError(f"means must be a K x d matrix, got shape {means.shape}")
        if not np.isfinite(self.sigma) or self.sigma <= 0:
            raise ConfigurationError(f"sigma must be > 0, got {self.sigma}")

        source_props = self.source_props if isinstance(self.source_props, SimplexVector) \
            else SimplexVector(self.source_props)
        target_props = self.target_props if isinstance(self.target_props, SimplexVector) \
            else SimplexVector(self.target_props)
        for props in (source_props, target_props):
            if props.K != means.shape[0]:
                raise DimensionMismatchError(means.shape[0], props.K, what='number of proportions')

        object.__setattr__(self, 'means', _readonly(means))
        object.__setattr__(self, 'sigma', float(self.sigma))
        object.__setattr__(self, 'source_props', source_props)
        object.__setattr__(self, 'target_props', target_props)

    @property
    def K(self):
        return self.means.shape[0]

    @property
    def d(self):
        return self.means.shape[1]


@dataclass(frozen=True, eq=False)
class SampleBudget:
    """클래스별 고정 표본 수 m_k (source), n_k (target)"""

    per_class_source: np.ndarray
    per_class_target: np.ndarray

    def __post_init__(self):
        for name in ('per_class_source', 'per_class_target'):
            raw = np.asarray(getattr(self, name)).reshape(-1)
            counts = raw.astype(np.int64)
            if counts.size < 1 or not np.array_equal(counts, raw) or np.any(counts < 1):
                raise ConfigurationError(f"{name} must be integers >= 1, got {raw.tolist()}")
            object.__setattr__(self, name, _readonly(counts, dtype=np.int64))
        if self.per_class_source.size != self.per_class_target.size:
            raise DimensionMismatchError(self.per_class_source.size, self.per_class_target.size,
                                         what='number of classes in budget')

    @property
    def K(self):
        return self.per_class_source.size

    @property
    def m(self):
        return int(self.per_class_source.sum())

    @property
    def n(self):
        return int(self.per_class_target.sum())


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    source (라벨 포함), target (균등 가중치), 평가 전용 target 라벨, 정답 비율 theta*
    """

    source: LabeledSample
    target: DiscreteMeasure
    target_labels: np.ndarray
    theta_star: SimplexVector

    def __post_init__(self):
        object.__setattr__(self, 'target_labels', _readonly(self.target_labels, dtype=np.int64))

    def __iter__(self):
        return iter((self.source, self.target, self.target_labels))
