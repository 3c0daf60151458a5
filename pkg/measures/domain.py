"""
Discrete probability measures, labeled samples and mixture proportions.

All types are immutable after construction: arrays are copied, converted to
float64 and flagged read-only, so instances can be shared across threads.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from common.conf import transport_setting
from common.exceptions import (
    DimensionMismatchError,
    InvalidMeasureError,
    InvalidSimplexError,
    NonFiniteError,
    UnknownClassError,
)


def _frozen(array):
    array = np.array(array, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


def _as_points(points):
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points.reshape(-1, 1)
    if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
        raise InvalidMeasureError(f"points must be a non-empty n x d matrix, got shape {points.shape}")
    if not np.all(np.isfinite(points)):
        raise NonFiniteError("points contain non-finite coordinates")
    return _frozen(points)


def _normalized(weights, what):
    """
    합계가 1에서 WEIGHT_SUM_TOLERANCE 이상 벗어나면 재정규화

    WEIGHT_SUM_SLACK 이상 벗어나면 확률 벡터가 아닌 것으로 보고 거부합니다.
    """
    total = float(np.sum(weights))
    if abs(total - 1.0) > transport_setting('WEIGHT_SUM_SLACK'):
        raise what(f"weights must sum to 1, got {total!r}")
    if abs(total - 1.0) > transport_setting('WEIGHT_SUM_TOLERANCE'):
        weights = weights / total
    return weights


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Weighted point cloud sum_i w_i delta_{x_i} in R^d"""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        points = _as_points(self.points)
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)

        if weights.shape[0] != points.shape[0]:
            raise DimensionMismatchError(points.shape[0], weights.shape[0], what='number of weights')
        if not np.all(np.isfinite(weights)):
            raise NonFiniteError("weights contain non-finite values")
        if np.any(weights < 0):
            raise InvalidMeasureError("weights must be nonnegative")

        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'weights', _frozen(_normalized(weights, InvalidMeasureError)))

    @classmethod
    def uniform(cls, points):
        points = _as_points(points)
        n = points.shape[0]
        return cls(points, np.full(n, 1.0 / n))

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def d(self):
        return self.points.shape[1]

    def second_moment(self):
        """int ||x||^2 d(measure)"""
        return float(np.dot(self.weights, np.einsum('ij,ij->i', self.points, self.points)))

    def without_null_atoms(self, threshold=None):
        """
        가중치가 threshold 미만인 atom 제거

        Returns:
            (DiscreteMeasure, kept_index): kept_index[i] 는 남은 atom i 의 원래 인덱스
        """
        if threshold is None:
            threshold = transport_setting('NULL_WEIGHT_THRESHOLD')
        kept = np.flatnonzero(self.weights >= threshold)
        if kept.size == self.n:
            return self, kept
        if kept.size == 0:
            raise InvalidMeasureError("every atom has null weight")
        weights = self.weights[kept]
        return DiscreteMeasure(self.points[kept], weights / weights.sum()), kept

    def pushforward_scaled(self, factor):
        """T#measure for T x = factor * x"""
        return DiscreteMeasure(self.points * factor, self.weights)

    def translated(self, offset):
        offset = np.asarray(offset, dtype=np.float64).reshape(-1)
        if offset.shape[0] != self.d:
            raise DimensionMismatchError(self.d, offset.shape[0])
        return DiscreteMeasure(self.points + offset[None, :], self.weights)

    def same_as(self, other):
        """atom 과 가중치가 모두 동일한 (같은 순서의) 측도인지"""
        return self is other or (
            self.points.shape == other.points.shape
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self):
        return f"DiscreteMeasure(n={self.n}, d={self.d})"


@dataclass(frozen=True, eq=False)
class LabeledSample:
    """
    Source observations with 1-based class ids

    n_classes 를 생략하면 labels 의 최댓값을 K 로 사용합니다.
    """

    points: np.ndarray
    labels: np.ndarray
    n_classes: int = None

    def __post_init__(self):
        points = _as_points(self.points)
        raw = np.asarray(self.labels).reshape(-1)
        if raw.shape[0] != points.shape[0]:
            raise DimensionMismatchError(points.shape[0], raw.shape[0], what='number of labels')
        labels = raw.astype(np.int64)
        if not np.array_equal(labels, raw):
            raise InvalidMeasureError("labels must be integers")

        n_classes = int(labels.max()) if self.n_classes is None else int(self.n_classes)
        if n_classes < 1:
            raise InvalidMeasureError(f"number of classes must be >= 1, got {n_classes}")
        out_of_range = labels[(labels < 1) | (labels > n_classes)]
        if out_of_range.size:
            raise UnknownClassError(int(out_of_range[0]), n_classes)

        labels.setflags(write=False)
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'n_classes', n_classes)

    @property
    def m(self):
        return self.points.shape[0]

    @property
    def d(self):
        return self.points.shape[1]

    def class_counts(self):
        """길이 K 배열, k-1 번째 원소 = m_k"""
        return np.bincount(self.labels, minlength=self.n_classes + 1)[1:]

    def __repr__(self):
        return f"LabeledSample(m={self.m}, d={self.d}, K={self.n_classes})"


@dataclass(frozen=True, eq=False)
class SimplexVector:
    """theta in Sigma_K: nonnegative entries summing to 1"""

    theta: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=np.float64).reshape(-1)
        if theta.shape[0] < 1:
            raise InvalidSimplexError("simplex vector must have at least one entry")
        if not np.all(np.isfinite(theta)):
            raise NonFiniteError("simplex vector contains non-finite entries")
        if np.any(theta < 0):
            raise InvalidSimplexError(f"simplex vector entries must be nonnegative, got {theta.tolist()}")
        object.__setattr__(self, 'theta', _frozen(_normalized(theta, InvalidSimplexError)))

    @classmethod
    def uniform(cls, k):
        return cls(np.full(k, 1.0 / k))

    @classmethod
    def one_hot(cls, k, index):
        """index 는 0-based"""
        theta = np.zeros(k)
        theta[index] = 1.0
        return cls(theta)

    @classmethod
    def from_counts(cls, counts):
        counts = np.asarray(counts, dtype=np.float64)
        return cls(counts / counts.sum())

    @property
    def K(self):
        return self.theta.shape[0]

    def has_zero_entries(self):
        return bool(np.any(self.theta == 0.0))

    def distance_squared(self, other):
        diff = self.theta - np.asarray(getattr(other, 'theta', other), dtype=np.float64)
        return float(np.dot(diff, diff))

    def tolist(self):
        return self.theta.tolist()

    def __len__(self):
        return self.K

    def __repr__(self):
        return f"SimplexVector({np.array2string(self.theta, precision=6)})"


@dataclass(frozen=True, eq=False)
class MixtureModel:
    """K component measures mu_1..mu_K sharing the dimension d"""

    components: tuple

    def __post_init__(self):
        components = tuple(self.components)
        if not components:
            raise InvalidMeasureError("a mixture needs at least one component")
        d = components[0].d
        for component in components[1:]:
            if component.d != d:
                raise DimensionMismatchError(d, component.d)
        object.__setattr__(self, 'components', components)

    @property
    def K(self):
        return len(self.components)

    @property
    def d(self):
        return self.components[0].d

    @cached_property
    def offsets(self):
        """reweight 결과의 atom 순서에서 각 성분이 차지하는 slice 목록"""
        bounds = np.concatenate([[0], np.cumsum([c.n for c in self.components])])
        return tuple(slice(int(start), int(stop)) for start, stop in zip(bounds[:-1], bounds[1:]))

    @cached_property
    def points(self):
        points = np.vstack([c.points for c in self.components])
        points.setflags(write=False)
        return points

    @cached_property
    def component_of_atom(self):
        """concatenated atom -> 0-based component index"""
        owner = np.concatenate([np.full(c.n, k) for k, c in enumerate(self.components)])
        owner.setflags(write=False)
        return owner

    def __repr__(self):
        return f"MixtureModel(K={self.K}, d={self.d}, sizes={[c.n for c in self.components]})"
