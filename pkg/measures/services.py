"""
Mixture re-weighting and simplex geometry.
"""
import logging

import numpy as np

from common.exceptions import DimensionMismatchError, EmptyClassError, NonFiniteError
from measures.domain import DiscreteMeasure, MixtureModel, SimplexVector

logger = logging.getLogger(__name__)


def from_labeled(sample):
    """
    라벨별로 분할해 성분 측도 mu_k (atom 당 가중치 1/m_k) 생성

    Raises:
        EmptyClassError: 관측치가 없는 클래스가 있는 경우
    """
    components = []
    for class_id in range(1, sample.n_classes + 1):
        mask = sample.labels == class_id
        if not np.any(mask):
            raise EmptyClassError(class_id)
        components.append(DiscreteMeasure.uniform(sample.points[mask]))

    logger.debug(f"Built mixture from labeled sample: K={sample.n_classes} "
                 f"sizes={[c.n for c in components]}")
    return MixtureModel(tuple(components))


def reweight(model, theta):
    """
    mu_theta = sum_k theta_k mu_k

    성분 순서대로 atom 을 이어 붙이며 theta_k = 0 인 성분의 atom 도 가중치 0 으로 유지합니다.
    """
    theta = theta if isinstance(theta, SimplexVector) else SimplexVector(theta)
    if theta.K != model.K:
        raise DimensionMismatchError(model.K, theta.K, what='number of components')

    weights = np.concatenate([
        theta_k * component.weights
        for theta_k, component in zip(theta.theta, model.components)
    ])
    return DiscreteMeasure(model.points, weights)


def project_simplex(v):
    """
    Euclidean projection onto Sigma_K (sort-and-threshold)

    이미 simplex 위에 있는 입력은 그대로 반환하므로 project(project(v)) == project(v) 가 정확히 성립합니다.
    """
    v = np.asarray(getattr(v, 'theta', v), dtype=np.float64).reshape(-1)
    if v.shape[0] < 1:
        raise DimensionMismatchError('K >= 1', 0, what='vector length')
    if not np.all(np.isfinite(v)):
        raise NonFiniteError(f"cannot project non-finite vector {v.tolist()}")

    if np.all(v >= 0) and abs(float(np.sum(v)) - 1.0) <= 1e-12:
        return SimplexVector(v)

    u = np.sort(v)[::-1]
    cssv = np.cumsum(u) - 1.0
    ind = np.arange(1, v.shape[0] + 1)
    rho = np.count_nonzero(u - cssv / ind > 0)
    tau = cssv[rho - 1] / rho
    return SimplexVector(np.maximum(v - tau, 0.0))
