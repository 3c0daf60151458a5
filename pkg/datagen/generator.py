"""
Simulated and sub-sampled datasets for the class-proportion experiments.
"""
import hashlib
import logging
from pathlib import Path

import numpy as np

from common.exceptions import ConfigurationError, DimensionMismatchError
from datagen.domain import Dataset, GaussianMixtureSpec, SampleBudget
from datagen.rng import MEANS_STREAM, RandomStream
from measures.domain import DiscreteMeasure, LabeledSample, SimplexVector
from measures.io import write_labels_csv, write_source_csv, write_target_csv

logger = logging.getLogger(__name__)

REFERENCE_K = 5
REFERENCE_D = 6
REFERENCE_SIGMA = 1.0
REFERENCE_SOURCE_PER_CLASS = 50
REFERENCE_TARGET_COUNTS = (20, 5, 8, 7, 10)

MEAN_BOX_HALF_WIDTH = 5.0
MIN_MEAN_SEPARATION = 4.0
MAX_MEAN_ATTEMPTS = 10_000


def _class_block(stream, mean, sigma, count):
    return mean[None, :] + sigma * stream.normal((count, mean.shape[0]))


def draw(spec, budget, seed):
    """
    source: 클래스 k 마다 정확히 m_k 개, target: 클래스 k 마다 n_k 개 (고정 개수)

    같은 seed 면 비트 단위로 같은 결과를 반환합니다.
    """
    if spec.K != budget.K:
        raise DimensionMismatchError(spec.K, budget.K, what='number of classes in budget')

    stream = RandomStream(seed)
    source_blocks, source_labels = [], []
    for k in range(spec.K):
        source_blocks.append(_class_block(stream, spec.means[k], spec.sigma, int(budget.per_class_source[k])))
        source_labels.append(np.full(int(budget.per_class_source[k]), k + 1))

    target_blocks, target_labels = [], []
    for k in range(spec.K):
        target_blocks.append(_class_block(stream, spec.means[k], spec.sigma, int(budget.per_class_target[k])))
        target_labels.append(np.full(int(budget.per_class_target[k]), k + 1))

    source = LabeledSample(np.vstack(source_blocks), np.concatenate(source_labels), n_classes=spec.K)
    target = DiscreteMeasure.uniform(np.vstack(target_blocks))
    labels = np.concatenate(target_labels)

    logger.debug(f"Drew simulated dataset: seed={seed} m={source.m} n={target.n} d={spec.d}")
    return Dataset(
        source=source,
        target=target,
        target_labels=labels,
        theta_star=SimplexVector.from_counts(budget.per_class_target),
    )


def separated_means(stream, k, d, sigma, half_width=MEAN_BOX_HALF_WIDTH, separation=MIN_MEAN_SEPARATION):
    """
    [-half_width sigma, half_width sigma]^d 에서 균등 추출, 모든 쌍의 거리가 separation sigma 이상이 될 때까지 재추출
    """
    for _ in range(MAX_MEAN_ATTEMPTS):
        means = stream.uniform((k, d), low=-half_width * sigma, high=half_width * sigma)
        gaps = np.linalg.norm(means[:, None, :] - means[None, :, :], axis=2)
        if k == 1 or np.min(gaps[np.triu_indices(k, 1)]) >= separation * sigma:
            return means
    raise ConfigurationError(f"could not draw {k} means with separation {separation} sigma in dimension {d}")


def default_reference_spec(seed):
    """
    K=5, d=6, sigma=1, m_k=50, target counts (20, 5, 8, 7, 10)

    Returns:
        (GaussianMixtureSpec, SampleBudget)
    """
    stream = RandomStream(seed, stream=MEANS_STREAM)
    means = separated_means(stream, REFERENCE_K, REFERENCE_D, REFERENCE_SIGMA)
    budget = SampleBudget(
        per_class_source=np.full(REFERENCE_K, REFERENCE_SOURCE_PER_CLASS),
        per_class_target=np.asarray(REFERENCE_TARGET_COUNTS),
    )
    spec = GaussianMixtureSpec(
        means=means,
        sigma=REFERENCE_SIGMA,
        source_props=SimplexVector.uniform(REFERENCE_K),
        target_props=SimplexVector.from_counts(REFERENCE_TARGET_COUNTS),
    )
    return spec, budget


def subsample(source, target, per_class_source, n_target, seed):
    """
    실측 데이터 프로토콜: source 는 클래스마다 per_class_source 개, target 은 n_target 개 무작위 추출

    theta* 는 추출 전 전체 target 라벨의 비율

    Args:
        source: LabeledSample
        target: LabeledSample (평가용 라벨 포함 target)
    """
    if source.d != target.d:
        raise DimensionMismatchError(source.d, target.d)
    if n_target < 1 or per_class_source < 1:
        raise ConfigurationError("per_class_source and n_target must be >= 1")

    stream = RandomStream(seed)
    chosen = []
    for class_id in range(1, source.n_classes + 1):
        members = np.flatnonzero(source.labels == class_id)
        if members.size < per_class_source:
            logger.warning(f"Class smaller than requested subsample, keeping all: class={class_id} "
                           f"available={members.size} requested={per_class_source}")
        chosen.append(members[stream.choice(members.size, min(per_class_source, members.size))])
    chosen = np.concatenate(chosen)

    if target.m < n_target:
        logger.warning(f"Target smaller than requested subsample, keeping all: "
                       f"available={target.m} requested={n_target}")
    picked = stream.choice(target.m, min(n_target, target.m))

    n_classes = max(source.n_classes, target.n_classes)
    theta_star = SimplexVector.from_counts(np.bincount(target.labels, minlength=n_classes + 1)[1:n_classes + 1])
    return Dataset(
        source=LabeledSample(source.points[chosen], source.labels[chosen], n_classes=source.n_classes),
        target=DiscreteMeasure.uniform(target.points[picked]),
        target_labels=target.labels[picked],
        theta_star=theta_star,
    )


def dataset_hash(source, target):
    """source/target 의 16자리 SHA-256 지문 (반복 r 의 데이터 쌍 확인용)"""
    digest = hashlib.sha256()
    for array in (source.points, source.labels, target.points, target.weights):
        contiguous = np.ascontiguousarray(array)
        digest.update(str(contiguous.shape).encode())
        digest.update(contiguous.tobytes())
    return digest.hexdigest()[:16]


def write_dataset(dataset, directory):
    """
    Returns:
        dict: source / target / labels 파일 경로
    """
    directory = Path(directory)
    paths = {
        'source': write_source_csv(dataset.source, directory / 'source.csv'),
        'target': write_target_csv(dataset.target, directory / 'target.csv'),
        'labels': write_labels_csv(dataset.target_labels, directory / 'target_labels.csv'),
    }
    logger.info(f"Wrote dataset: directory={directory} m={dataset.source.m} n={dataset.target.n}")
    return paths
