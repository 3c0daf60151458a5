"""
factory_boy factories for the value objects of every app.

Random points come from numpy generators seeded by the factory sequence, so
each factory call is reproducible.
"""
import factory
import numpy as np
from factory import LazyAttribute, Sequence

from datagen.domain import GaussianMixtureSpec
from estimator.domain import DescentConfig, LossSpec
from measures.domain import DiscreteMeasure, LabeledSample, SimplexVector
from ot_core.domain import SinkhornConfig


def ball_points(seed, n, d, radius=1.0):
    """B(0, radius) 안의 균등 분포 점"""
    rng = np.random.default_rng(seed)
    direction = rng.standard_normal((n, d))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    return direction * (radius * rng.uniform(size=n) ** (1.0 / d))[:, None]


class DiscreteMeasureFactory(factory.Factory):
    """균등 가중치 DiscreteMeasure (기본: 단위 공 안의 5개 점, d=2)"""

    class Meta:
        model = DiscreteMeasure

    class Params:
        seed = Sequence(lambda n: n)
        n = 5
        d = 2
        radius = 1.0
        # 임의의 양의 가중치
        random_weights = factory.Trait(
            weights=LazyAttribute(lambda o: np.random.default_rng(o.seed + 10_000).uniform(0.1, 1.0, o.n))
        )

    points = LazyAttribute(lambda o: ball_points(o.seed, o.n, o.d, o.radius))
    weights = LazyAttribute(lambda o: np.full(o.n, 1.0 / o.n))


class LabeledSampleFactory(factory.Factory):
    """클래스별 per_class 개의 점, 클래스 k 는 (4k, 0, ...) 근처"""

    class Meta:
        model = LabeledSample

    class Params:
        seed = Sequence(lambda n: n)
        per_class = (3, 3)
        d = 2
        spread = 0.5

    points = LazyAttribute(lambda o: np.vstack([
        np.eye(1, o.d, 0)[0] * 4.0 * k + ball_points(o.seed * 31 + k, count, o.d, o.spread)
        for k, count in enumerate(o.per_class, 1)
    ]))
    labels = LazyAttribute(lambda o: np.repeat(np.arange(1, len(o.per_class) + 1), o.per_class))
    n_classes = None


class SimplexVectorFactory(factory.Factory):
    class Meta:
        model = SimplexVector

    class Params:
        seed = Sequence(lambda n: n)
        k = 3

    theta = LazyAttribute(lambda o: np.random.default_rng(o.seed).dirichlet(np.ones(o.k)))


class SinkhornConfigFactory(factory.Factory):
    class Meta:
        model = SinkhornConfig

    lam = 0.5
    max_iterations = None
    tolerance = 1e-12


class LossSpecFactory(factory.Factory):
    class Meta:
        model = LossSpec

    kind = 'Wlambda'
    lam = 0.5
    iteration_budget = None

    class Params:
        exact = factory.Trait(kind='W0', lam=None)
        divergence = factory.Trait(kind='Slambda')


class DescentConfigFactory(factory.Factory):
    class Meta:
        model = DescentConfig

    step_size = 0.05
    max_outer_iterations = 200
    theta_tolerance = 1e-7
    warm_start = True


class GaussianMixtureSpecFactory(factory.Factory):
    """K=2, d=2, 평균 (0,0) / (6,0)"""

    class Meta:
        model = GaussianMixtureSpec

    means = LazyAttribute(lambda o: np.array([[0.0, 0.0], [6.0, 0.0]]))
    sigma = 1.0
    source_props = LazyAttribute(lambda o: SimplexVector.uniform(2))
    target_props = LazyAttribute(lambda o: SimplexVector([0.25, 0.75]))
