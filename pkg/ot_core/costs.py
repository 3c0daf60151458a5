import numpy as np
from scipy.spatial.distance import cdist

from common.exceptions import DimensionMismatchError
from ot_core.domain import S_COST, SQUARED_EUCLIDEAN, CostMatrix


def as_points(measure_or_points):
    points = getattr(measure_or_points, 'points', measure_or_points)
    points = np.asarray(points, dtype=np.float64)
    return points.reshape(-1, 1) if points.ndim == 1 else points


def _check_dimensions(x, y):
    if x.shape[1] != y.shape[1]:
        raise DimensionMismatchError(x.shape[1], y.shape[1])


def squared_distances(x, y):
    """(i, j) -> ||x_i - y_j||^2"""
    x, y = as_points(x), as_points(y)
    _check_dimensions(x, y)
    return cdist(x, y, metric='sqeuclidean')


def cost_matrix(a, b):
    """quadratic cost between the atoms of a and b"""
    return CostMatrix(squared_distances(a, b), kind=SQUARED_EUCLIDEAN)


def s_cost_matrix(a, b):
    """s(x, y) = -2 <x, y>"""
    x, y = as_points(a), as_points(b)
    _check_dimensions(x, y)
    return CostMatrix(-2.0 * (x @ y.T), kind=S_COST)
