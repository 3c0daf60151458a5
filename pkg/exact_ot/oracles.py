"""
Closed-form and exhaustive references for W_0 on small instances.
"""
from itertools import combinations

import numpy as np

from common.exceptions import ConfigurationError
from ot_core.costs import squared_distances

MAX_ENUMERATION_ATOMS = 3


def w0_sorted_1d(a, b):
    """
    같은 크기의 균등 1차원 측도: W_0 = mean((x_(i) - y_(i))^2)
    """
    if a.d != 1 or b.d != 1:
        raise ConfigurationError("sorted pairing needs one-dimensional measures")
    if a.n != b.n or not (np.allclose(a.weights, 1.0 / a.n) and np.allclose(b.weights, 1.0 / b.n)):
        raise ConfigurationError("sorted pairing needs uniform measures of equal size")
    x = np.sort(a.points[:, 0])
    y = np.sort(b.points[:, 0])
    return float(np.mean((x - y) ** 2))


def _marginal_constraints(n_rows, n_cols):
    """vec(plan) (row-major) 에 대한 행합/열합 제약 행렬"""
    rows = np.kron(np.eye(n_rows), np.ones((1, n_cols)))
    cols = np.kron(np.ones((1, n_rows)), np.eye(n_cols))
    return np.vstack([rows, cols])


def enumerate_transport_vertices(a, b, tolerance=1e-12):
    """
    transportation polytope 의 꼭짓점 (basic feasible solution) 전부

    I + J - 1 개 칸을 고르는 모든 조합 중 열이 독립이고 해가 음이 아닌 것을 수집합니다.
    """
    n_rows, n_cols = a.n, b.n
    if n_rows > MAX_ENUMERATION_ATOMS or n_cols > MAX_ENUMERATION_ATOMS:
        raise ConfigurationError(f"vertex enumeration is limited to {MAX_ENUMERATION_ATOMS} atoms per side")

    constraints = _marginal_constraints(n_rows, n_cols)
    rhs = np.concatenate([a.weights, b.weights])
    basis_size = n_rows + n_cols - 1

    vertices = []
    for cells in combinations(range(n_rows * n_cols), basis_size):
        columns = constraints[:, cells]
        if np.linalg.matrix_rank(columns) < basis_size:
            continue
        values, *_ = np.linalg.lstsq(columns, rhs, rcond=None)
        if np.any(values < -tolerance) or not np.allclose(columns @ values, rhs, atol=1e-10):
            continue
        plan = np.zeros(n_rows * n_cols)
        plan[list(cells)] = np.maximum(values, 0.0)
        plan = plan.reshape(n_rows, n_cols)
        if not any(np.allclose(plan, seen, atol=1e-12) for seen in vertices):
            vertices.append(plan)
    return vertices


def brute_force_w0(a, b):
    """min over vertices <plan, C>"""
    cost = squared_distances(a, b)
    return min(float(np.sum(plan * cost)) for plan in enumerate_transport_vertices(a, b))
