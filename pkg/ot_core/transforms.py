"""
Regularized and hard c-transforms, the s-transform and dual objectives.

The transforms extrapolate a potential known on the atoms of a measure to
arbitrary query points in R^d.
"""
import numpy as np
from scipy.special import logsumexp

from common.exceptions import ConfigurationError, DimensionMismatchError, NonFiniteError
from ot_core.costs import as_points, squared_distances


def _support(potential, measure):
    """가중치 0 atom 은 적분에 기여하지 않으므로 제외"""
    potential = np.asarray(potential, dtype=np.float64).reshape(-1)
    if potential.shape[0] != measure.n:
        raise DimensionMismatchError(measure.n, potential.shape[0], what='potential length')
    if not np.all(np.isfinite(potential)):
        raise NonFiniteError("potential contains non-finite values")
    positive = measure.weights > 0
    return potential[positive], measure.points[positive], measure.weights[positive]


def _check_lambda(lam):
    if not np.isfinite(lam) or lam < 0:
        raise ConfigurationError(f"lambda must be >= 0, got {lam}")


def c_transform(psi, b, query_points, lam):
    """
    psi^{c,lam}_b(x) = -lam log int exp(-(||x - y||^2 - psi(y)) / lam) db(y)   (lam > 0)
    psi^c(x)        = min_y { ||x - y||^2 - psi(y) }                         (lam = 0)
    """
    _check_lambda(lam)
    psi, support, weights = _support(psi, b)
    cost = squared_distances(query_points, support)
    if lam == 0:
        return np.min(cost - psi[None, :], axis=1)
    return -lam * logsumexp((psi[None, :] - cost) / lam + np.log(weights)[None, :], axis=1)


def s_transform(phi, a, query_points, lam):
    """
    phi^{s,lam}_a(y) = -lam log int exp((phi(x) + 2 <x, y>) / lam) da(x)   (lam > 0)
    phi^s(y)        = -max_x { phi(x) + 2 <x, y> }                        (lam = 0)
    """
    _check_lambda(lam)
    phi, support, weights = _support(phi, a)
    query = as_points(query_points)
    if query.shape[1] != support.shape[1]:
        raise DimensionMismatchError(support.shape[1], query.shape[1])
    gain = phi[None, :] + 2.0 * (query @ support.T)
    if lam == 0:
        return -np.max(gain, axis=1)
    return -lam * logsumexp(gain / lam + np.log(weights)[None, :], axis=1)


def semidual_value(psi, a, b, lam):
    """int psi^{c,lam}_b da + int psi db"""
    if lam <= 0:
        raise ConfigurationError(f"semi-dual value needs lambda > 0, got {lam}")
    phi = c_transform(psi, b, a.points, lam)
    return float(np.dot(a.weights, phi) + np.dot(b.weights, psi))


def dual_value(phi, psi, a, b, lam):
    """
    <phi, a> + <psi, b> - int m_lam(phi(x) + psi(y) - ||x - y||^2) d(a x b)

    m_lam(t) = lam (exp(t / lam) - 1)
    """
    if lam <= 0:
        raise ConfigurationError(f"dual value needs lambda > 0, got {lam}")
    phi = np.asarray(phi, dtype=np.float64)
    psi = np.asarray(psi, dtype=np.float64)
    slack = phi[:, None] + psi[None, :] - squared_distances(a, b)
    penalty = lam * np.expm1(slack / lam)
    return float(np.dot(a.weights, phi) + np.dot(b.weights, psi) - a.weights @ penalty @ b.weights)
