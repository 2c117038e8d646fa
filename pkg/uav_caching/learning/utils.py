""" This module contains divergence utilities for popularity distributions. """
import numpy as np
from scipy.special import rel_entr

from uav_caching.errors import DomainError


def _as_pair(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DomainError(
            f"distribution length mismatch: {p.shape} vs {q.shape}")
    return p, q


def kl_divergence(p, q) -> float:
    """
    Kullback-Leibler divergence D(p || q) in nats, with 0 * ln(0 / q) = 0.

    Args:
        p (array): The reference distribution.
        q (array): The approximating distribution, strictly positive
            wherever p is.

    Returns:
        float: The divergence, nonnegative.
    """
    p, q = _as_pair(p, q)
    return max(0.0, float(rel_entr(p, q).sum()))


def js_divergence(p, q) -> float:
    """Jensen-Shannon divergence in nats, bounded by ln 2."""
    p, q = _as_pair(p, q)
    m = 0.5 * (p + q)
    value = 0.5 * (kl_divergence(p, m) + kl_divergence(q, m))
    return min(max(value, 0.0), float(np.log(2)))
