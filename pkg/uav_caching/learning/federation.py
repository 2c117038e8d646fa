"""
Federated aggregation of anchor Q-tables: popularity estimates,
divergence-based contribution factors, local/global weighting and the
latency gate that spaces federated updates apart.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union
import numpy as np

from uav_caching.errors import ConfigurationError, DomainError
from .bandit import R_MAX
from .utils import js_divergence, kl_divergence

FIXED_OMEGA1 = 0.99
RHO_MARGIN = 1e-6


class GateDecision(Enum):
    FEDERATE_AND_RESET = 'federate_and_reset'
    DEFER_AND_INCREMENT = 'defer_and_increment'


@dataclass
class PopularityEstimate:
    """Request tallies observed at one anchor."""
    counts: np.ndarray = field(repr=False)

    @classmethod
    def empty(cls, catalog_size: int) -> "PopularityEstimate":
        return cls(np.zeros(catalog_size, dtype=np.int64))

    def record(self, content_id: int) -> None:
        self.counts[content_id] += 1

    @property
    def smoothing(self) -> float:
        return 1.0 / (10 * self.counts.size)

    @property
    def as_distribution(self) -> np.ndarray:
        """Counts with additive smoothing, normalized; every entry > 0."""
        smoothed = self.counts + self.smoothing
        return smoothed / smoothed.sum()


@dataclass(frozen=True)
class FederationConfig:
    beta_decay: float = 0.01
    beta_scale: float = 10.0
    latency_threshold: int = 2
    omega1_mode: str = 'fixed'
    rho_mode: str = 'max_pairwise'

    def __post_init__(self):
        if self.beta_scale <= 0:
            raise ConfigurationError("beta_scale must be positive")
        if self.beta_decay < 0:
            raise ConfigurationError("beta_decay must be nonnegative")
        if self.latency_threshold < 0:
            raise ConfigurationError("latency_threshold must be nonnegative")
        if self.omega1_mode not in ('fixed', 'adaptive'):
            raise ConfigurationError(
                f"unknown omega1_mode '{self.omega1_mode}'")
        if self.rho_mode not in ('max_pairwise', 'sum'):
            raise ConfigurationError(f"unknown rho_mode '{self.rho_mode}'")


@dataclass
class LatencyCounter:
    """Epochs elapsed since the last federated update."""
    value: int = 0


def contribution_factors(
        self_index: int,
        estimates: Sequence[np.ndarray],
        n_anchor: int,
        rho_mode: str = 'max_pairwise'
) -> np.ndarray:
    """
    Weight of every anchor's Q-table when aggregating at anchor self_index.
    Anchors whose popularity estimate is closer (in KL divergence) to the
    local one weigh more.

    Args:
        self_index (int): Position of the aggregating anchor in estimates.
        estimates (sequence): Popularity distributions, one per anchor.
        n_anchor (int): Number of anchors taking part.
        rho_mode (str): 'max_pairwise' or 'sum' reading of rho.

    Returns:
        np.ndarray: Nonnegative weights summing to 1.
    """
    if len(estimates) != n_anchor:
        raise DomainError(
            f"expected {n_anchor} popularity estimates, got {len(estimates)}")

    own = estimates[self_index]
    divergences = np.array([kl_divergence(own, other) for other in estimates])

    if divergences.max() <= 0:
        return np.full(n_anchor, 1.0 / n_anchor)

    if rho_mode == 'sum':
        rho = divergences.sum() + RHO_MARGIN
    else:
        rho = divergences.max() + RHO_MARGIN

    numerators = rho - divergences
    return numerators / numerators.sum()


def aggregate_q(factors: np.ndarray,
                q_tables: Sequence[np.ndarray]) -> np.ndarray:
    """Contribution-weighted sum of Q-tables, content by content."""
    factors = np.asarray(factors, dtype=float)
    tables = np.asarray(q_tables, dtype=float)
    if tables.ndim != 2 or tables.shape[0] != factors.size:
        raise DomainError(
            f"{factors.size} factors for Q-tables of shape {tables.shape}")
    if abs(factors.sum() - 1) > 1e-6:
        raise DomainError(f"factors sum to {factors.sum()}, not 1")
    return factors @ tables


def omega1(p_now: np.ndarray, p_prev: np.ndarray,
           cfg: FederationConfig) -> float:
    """Weight of the local Q-table: fixed 0.99 or 1 - JS / ln 2."""
    if cfg.omega1_mode == 'fixed':
        return FIXED_OMEGA1
    return float(np.clip(1 - js_divergence(p_now, p_prev) / np.log(2),
                         0.0, 1.0))


def omega2(t: int, q_xi: Union[float, np.ndarray],
           cfg: FederationConfig) -> Union[float, np.ndarray]:
    """
    Weight of the aggregated Q-table: decays with the epoch and shrinks with
    the normalized regret left in q.
    """
    if t < 0:
        raise DomainError(f"epoch must be nonnegative, got {t}")
    q_norm = np.clip(np.asarray(q_xi, dtype=float) / R_MAX, 0.0, 1.0)
    weight = np.exp(-cfg.beta_decay * t) * (1 - q_norm) / cfg.beta_scale
    return float(weight) if np.ndim(weight) == 0 else weight


def federated_update(q_local: np.ndarray, q_agg: np.ndarray, w1: float,
                     w2: Union[float, np.ndarray]) -> np.ndarray:
    """Blend the local and aggregated Q-tables."""
    q_local = np.asarray(q_local, dtype=float)
    q_agg = np.asarray(q_agg, dtype=float)
    if q_local.shape != q_agg.shape:
        raise DomainError(
            f"Q-table shapes differ: {q_local.shape} vs {q_agg.shape}")
    return w1 * q_local + w2 * q_agg


def latency_gate(counter: LatencyCounter, threshold: int) -> GateDecision:
    """
    Federate and reset once the counter reaches the threshold, otherwise
    defer and count the epoch.
    """
    if counter.value >= threshold:
        counter.value = 0
        return GateDecision.FEDERATE_AND_RESET
    counter.value += 1
    return GateDecision.DEFER_AND_INCREMENT
