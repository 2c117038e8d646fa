"""
Benchmark (a-priori) caching: segmented anchor preloading, value-based
content ranking, benchmark ferry loading and the analytical availability
upper bound.
"""
from dataclasses import dataclass, field
from typing import AbstractSet, FrozenSet, List, Optional, Sequence, Tuple
import numpy as np
import pandas as pd

from uav_caching.errors import (
    ConfigurationError,
    DegeneratePlanError,
    DomainError,
)
from uav_caching.demand.popularity import Catalog, CommunityProfile


@dataclass(frozen=True)
class AnchorSegments:
    """Cache layout of one anchor."""
    nonexclusive: FrozenSet[int]
    exclusive: FrozenSet[int]
    segment2: FrozenSet[int]

    @property
    def cache(self) -> FrozenSet[int]:
        return self.nonexclusive | self.exclusive | self.segment2


@dataclass
class SegmentedCachePlan:
    """
    Segmented preload of every anchor. `values[n]` holds the content values
    of community n, used to rank ferry loads and bound terms.
    """
    storage_lambda: float
    anchor_capacity: int
    per_anchor: List[AnchorSegments]
    values: np.ndarray = field(repr=False)

    @property
    def n_anchor(self) -> int:
        return len(self.per_anchor)

    def cache(self, anchor: int) -> FrozenSet[int]:
        return self.per_anchor[anchor].cache

    def segment1(self, anchor: int) -> FrozenSet[int]:
        segments = self.per_anchor[anchor]
        return segments.nonexclusive | segments.exclusive

    @property
    def exclusive_total(self) -> FrozenSet[int]:
        return frozenset().union(*(s.exclusive for s in self.per_anchor))

    @property
    def segment2_total(self) -> FrozenSet[int]:
        return frozenset().union(*(s.segment2 for s in self.per_anchor))

    @property
    def ferry_eligible(self) -> FrozenSet[int]:
        return self.exclusive_total | self.segment2_total

    def ranked_cache(self, anchor: int) -> List[int]:
        """Anchor cache ordered by descending community value."""
        return rank_by_score(self.cache(anchor), self.values[anchor])

    def validate(self) -> None:
        """Raise DomainError if any plan invariant is broken."""
        seen_segment2 = set()
        reference = self.per_anchor[0].nonexclusive if self.per_anchor \
            else frozenset()

        for anchor, segments in enumerate(self.per_anchor):
            parts = [segments.nonexclusive, segments.exclusive,
                     segments.segment2]
            if sum(len(p) for p in parts) != len(segments.cache):
                raise DomainError(f"anchor {anchor}: segments overlap")
            if len(segments.cache) != self.anchor_capacity:
                raise DomainError(
                    f"anchor {anchor}: cache holds {len(segments.cache)} "
                    f"contents, expected {self.anchor_capacity}")
            if segments.nonexclusive != reference:
                raise DomainError(
                    f"anchor {anchor}: non-exclusive set differs")
            if seen_segment2 & segments.segment2:
                raise DomainError(
                    f"anchor {anchor}: Segment-2 repeats across anchors")
            seen_segment2 |= segments.segment2


@dataclass(frozen=True)
class UpperBoundParams:
    """Parameters of the analytical availability bound."""
    n_anchor: int
    n_ferry: int
    ferry_group_size: int
    hover_ratio: float
    transit_ratio: float
    cycle_time: float
    mean_tad: float
    ferry_capacity: Optional[int] = None

    def __post_init__(self):
        positive = [self.n_anchor, self.n_ferry, self.ferry_group_size,
                    self.hover_ratio, self.transit_ratio, self.cycle_time]
        if any(value <= 0 for value in positive) or self.mean_tad < 0:
            raise ConfigurationError("bound parameters must be positive")
        if self.hover_ratio + self.transit_ratio > 1:
            raise ConfigurationError(
                "hover_ratio + transit_ratio must not exceed 1")
        if self.ferry_group_size > self.n_ferry:
            raise ConfigurationError(
                "ferry_group_size must not exceed n_ferry")
        if self.ferry_capacity is not None and self.ferry_capacity <= 0:
            raise ConfigurationError("ferry_capacity must be positive")


def rank_by_score(contents: AbstractSet[int], scores) -> List[int]:
    """Order contents by descending score, ties broken by lower id."""
    return sorted(contents, key=lambda c: (-scores[c], c))


def segment_sizes(storage_lambda: float,
                  anchor_capacity: int) -> Tuple[int, int]:
    """
    Split an anchor cache into Segment-1 and Segment-2 sizes.
    Segment-1 gets floor(lambda * capacity + 0.5) slots.
    """
    if not 0 <= storage_lambda <= 1:
        raise ConfigurationError(
            f"storage_lambda must be in [0, 1], got {storage_lambda}")
    s1 = int(np.floor(storage_lambda * anchor_capacity + 0.5))
    return s1, anchor_capacity - s1


def system_content_count(storage_lambda: float, anchor_capacity: int,
                         n_anchor: int) -> int:
    """Distinct contents held system-wide under homogeneous demand."""
    s1, s2 = segment_sizes(storage_lambda, anchor_capacity)
    return s1 + n_anchor * s2


def content_value(popularity: float, tad: float, tad_min: float,
                  p_max: float, kappa: float = 1.0) -> float:
    """
    Value of a content from its popularity and its TAD,
    kappa * (tad_min / p_max) * (popularity / tad).

    Args:
        popularity (float): Request probability of the content.
        tad (float): TAD of the content in seconds.
        tad_min (float): Smallest TAD of any content.
        p_max (float): Largest popularity of any content.
        kappa (float): Scalar weight in [0, 1].

    Returns:
        float: The value, in [0, 1].
    """
    if tad_min <= 0 or tad < tad_min:
        raise DomainError(f"tad {tad} below tad_min {tad_min}")
    if not 0 < popularity <= p_max:
        raise DomainError(f"popularity {popularity} outside (0, {p_max}]")
    return kappa * (tad_min / p_max) * (popularity / tad)


def community_values(
        profiles: Sequence[CommunityProfile],
        catalog: Catalog,
        kappa: float = 1.0,
        trajectory_period: float = 1.0
) -> np.ndarray:
    """
    Content values of every community, shape (n_communities, catalog_size).
    TADs are taken from each profile's rule; tad_min and p_max are global.
    """
    tads = np.array([p.tad_rule.ratios(catalog.catalog_size)
                     for p in profiles]) * trajectory_period
    popularity = np.array([p.popularity(catalog) for p in profiles])
    tad_min = tads.min()
    p_max = catalog.base_popularity.max()
    return kappa * (tad_min / p_max) * (popularity / tads)


def plan_from_values(
        values: np.ndarray,
        storage_lambda: float,
        anchor_capacity: int,
        shuffle_seed: Optional[int] = None
) -> SegmentedCachePlan:
    """
    Build the segmented preload from per-community content values.

    Args:
        values (np.ndarray): Content values, one row per community/anchor.
        storage_lambda (float): Storage segmentation factor.
        anchor_capacity (int): Anchor cache capacity.
        shuffle_seed (int): If given, Segment-2 is distributed by a seeded
            shuffle instead of round-robin.

    Returns:
        SegmentedCachePlan: The preload plan.
    """
    values = np.atleast_2d(np.asarray(values, dtype=float))
    n_anchor, catalog_size = values.shape
    s1, s2 = segment_sizes(storage_lambda, anchor_capacity)

    if system_content_count(storage_lambda, anchor_capacity, n_anchor) \
            > catalog_size:
        raise ConfigurationError(
            "infeasible capacity: anchors would need more distinct contents "
            f"than the catalog holds ({catalog_size})")

    ids = np.arange(catalog_size)
    tops = [frozenset(ids[np.lexsort((ids, -row))][:s1].tolist())
            for row in values]
    nonexclusive = frozenset.intersection(*tops)
    segment1_union = frozenset().union(*tops)

    global_value = values.mean(axis=0)
    remaining = [c for c in ids[np.lexsort((ids, -global_value))].tolist()
                 if c not in segment1_union]
    if len(remaining) < n_anchor * s2:
        raise ConfigurationError(
            "infeasible capacity: not enough contents left for Segment-2")
    remaining = remaining[:n_anchor * s2]

    if shuffle_seed is not None:
        order = np.random.default_rng(shuffle_seed).permutation(len(remaining))
        remaining = [remaining[i] for i in order]

    segment2 = [frozenset(remaining[a::n_anchor]) for a in range(n_anchor)]

    plan = SegmentedCachePlan(
        storage_lambda, anchor_capacity,
        [AnchorSegments(nonexclusive, tops[a] - nonexclusive, segment2[a])
         for a in range(n_anchor)],
        values)
    plan.validate()
    return plan


def preload_anchor_caches(
        profiles: Sequence[CommunityProfile],
        catalog: Catalog,
        storage_lambda: float,
        anchor_capacity: int,
        n_anchor: int,
        kappa: float = 1.0,
        trajectory_period: float = 1.0,
        shuffle_seed: Optional[int] = None
) -> SegmentedCachePlan:
    """
    Preload anchor caches from the communities' popularity and TAD rules.
    Anchor n serves community n.
    """
    if len(profiles) != n_anchor:
        raise ConfigurationError(
            f"expected {n_anchor} community profiles, got {len(profiles)}")
    values = community_values(profiles, catalog, kappa, trajectory_period)
    return plan_from_values(values, storage_lambda, anchor_capacity,
                            shuffle_seed)


def benchmark_ferry_load(
        plan: SegmentedCachePlan,
        ferry_capacity: int,
        next_anchor: int,
        current_anchor: int,
        current_ferry_cache: AbstractSet[int]
) -> FrozenSet[int]:
    """
    Load a ferry leaving current_anchor for next_anchor with the highest-value
    ferry-eligible contents the next anchor does not cache.

    Args:
        plan (SegmentedCachePlan): The benchmark preload.
        ferry_capacity (int): Ferry cache capacity.
        next_anchor (int): Anchor the ferry flies to.
        current_anchor (int): Anchor the ferry leaves.
        current_ferry_cache (set): Contents aboard; they win value ties.

    Returns:
        frozenset: At most ferry_capacity contents.
    """
    if ferry_capacity <= 0:
        raise ConfigurationError(
            f"ferry_capacity must be positive, got {ferry_capacity}")
    if next_anchor == current_anchor:
        return frozenset()

    candidates = plan.ferry_eligible - plan.cache(next_anchor)
    scores = plan.values[next_anchor]
    ordered = sorted(candidates, key=lambda c: (
        -scores[c], c not in current_ferry_cache, c))
    return frozenset(ordered[:ferry_capacity])


def t_cond(p: UpperBoundParams) -> float:
    """Time a ferry group takes to come back within reach of an anchor."""
    share = p.ferry_group_size * p.n_anchor / p.n_ferry
    return ((share - 1) * p.hover_ratio + share * p.transit_ratio) \
        * p.cycle_time


def p_access(p: UpperBoundParams) -> float:
    """Probability that a ferry is reachable before a request expires."""
    if p.mean_tad >= t_cond(p):
        return 1.0
    numerator = p.n_ferry * (p.hover_ratio * p.cycle_time + p.mean_tad)
    denominator = p.ferry_group_size * p.n_anchor \
        * (p.hover_ratio + p.transit_ratio) * p.cycle_time
    return float(np.clip(numerator / denominator, 0.0, 1.0))


def ferry_reachable(plan: SegmentedCachePlan, values: np.ndarray,
                    anchor: int,
                    ferry_capacity: Optional[int] = None) -> List[int]:
    """
    Contents a benchmark ferry can bring to the anchor: the highest-value
    ferry-eligible contents it does not cache, at most ferry_capacity.
    """
    reachable = rank_by_score(plan.ferry_eligible - plan.cache(anchor),
                              values)
    if ferry_capacity is not None:
        reachable = reachable[:ferry_capacity]
    return reachable


def p_mf(plan: SegmentedCachePlan, values: np.ndarray, anchor: int,
         ferry_capacity: Optional[int] = None) -> float:
    """
    Value mass a visiting ferry can hold for the anchor's community relative
    to the value mass of the whole catalog, in [0, 1].

    Raises:
        DegeneratePlanError: The catalog carries no value mass.
    """
    total = float(np.sum(values))
    if total <= 0:
        raise DegeneratePlanError("the catalog carries no value mass")

    reachable = ferry_reachable(plan, values, anchor, ferry_capacity)
    if not reachable:
        return 0.0
    return float(np.clip(np.sum(values[reachable]) / total, 0.0, 1.0))


def p_a(plan: SegmentedCachePlan, values: np.ndarray, anchor: int) -> float:
    """Value mass cached at the anchor relative to the whole catalog."""
    total = float(np.sum(values))
    if total <= 0:
        return 0.0
    cached = float(np.sum(values[sorted(plan.cache(anchor))]))
    return float(np.clip(cached / total, 0.0, 1.0))


def availability_upper_bound(plan: SegmentedCachePlan, values: np.ndarray,
                             p: UpperBoundParams, anchor: int) -> float:
    """Average availability bound at the anchor's community, in [0, 1]."""
    bound = (p_a(plan, values, anchor)
             + p_access(p) * p_mf(plan, values, anchor, p.ferry_capacity))
    return float(np.clip(bound, 0.0, 1.0))


def bound_report(plan: SegmentedCachePlan,
                 p: UpperBoundParams) -> pd.DataFrame:
    """
    Per-community breakdown of the upper bound.

    Returns:
        pd.DataFrame: One row per community with the bound terms.
    """
    rows = []
    for anchor in range(plan.n_anchor):
        values = plan.values[anchor]
        rows.append({
            'community': anchor,
            'p_a': p_a(plan, values, anchor),
            'p_mf': p_mf(plan, values, anchor, p.ferry_capacity),
            'p_access': p_access(p),
            't_cond': t_cond(p),
            'upper_bound': availability_upper_bound(plan, values, p, anchor),
        })
    return pd.DataFrame(rows, columns=['community', 'p_a', 'p_mf', 'p_access',
                                       't_cond', 'upper_bound'])
