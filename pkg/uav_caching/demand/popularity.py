"""
Module generating the content universe: the Zipf catalog, heterogeneous
per-community popularity profiles, tolerable access delay (TAD) rules and
the Poisson request stream.
"""
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional, Tuple
import numpy as np

from uav_caching.errors import ConfigurationError, DomainError
from .utils import smith_waterman_distance

DEFAULT_TAD_RATIO = 1 / 8
SWAP_WINDOW = 10
MAX_PROFILE_RETRIES = 100


@dataclass
class Catalog:
    """The global content pool. Content id r has global rank r + 1."""
    catalog_size: int
    zipf_alpha: float
    base_popularity: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, catalog_size: int, zipf_alpha: float) -> "Catalog":
        if catalog_size < 1:
            raise ConfigurationError(
                f"catalog_size must be positive, got {catalog_size}")
        if zipf_alpha < 0:
            raise ConfigurationError(
                f"zipf_alpha must be nonnegative, got {zipf_alpha}")
        return cls(catalog_size, zipf_alpha,
                   zipf_distribution(zipf_alpha, catalog_size))

    @cached_property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.base_popularity)


@dataclass(frozen=True)
class TadRule:
    """
    Piecewise-constant TAD ratio over content-id ranges. A TAD in seconds is
    the ratio times the trajectory period. Later overrides win.
    """
    default_ratio: float = DEFAULT_TAD_RATIO
    overrides: Tuple[Tuple[int, int, float], ...] = ()

    def __post_init__(self):
        ratios = [self.default_ratio] + [r for _, _, r in self.overrides]
        if any(r <= 0 for r in ratios):
            raise ConfigurationError(
                "all TAD ratios must be strictly positive")
        for start, end, _ in self.overrides:
            if start < 0 or end < start:
                raise ConfigurationError(
                    f"invalid TAD override range {start}-{end}")

    @classmethod
    def parse(cls, default_ratio: float, text: str) -> "TadRule":
        """
        Parse overrides written as 'start-end:ratio[,start-end:ratio...]'
        over 0-based content ids, e.g. '50-74:0.0625'.
        """
        overrides = []
        for chunk in filter(None, (c.strip() for c in text.split(','))):
            try:
                span, ratio = chunk.split(':')
                start, end = span.split('-')
                overrides.append((int(start), int(end), float(ratio)))
            except ValueError as exc:
                raise ConfigurationError(
                    f"malformed tad_overrides entry '{chunk}'") from exc
        return cls(default_ratio, tuple(overrides))

    def ratio(self, content_id: int) -> float:
        value = self.default_ratio
        for start, end, ratio in self.overrides:
            if start <= content_id <= end:
                value = ratio
        return value

    def ratios(self, catalog_size: int) -> np.ndarray:
        values = np.full(catalog_size, self.default_ratio, dtype=float)
        for start, end, ratio in self.overrides:
            values[start:end + 1] = ratio
        return values


@dataclass
class CommunityProfile:
    """
    Popularity profile of one community. rank_permutation[r] is the content
    id (equivalently, the 0-based global rank) that sits at this community's
    0-based rank r.
    """
    community_id: int
    rank_permutation: np.ndarray = field(repr=False)
    tad_rule: TadRule = field(default_factory=TadRule)
    request_rate: float = 1.0

    def __post_init__(self):
        size = len(self.rank_permutation)
        if not np.array_equal(np.sort(self.rank_permutation), np.arange(size)):
            raise DomainError("rank_permutation is not a bijection")
        if self.request_rate <= 0:
            raise ConfigurationError(
                f"request_rate must be positive, got {self.request_rate}")

    def popularity(self, catalog: Catalog) -> np.ndarray:
        """Request probability of every content id in this community."""
        popularity = np.empty(catalog.catalog_size)
        popularity[self.rank_permutation] = catalog.base_popularity
        return popularity


@dataclass(frozen=True)
class Request:
    """One user demand event."""
    community_id: int
    content_id: int
    issue_time: float
    tad: float
    request_id: int = 0

    def __post_init__(self):
        if self.tad <= 0:
            raise DomainError(f"tad must be positive, got {self.tad}")
        if self.issue_time < 0:
            raise DomainError(
                f"issue_time must be nonnegative, got {self.issue_time}")


def zipf_distribution(alpha: float, catalog_size: int) -> np.ndarray:
    """
    Zipf probability vector over ranks 1..catalog_size, p(r) ~ r^-alpha.
    """
    ranks = np.arange(1, catalog_size + 1, dtype=np.float64)
    weights = np.power(ranks, -float(alpha))
    return weights / weights.sum()


def zipf_popularity(rank: int, alpha: float, catalog_size: int) -> float:
    """
    Popularity of the content of the given 1-based rank under Zipf law.

    Args:
        rank (int): 1-based rank of the content.
        alpha (float): Skewness of the distribution.
        catalog_size (int): Total number of contents.

    Returns:
        float: (1/rank)^alpha normalized over all ranks.
    """
    if not 1 <= rank <= catalog_size:
        raise DomainError(
            f"rank {rank} outside [1, {catalog_size}]")
    return float(zipf_distribution(alpha, catalog_size)[rank - 1])


def _swap_ranks(size: int, swap_probability: float,
                rng: np.random.Generator, window: int) -> np.ndarray:
    permutation = np.arange(size)
    draws = rng.random(size)
    low = np.maximum(0, np.arange(size) - window)
    high = np.minimum(size - 1, np.arange(size) + window)
    partners = rng.integers(low, high + 1)

    for i in np.flatnonzero(draws < swap_probability):
        j = partners[i]
        permutation[i], permutation[j] = permutation[j], permutation[i]

    return permutation


def derive_heterogeneous_profile(
        base: Catalog,
        swap_probability: float,
        min_distance: float,
        seed: int,
        community_id: int = 0,
        tad_rule: Optional[TadRule] = None,
        request_rate: float = 1.0,
        window: int = SWAP_WINDOW,
        max_retries: int = MAX_PROFILE_RETRIES
) -> CommunityProfile:
    """
    Derive a community profile from the global ranking by random local swaps.

    Each rank position is, with probability swap_probability, swapped with a
    uniformly random position at most `window` ranks away. Permutations whose
    normalized Smith-Waterman distance to the global ranking is below
    min_distance are rejected and redrawn.

    Args:
        base (Catalog): The global catalog.
        swap_probability (float): Per-position swap probability in [0, 1].
        min_distance (float): Minimum normalized Smith-Waterman distance.
        seed (int): Seed of the permutation stream.
        community_id (int): Id of the community.
        tad_rule (TadRule): TAD rule of the community.
        request_rate (float): Aggregate Poisson request rate.

    Returns:
        CommunityProfile: The derived profile.
    """
    if not 0 <= swap_probability <= 1:
        raise ConfigurationError(
            f"swap_probability must be in [0, 1], got {swap_probability}")

    rng = np.random.default_rng(seed)
    identity = np.arange(base.catalog_size)

    for _ in range(max_retries):
        permutation = _swap_ranks(
            base.catalog_size, swap_probability, rng, window)

        if min_distance <= 0 or \
                smith_waterman_distance(identity, permutation) >= min_distance:
            return CommunityProfile(
                community_id, permutation,
                tad_rule if tad_rule is not None else TadRule(),
                request_rate)

    raise ConfigurationError(
        f"Smith-Waterman distance threshold {min_distance} unreachable "
        f"after {max_retries} attempts")


def sample_request(
        profile: CommunityProfile,
        catalog: Catalog,
        now: float,
        rng: np.random.Generator,
        trajectory_period: float = 1.0,
        request_id: int = 0
) -> Tuple[Request, float]:
    """
    Draw the request issued at `now` and the arrival time of the next one.

    Args:
        profile (CommunityProfile): The issuing community.
        catalog (Catalog): The global catalog.
        now (float): Issue time in seconds.
        rng (np.random.Generator): Random stream.
        trajectory_period (float): Seconds that TAD ratios refer to.
        request_id (int): Id assigned to the request.

    Returns:
        tuple: The request and the next arrival time.
    """
    cumulative = catalog.cumulative
    rank = int(np.searchsorted(cumulative, rng.random() * cumulative[-1],
                               side='right'))
    rank = min(rank, catalog.catalog_size - 1)
    content = int(profile.rank_permutation[rank])

    tad = profile.tad_rule.ratio(content) * trajectory_period
    next_arrival = now + rng.exponential(1.0 / profile.request_rate)

    request = Request(profile.community_id, content, now, tad, request_id)
    return request, next_arrival


def rotate_ranks(profile: CommunityProfile, offset: int) -> CommunityProfile:
    """
    The profile with every rank handed to the content `offset` ids further
    on, wrapping around the catalog.
    """
    if offset < 0:
        raise ConfigurationError(f"offset must be nonnegative, got {offset}")
    size = len(profile.rank_permutation)
    return replace(profile,
                   rank_permutation=(profile.rank_permutation + offset) % size)
