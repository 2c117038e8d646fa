"""
Selective caching at micro-ferrying UAVs: roster partitioning of the
ferry-eligible contents, roster selection coordinated within a ferry group,
and the per-content refresh that keeps a ferry from duplicating the next
anchor's cache.
"""
from dataclasses import dataclass, field
import warnings
from typing import (
    AbstractSet,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Tuple,
)
import numpy as np
from uav_caching.errors import ConfigurationError, DomainError


@dataclass
class RosterPlan:
    """Cache-sized blocks of eligible contents in descending score order."""
    rosters: List[Tuple[int, ...]]
    scores: Dict[int, float] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.rosters)

    @property
    def contents(self) -> List[int]:
        return [c for roster in self.rosters for c in roster]

    def least_popular(self, index: int, popularity) -> int:
        """Member of a roster with the smallest popularity estimate."""
        return min(self.rosters[index], key=lambda c: (popularity[c], -c))


@dataclass
class QSnapshot:
    """Q-table of an anchor as it was when a ferry last left it."""
    anchor_id: int
    epoch: int
    time: float
    q: np.ndarray = field(repr=False)
    distribution: np.ndarray = field(repr=False)


@dataclass
class AvailabilityRecord:
    """What an anchor served during its last closed epoch."""
    anchor_id: int
    time: float
    cache: FrozenSet[int]
    served_local: FrozenSet[int]
    served_ferry: FrozenSet[int]
    served_all: FrozenSet[int]
    delta_local: float
    delta_ferry: float
    delta_global: float


@dataclass
class FerryState:
    """A micro-ferrying UAV."""
    ferry_id: int
    group_id: int
    capacity: int
    cache: FrozenSet[int] = frozenset()
    roster_index: Optional[int] = None
    position: int = 0
    docked_at: Optional[int] = None
    q_snapshots: Dict[int, QSnapshot] = field(default_factory=dict)
    availability_info: Dict[int, AvailabilityRecord] = field(
        default_factory=dict)


def merge_newer(target: Dict[int, object],
                source: Mapping[int, object]) -> None:
    """Copy entries of source into target where they are strictly fresher."""
    for anchor_id, entry in source.items():
        held = target.get(anchor_id)
        if held is None or entry.time > held.time:
            target[anchor_id] = entry


def partition_rosters(eligible: Iterable[Tuple[int, float]],
                      roster_size: int) -> RosterPlan:
    """
    Sort eligible contents by descending score (ties by lower id) and chunk
    them into consecutive rosters of roster_size; the last may be short.

    Args:
        eligible (iterable): Pairs of (content id, score).
        roster_size (int): Ferry cache capacity.

    Returns:
        RosterPlan: The roster partition.
    """
    if roster_size <= 0:
        raise ConfigurationError(
            f"roster_size must be positive, got {roster_size}")

    scores = dict(eligible)
    ordered = sorted(scores, key=lambda c: (-scores[c], c))
    rosters = [tuple(ordered[i:i + roster_size])
               for i in range(0, len(ordered), roster_size)]
    return RosterPlan(rosters, scores)


def select_roster(
        plan: RosterPlan,
        prev_ferry_roster: Optional[int],
        least_popular_request_interval: Optional[float],
        tad_of_roster: Optional[float],
        ferry_revisit_interval: float,
        group_peers: Iterable[int] = ()
) -> int:
    """
    Choose the roster a departing ferry carries.

    The previous ferry's roster is kept while its least popular content is
    still expected to be requested within min(TAD, revisit interval);
    otherwise the next roster is taken. Rosters already claimed by group
    peers are skipped, wrapping around the roster count.

    Args:
        plan (RosterPlan): The current roster partition.
        prev_ferry_roster (int): Roster index of the previous ferry, or None.
        least_popular_request_interval (float): Expected seconds between
            requests of that roster's least popular content.
        tad_of_roster (float): TAD of that content in seconds.
        ferry_revisit_interval (float): Seconds between ferry visits.
        group_peers (iterable): Roster indices claimed by group peers.

    Returns:
        int: The selected roster index.
    """
    count = len(plan)
    if count == 0:
        raise DomainError("cannot select a roster from an empty plan")

    if prev_ferry_roster is None:
        candidate = 0
    elif least_popular_request_interval is not None \
            and tad_of_roster is not None \
            and least_popular_request_interval <= min(tad_of_roster,
                                                      ferry_revisit_interval):
        candidate = prev_ferry_roster % count
    else:
        candidate = (prev_ferry_roster + 1) % count

    claimed = set(group_peers)
    for step in range(count):
        index = (candidate + step) % count
        if index not in claimed:
            return index

    warnings.warn(
        f"all {count} rosters are claimed by group peers; reusing roster 0")
    return 0


def refresh_ferry_cache(
        state: FerryState,
        plan: RosterPlan,
        next_anchor_cache: AbstractSet[int],
        departing_anchor_scores: Mapping[int, float]
) -> FrozenSet[int]:
    """
    Load the selected roster into the ferry, replacing every member the next
    anchor already caches with the best-scored content that is neither
    aboard nor at the next anchor. Slots without a replacement stay empty.

    Args:
        state (FerryState): The ferry; its roster_index must be set.
        plan (RosterPlan): The roster partition.
        next_anchor_cache (set): Cache of the anchor the ferry flies to.
        departing_anchor_scores (mapping): Scores known at the departing
            anchor, keyed by content id.

    Returns:
        frozenset: The new ferry cache (also stored in state.cache).
    """
    roster = plan.rosters[state.roster_index] \
        if state.roster_index is not None and len(plan) else ()

    cache = [c for c in roster if c not in next_anchor_cache]
    pending_slots = len(roster) - len(cache)

    if pending_slots:
        taken = set(cache) | set(roster)
        replacements = sorted(
            (c for c in departing_anchor_scores
             if c not in taken and c not in next_anchor_cache),
            key=lambda c: (-departing_anchor_scores[c], c))
        cache.extend(replacements[:pending_slots])

    state.cache = frozenset(cache[:state.capacity])
    return state.cache
