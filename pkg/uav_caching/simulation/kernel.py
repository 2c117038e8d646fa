"""
Discrete-event engine of the two-tier UAV system.

Communities issue Poisson requests to their anchor UAV. A request is served
at once from the anchor cache or a docked ferry, otherwise it waits for a
ferry until its TAD runs out and is then downloaded over the vertical link.
Every ferry arrival closes an epoch at the anchor, where the caching policy
learns and reselects the anchor cache. Same-time events are ordered by kind
(expiry, ferry arrival, request arrival, ferry departure, epoch tick, demand
shift) and then by entity id, so a run is fully determined by its config.
"""
from dataclasses import dataclass, field
from enum import Enum
import hashlib
import heapq
import itertools
from typing import Dict, FrozenSet, List, Optional, Set, Tuple
import numpy as np
import pandas as pd

from uav_caching.errors import InvariantViolation
from uav_caching.caching.benchmark import (
    SegmentedCachePlan,
    availability_upper_bound,
    benchmark_ferry_load,
    preload_anchor_caches,
)
from uav_caching.caching.ferry import (
    AvailabilityRecord,
    FerryState,
    QSnapshot,
    merge_newer,
    partition_rosters,
    refresh_ferry_cache,
    select_roster,
)
from uav_caching.demand.popularity import (
    Catalog,
    CommunityProfile,
    Request,
    derive_heterogeneous_profile,
    rotate_ranks,
    sample_request,
)
from uav_caching.learning.bandit import (
    AgentState,
    RewardInputs,
    learn_epoch,
    random_cache_set,
    select_cache_set,
    ucb_scores,
)
from uav_caching.learning.federation import (
    GateDecision,
    LatencyCounter,
    PopularityEstimate,
    aggregate_q,
    contribution_factors,
    federated_update,
    latency_gate,
    omega1,
    omega2,
)
from .config import SimConfig, adjusted_times, cycle_length
from .metrics import EpochRecord, availability, cdo


class EventKind(Enum):
    REQUEST_EXPIRY = 0
    FERRY_ARRIVAL = 1
    REQUEST_ARRIVAL = 2
    FERRY_DEPARTURE = 3
    EPOCH_TICK = 4
    DEMAND_SHIFT = 5


class Disposition(Enum):
    SERVED_LOCAL = 'served_local'
    SERVED_FERRY = 'served_ferry'
    PENDING = 'pending'
    DOWNLOADED = 'downloaded'


@dataclass(order=True)
class Event:
    time: float
    priority: int
    entity: int
    seq: int
    kind: EventKind = field(compare=False)
    payload: int = field(compare=False, default=0)


class FutureEventList:
    """Heap of pending events in processing order."""

    def __init__(self):
        # (time, priority, entity, seq, event); seq is unique
        self._events: List[Tuple[float, int, int, int, Event]] = []
        self._counter = itertools.count()

    def schedule(self, time: float, kind: EventKind, entity: int,
                 payload: int = 0) -> Event:
        event = Event(float(time), kind.value, entity, next(self._counter),
                      kind, payload)
        heapq.heappush(self._events, (event.time, event.priority,
                                      event.entity, event.seq, event))
        return event

    def peek(self) -> Optional[Event]:
        return self._events[0][-1] if self._events else None

    def pop(self) -> Event:
        return heapq.heappop(self._events)[-1]

    def __len__(self) -> int:
        return len(self._events)


@dataclass
class EpochWindow:
    """Service counters of the open epoch at one anchor."""
    hits_local: int = 0
    hits_ferry: int = 0
    expired: int = 0
    delay_total: float = 0.0
    served_local: Set[int] = field(default_factory=set)
    served_ferry: Set[int] = field(default_factory=set)

    @property
    def hits(self) -> int:
        return self.hits_local + self.hits_ferry

    @property
    def resolved(self) -> int:
        return self.hits + self.expired


@dataclass
class AnchorState:
    """An anchor UAV and the bookkeeping of its community."""
    anchor_id: int
    cache: FrozenSet[int]
    agent: AgentState
    estimate: PopularityEstimate
    latency: LatencyCounter = field(default_factory=LatencyCounter)
    pending: Dict[int, Request] = field(default_factory=dict)
    docked: Set[int] = field(default_factory=set)
    window: EpochWindow = field(default_factory=EpochWindow)
    previous: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    federated_distribution: Optional[np.ndarray] = None
    q_snapshots: Dict[int, QSnapshot] = field(default_factory=dict)
    availability_info: Dict[int, AvailabilityRecord] = field(
        default_factory=dict)
    last_roster_sent: Optional[int] = None
    epoch: int = 0


@dataclass
class CommunityTally:
    issued: int = 0
    hits: int = 0
    ferry_hits: int = 0
    downloads: int = 0
    delay_total: float = 0.0


@dataclass
class _GroupClaims:
    time: float
    rosters: Set[int] = field(default_factory=set)
    contents: Set[int] = field(default_factory=set)


@dataclass
class SimulationResult:
    """Epoch records and final tallies of a finished run."""
    records: List[EpochRecord]
    tallies: List[CommunityTally]
    bounds: List[float]
    trace_hash: str
    events_processed: int

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.as_row() for r in self.records],
                            columns=EpochRecord.columns())

    def summary(self) -> pd.DataFrame:
        rows = []
        for community, tally in enumerate(self.tallies):
            resolved = tally.hits + tally.downloads
            rows.append({
                'community': community,
                'issued': tally.issued,
                'hits': tally.hits,
                'ferry_hits': tally.ferry_hits,
                'downloads': tally.downloads,
                'pending': tally.issued - resolved,
                'availability': availability(tally.hits, resolved),
                'upper_bound': self.bounds[community],
            })
        return pd.DataFrame(rows)


@dataclass
class Demand:
    """Catalog, community profiles and the benchmark plan built on them."""
    catalog: Catalog
    profiles: List[CommunityProfile]
    plan: SegmentedCachePlan
    bounds: List[float]


def build_demand(config: SimConfig, alpha: Optional[float] = None,
                 seed: Optional[int] = None, rank_offset: int = 0) -> Demand:
    """
    Derive the community profiles of a configuration and preload the
    benchmark plan with its per-community availability bound. A nonzero
    rank_offset rotates every profile by that many content ids.
    """
    alpha = config.zipf_alpha if alpha is None else alpha
    seed = config.seed if seed is None else seed

    catalog = Catalog.build(config.catalog_size, alpha)
    tad_rule = config.tad_rule
    profiles = [
        derive_heterogeneous_profile(
            catalog, config.swap_probability, config.min_distance,
            seed + n, community_id=n, tad_rule=tad_rule,
            request_rate=config.request_rate)
        for n in range(config.n_anchor)]
    if rank_offset:
        profiles = [rotate_ranks(p, rank_offset) for p in profiles]

    plan = preload_anchor_caches(
        profiles, catalog, config.storage_lambda, config.anchor_capacity,
        config.n_anchor, config.value_kappa, config.trajectory_period,
        shuffle_seed=seed if config.segment2_shuffle else None)

    params = config.upper_bound_params
    bounds = [availability_upper_bound(plan, plan.values[a], params, a)
              for a in range(config.n_anchor)]
    return Demand(catalog, profiles, plan, bounds)


class Simulation:
    """
    One replication of the system. Handlers are public so single events
    can be driven by hand; run() drives them from the event list.
    """

    def __init__(self, config: SimConfig):
        self.config = config.validate()
        self.hover, self.transit = adjusted_times(config)
        self.revisit_interval = cycle_length(config) / config.n_groups

        request_seed, policy_seed, ferry_seed = \
            np.random.SeedSequence(config.seed).spawn(3)
        self.request_rng = np.random.default_rng(request_seed)
        self.policy_rng = np.random.default_rng(policy_seed)
        self.ferry_rng = np.random.default_rng(ferry_seed)

        self.clock = 0.0
        self.queue = FutureEventList()
        self.records: List[EpochRecord] = []
        self.tallies = [CommunityTally() for _ in range(config.n_anchor)]
        self.events_processed = 0
        self._digest = hashlib.sha256()
        self._request_ids = itertools.count()
        self._ticks: Set[Tuple[int, float]] = set()
        self._claims: Dict[Tuple[int, int], _GroupClaims] = {}

        self._build_demand(config.zipf_alpha, config.seed)
        self.anchors = [self._initial_anchor(a)
                        for a in range(config.n_anchor)]
        self.ferries = [
            FerryState(ferry_id=f, group_id=f // config.ferry_group_size,
                       capacity=config.ferry_capacity)
            for f in range(config.n_ferry)]
        self._schedule_initial_events()

    @property
    def learning(self) -> bool:
        return self.config.policy not in ('random', 'benchmark_value')

    @property
    def federated(self) -> bool:
        return self.config.policy.startswith('fedmab')

    @property
    def selective(self) -> bool:
        return self.config.policy.endswith('_selective')

    @property
    def trace_hash(self) -> str:
        return self._digest.hexdigest()

    def _build_demand(self, alpha: float, seed: int,
                      rank_offset: int = 0) -> None:
        demand = build_demand(self.config, alpha, seed, rank_offset)
        self.catalog = demand.catalog
        self.profiles = demand.profiles
        self.plan = demand.plan
        self.bounds = demand.bounds

    def _initial_anchor(self, anchor_id: int) -> AnchorState:
        config = self.config
        agent = AgentState.initial(config.catalog_size, config.anchor_capacity,
                                   **config.agent_params())
        if config.policy == 'benchmark_value':
            cache = self.plan.cache(anchor_id)
        else:
            cache = random_cache_set(config.catalog_size,
                                     config.anchor_capacity, self.policy_rng)
        return AnchorState(anchor_id, cache, agent,
                           PopularityEstimate.empty(config.catalog_size))

    def _schedule_initial_events(self) -> None:
        config = self.config
        leg = self.hover + self.transit
        cycle = config.n_anchor * leg

        # groups spread evenly over the cycle, members co-located
        for ferry in self.ferries:
            offset = ferry.group_id * cycle / config.n_groups
            first = (-offset) % leg
            if np.isclose(first, leg):
                first = 0.0
            anchor = int(round((offset + first) / leg)) % config.n_anchor
            ferry.position = anchor
            if config.policy == 'benchmark_value':
                ferry.cache = benchmark_ferry_load(
                    self.plan, ferry.capacity, anchor,
                    (anchor - 1) % config.n_anchor, frozenset())
            self.queue.schedule(first, EventKind.FERRY_ARRIVAL,
                                ferry.ferry_id, anchor)

        for community in range(config.n_anchor):
            first = self.request_rng.exponential(1.0 / config.request_rate)
            self.queue.schedule(first, EventKind.REQUEST_ARRIVAL, community)

        if 0 < config.shift_time < config.duration:
            self.queue.schedule(config.shift_time, EventKind.DEMAND_SHIFT, 0)

    def _budget_spent(self) -> bool:
        budget = self.config.max_epochs
        return budget > 0 and all(a.epoch >= budget for a in self.anchors)

    def run(self) -> SimulationResult:
        """Process events until the duration or the epoch budget is reached."""
        while self.queue:
            event = self.queue.peek()
            if event.time >= self.config.duration or self._budget_spent():
                break
            self.step(self.queue.pop())
        return self.result()

    def result(self) -> SimulationResult:
        return SimulationResult(list(self.records), list(self.tallies),
                                list(self.bounds), self.trace_hash,
                                self.events_processed)

    def step(self, event: Event) -> None:
        """Process one event and check the global invariants."""
        if event.time < self.clock:
            raise InvariantViolation(
                'clock-monotone',
                f"event at {event.time} after clock {self.clock}")
        self.clock = event.time

        outcome = None
        if event.kind is EventKind.REQUEST_ARRIVAL:
            outcome = self._issue_request(event.entity)
        elif event.kind is EventKind.REQUEST_EXPIRY:
            outcome = self.resolve_expiry(event.entity, event.payload)
        elif event.kind is EventKind.FERRY_ARRIVAL:
            self.handle_ferry_arrival(event.entity, event.payload)
        elif event.kind is EventKind.FERRY_DEPARTURE:
            self.handle_ferry_departure(event.entity, event.payload)
        elif event.kind is EventKind.EPOCH_TICK:
            self.handle_epoch(event.entity)
        else:
            self.shift_demand()

        self._digest.update(
            f"{event.time!r}|{event.kind.name}|{event.entity}|"
            f"{event.payload}|{outcome}\n".encode())
        self.events_processed += 1
        self._check_conservation()

    def _check_conservation(self) -> None:
        for community, tally in enumerate(self.tallies):
            pending = len(self.anchors[community].pending)
            if tally.hits + tally.downloads + pending != tally.issued:
                raise InvariantViolation(
                    'conservation',
                    f"community {community}: {tally.hits} hits + "
                    f"{tally.downloads} downloads + {pending} pending != "
                    f"{tally.issued} requests")

    def _issue_request(self, community: int) -> str:
        request, next_arrival = sample_request(
            self.profiles[community], self.catalog, self.clock,
            self.request_rng, self.config.trajectory_period,
            next(self._request_ids))
        self.queue.schedule(next_arrival, EventKind.REQUEST_ARRIVAL,
                            community)
        disposition = self.handle_request(request)
        return f"{request.content_id}:{disposition.value}"

    def _record_hit(self, anchor: AnchorState, request: Request,
                    local: bool) -> None:
        delay = self.clock - request.issue_time
        if delay > request.tad or delay < 0:
            raise InvariantViolation(
                'tad-honored',
                f"request {request.request_id} served after {delay}s "
                f"with tad {request.tad}s")

        window = anchor.window
        if local:
            window.hits_local += 1
            window.served_local.add(request.content_id)
        else:
            window.hits_ferry += 1
            window.served_ferry.add(request.content_id)
        window.delay_total += delay

        tally = self.tallies[anchor.anchor_id]
        tally.hits += 1
        if not local:
            tally.ferry_hits += 1
        tally.delay_total += delay

    def handle_request(self, request: Request) -> Disposition:
        """
        Serve a request from the anchor cache or a docked ferry, or queue it
        until a ferry brings the content or its TAD expires.
        """
        anchor = self.anchors[request.community_id]
        self.tallies[request.community_id].issued += 1
        anchor.estimate.record(request.content_id)

        if request.content_id in anchor.cache:
            self._record_hit(anchor, request, local=True)
            return Disposition.SERVED_LOCAL

        for ferry_id in sorted(anchor.docked):
            if request.content_id in self.ferries[ferry_id].cache:
                self._record_hit(anchor, request, local=False)
                return Disposition.SERVED_FERRY

        anchor.pending[request.request_id] = request
        expiry = np.nextafter(request.issue_time + request.tad, np.inf)
        self.queue.schedule(expiry, EventKind.REQUEST_EXPIRY,
                            request.community_id, request.request_id)
        return Disposition.PENDING

    def resolve_expiry(self, community: int,
                       request_id: int) -> Optional[Disposition]:
        """Download a still pending request over the vertical link."""
        anchor = self.anchors[community]
        if anchor.pending.pop(request_id, None) is None:
            return None

        anchor.window.expired += 1
        self.tallies[community].downloads += 1
        return Disposition.DOWNLOADED

    def handle_ferry_arrival(self, ferry_id: int, anchor_id: int) -> None:
        """
        Dock a ferry: serve matching pending requests in issue order, hand
        over the carried boards and open the anchor's epoch tick.
        """
        ferry = self.ferries[ferry_id]
        anchor = self.anchors[anchor_id]
        ferry.docked_at = anchor_id
        ferry.position = anchor_id
        anchor.docked.add(ferry_id)

        if ferry.cache:
            for request_id, request in list(anchor.pending.items()):
                if request.content_id in ferry.cache:
                    del anchor.pending[request_id]
                    self._record_hit(anchor, request, local=False)

        merge_newer(anchor.q_snapshots, ferry.q_snapshots)
        merge_newer(anchor.availability_info, ferry.availability_info)

        if (anchor_id, self.clock) not in self._ticks:
            self._ticks.add((anchor_id, self.clock))
            self.queue.schedule(self.clock, EventKind.EPOCH_TICK, anchor_id)

        self.queue.schedule(self.clock + self.hover,
                            EventKind.FERRY_DEPARTURE, ferry_id, anchor_id)

    def handle_ferry_departure(self, ferry_id: int, anchor_id: int) -> None:
        """Load the ferry with the anchor's boards and contents, send it on."""
        ferry = self.ferries[ferry_id]
        anchor = self.anchors[anchor_id]
        anchor.docked.discard(ferry_id)
        ferry.docked_at = None

        ferry.q_snapshots[anchor_id] = QSnapshot(
            anchor_id, anchor.agent.epoch, self.clock, anchor.agent.q.copy(),
            anchor.estimate.as_distribution)
        merge_newer(ferry.q_snapshots, anchor.q_snapshots)
        merge_newer(ferry.availability_info, anchor.availability_info)

        next_anchor = (anchor_id + 1) % self.config.n_anchor
        ferry.cache = self._load_ferry(ferry, anchor, next_anchor)
        if len(ferry.cache) > ferry.capacity:
            raise InvariantViolation(
                'ferry-capacity',
                f"ferry {ferry_id} carries {len(ferry.cache)} contents")

        ferry.position = next_anchor
        self.queue.schedule(self.clock + self.transit,
                            EventKind.FERRY_ARRIVAL, ferry_id, next_anchor)

    def _known_cache(self, anchor: AnchorState, other: int) -> FrozenSet[int]:
        record = anchor.availability_info.get(other)
        return record.cache if record is not None else frozenset()

    def _claims_for(self, anchor_id: int, group_id: int) -> _GroupClaims:
        claims = self._claims.get((anchor_id, group_id))
        if claims is None or claims.time != self.clock:
            claims = _GroupClaims(self.clock)
            self._claims[(anchor_id, group_id)] = claims
        return claims

    def _load_ferry(self, ferry: FerryState, anchor: AnchorState,
                    next_anchor: int) -> FrozenSet[int]:
        config = self.config
        if next_anchor == anchor.anchor_id:
            ferry.roster_index = None
            return frozenset()

        if config.policy == 'benchmark_value':
            return benchmark_ferry_load(self.plan, ferry.capacity, next_anchor,
                                        anchor.anchor_id, ferry.cache)

        next_cache = self._known_cache(anchor, next_anchor)
        if config.policy == 'random':
            candidates = np.setdiff1d(np.arange(config.catalog_size),
                                      np.fromiter(next_cache, dtype=int))
            size = min(ferry.capacity, candidates.size)
            return frozenset(self.ferry_rng.choice(
                candidates, size=size, replace=False).tolist())

        return self._selective_load(ferry, anchor, next_cache)

    def _selective_load(self, ferry: FerryState, anchor: AnchorState,
                        next_cache: FrozenSet[int]) -> FrozenSet[int]:
        config = self.config
        q = anchor.agent.q
        eligible = anchor.cache | ferry.cache
        plan = partition_rosters(((c, q[c]) for c in eligible),
                                 ferry.capacity)
        if not len(plan):
            ferry.roster_index = None
            return frozenset()

        claims = self._claims_for(anchor.anchor_id, ferry.group_id)
        blocked = next_cache

        if self.selective:
            prev = anchor.last_roster_sent
            interval = tad = None
            if prev is not None:
                estimate = anchor.estimate.as_distribution
                least = plan.least_popular(prev % len(plan), estimate)
                interval = 1.0 / (config.request_rate * estimate[least])
                tad = self.profiles[anchor.anchor_id].tad_rule.ratio(least) \
                    * config.trajectory_period
            ferry.roster_index = select_roster(
                plan, prev, interval, tad, self.revisit_interval,
                claims.rosters)
            anchor.last_roster_sent = ferry.roster_index
            blocked = next_cache | claims.contents
        else:
            ferry.roster_index = 0

        scores = {c: q[c] for c in eligible if c not in claims.contents}
        cache = refresh_ferry_cache(ferry, plan, blocked, scores)
        claims.rosters.add(ferry.roster_index)
        claims.contents |= cache
        return cache

    def _ranked_cache(self, anchor: AnchorState) -> List[int]:
        if self.config.policy == 'benchmark_value':
            scores = self.plan.values[anchor.anchor_id]
        else:
            scores = anchor.agent.q
        return sorted(anchor.cache, key=lambda c: (-scores[c], c))

    def handle_epoch(self, anchor_id: int) -> Optional[EpochRecord]:
        """
        Close the anchor's epoch window, emit its record and let the policy
        learn and reselect the cache.
        """
        self._ticks.discard((anchor_id, self.clock))
        anchor = self.anchors[anchor_id]
        budget = self.config.max_epochs
        if budget and anchor.epoch >= budget:
            return None

        window = anchor.window
        resolved = window.resolved
        local = availability(window.hits_local, resolved)
        ferried = availability(window.hits_ferry, resolved)
        overall = availability(window.hits, resolved)
        before = anchor.previous
        anchor.previous = (local, ferried, overall)

        info = AvailabilityRecord(
            anchor_id, self.clock, anchor.cache,
            frozenset(window.served_local), frozenset(window.served_ferry),
            frozenset(window.served_local | window.served_ferry),
            local - before[0], ferried - before[1], overall - before[2])
        anchor.availability_info[anchor_id] = info

        anchor.epoch += 1
        bound = self.bounds[anchor_id]
        record = EpochRecord(
            epoch=anchor.epoch,
            time=self.clock,
            community=anchor_id,
            hits=window.hits,
            requests=resolved,
            availability=overall,
            relative_availability=overall / bound if bound > 0 else 0.0,
            mean_access_delay=window.delay_total / window.hits
            if window.hits else 0.0,
            downloads=window.expired,
            cdo=cdo(self._ranked_cache(anchor),
                    self.plan.ranked_cache(anchor_id)),
        )
        self.records.append(record)
        anchor.window = EpochWindow()

        self._update_policy(anchor, info)
        if len(anchor.cache) != self.config.anchor_capacity:
            raise InvariantViolation(
                'cache-size',
                f"anchor {anchor_id} caches {len(anchor.cache)} contents")
        return record

    def _reward_inputs(self, anchor: AnchorState,
                       own: AvailabilityRecord) -> RewardInputs:
        reports = anchor.availability_info
        remote = {j: r for j, r in reports.items() if j != anchor.anchor_id}
        return RewardInputs(
            served_local=own.served_local,
            served_ferry={j: r.served_ferry for j, r in remote.items()},
            served_global={j: r.served_all for j, r in reports.items()},
            delta_local=own.delta_local,
            delta_ferry={j: r.delta_ferry for j, r in remote.items()},
            delta_global={j: r.delta_global for j, r in reports.items()},
            mf_present=bool(anchor.docked),
            n_anchor=self.config.n_anchor,
            self_anchor=anchor.anchor_id,
        )

    def _update_policy(self, anchor: AnchorState,
                       own: AvailabilityRecord) -> None:
        config = self.config
        if config.policy == 'random':
            anchor.cache = random_cache_set(
                config.catalog_size, config.anchor_capacity, self.policy_rng)
            return
        if not self.learning:
            return

        agent = anchor.agent
        learn_epoch(agent, anchor.cache, self._reward_inputs(anchor, own))

        if self.federated and latency_gate(
                anchor.latency, config.latency_threshold) \
                is GateDecision.FEDERATE_AND_RESET:
            self._federate(anchor)

        anchor.cache = select_cache_set(ucb_scores(agent),
                                        config.anchor_capacity,
                                        agent.epsilon, self.policy_rng)
        agent.decay_epsilon()

    def _federate(self, anchor: AnchorState) -> None:
        """Blend the anchor's Q-table with the snapshots ferried to it."""
        cfg = self.config.federation
        agent = anchor.agent
        p_now = anchor.estimate.as_distribution

        members = sorted(set(anchor.q_snapshots) | {anchor.anchor_id})
        tables, estimates = [], []
        for j in members:
            if j == anchor.anchor_id:
                tables.append(agent.q)
                estimates.append(p_now)
            else:
                tables.append(anchor.q_snapshots[j].q)
                estimates.append(anchor.q_snapshots[j].distribution)

        factors = contribution_factors(members.index(anchor.anchor_id),
                                       estimates, len(members), cfg.rho_mode)
        q_agg = aggregate_q(factors, tables)

        p_prev = anchor.federated_distribution \
            if anchor.federated_distribution is not None else p_now
        w1 = omega1(p_now, p_prev, cfg)
        w2 = omega2(agent.epoch, agent.q, cfg)
        agent.q = federated_update(agent.q, q_agg, w1, w2)
        anchor.federated_distribution = p_now

    def shift_demand(self) -> None:
        """Replace every community's preferences mid-run."""
        config = self.config
        alpha = config.shift_alpha if config.shift_alpha is not None \
            else config.zipf_alpha
        self._build_demand(alpha, config.seed + config.shift_seed_offset,
                           config.shift_rank_offset)
        if config.policy == 'benchmark_value':
            for anchor in self.anchors:
                anchor.cache = self.plan.cache(anchor.anchor_id)


def run_simulation(config: SimConfig) -> SimulationResult:
    """Run one replication of the configured system."""
    return Simulation(config).run()
