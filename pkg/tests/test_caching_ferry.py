import numpy as np
import pytest
from uav_caching.caching.ferry import (
    AvailabilityRecord,
    FerryState,
    QSnapshot,
    RosterPlan,
    merge_newer,
    partition_rosters,
    refresh_ferry_cache,
    select_roster,
)
from uav_caching.errors import ConfigurationError, DomainError


def scored(scores):
    return list(enumerate(scores))


def test_partition_rosters_even_chunks():
    plan = partition_rosters(scored([6, 5, 4, 3, 2, 1]), 2)

    assert plan.rosters == [(0, 1), (2, 3), (4, 5)]


def test_partition_rosters_short_last_roster():
    plan = partition_rosters(scored([5, 4, 3, 2, 1]), 2)

    assert len(plan) == 3
    assert plan.rosters[-1] == (4,)


def test_partition_rosters_empty():
    assert len(partition_rosters([], 3)) == 0


def test_partition_rosters_rejects_nonpositive_size():
    with pytest.raises(ConfigurationError):
        partition_rosters(scored([1, 2]), 0)


def test_partition_rosters_ties_match_stable_sort():
    rng = np.random.default_rng(0)

    for _ in range(50):
        scores = rng.integers(0, 4, size=11).astype(float)
        ids = rng.permutation(40)[:11]
        eligible = list(zip(ids.tolist(), scores.tolist()))

        plan = partition_rosters(eligible, 3)

        expected = [c for c, _ in sorted(sorted(eligible),
                                         key=lambda pair: -pair[1])]
        assert plan.contents == expected
        assert len(set(plan.contents)) == len(eligible)
        for first, second in zip(plan.rosters, plan.rosters[1:]):
            assert min(plan.scores[c] for c in first) \
                >= max(plan.scores[c] for c in second)


def test_least_popular():
    plan = RosterPlan([(3, 7, 9)])
    popularity = {3: 0.2, 7: 0.05, 9: 0.1}

    assert plan.least_popular(0, popularity) == 7


def four_rosters():
    return partition_rosters(scored([8, 7, 6, 5, 4, 3, 2, 1]), 2)


def test_select_roster_defaults_to_best():
    assert select_roster(four_rosters(), None, None, None, 30.0) == 0


def test_select_roster_keeps_hot_roster():
    assert select_roster(four_rosters(), 0, 5.0, 15.0, 30.0) == 0


def test_select_roster_advances_cold_roster():
    assert select_roster(four_rosters(), 0, 40.0, 15.0, 30.0) == 1
    assert select_roster(four_rosters(), 3, 40.0, 15.0, 30.0) == 0


def test_select_roster_interval_bounded_by_revisit():
    # within the TAD but slower than the ferry revisits
    assert select_roster(four_rosters(), 1, 20.0, 60.0, 10.0) == 2


def test_select_roster_skips_peer_rosters():
    assert select_roster(four_rosters(), None, None, None, 30.0,
                         group_peers=[0, 1]) == 2
    assert select_roster(four_rosters(), 2, 40.0, 15.0, 30.0,
                         group_peers=[3]) == 0


def test_select_roster_all_claimed():
    plan = partition_rosters(scored([3, 2, 1]), 2)

    with pytest.warns(UserWarning):
        assert select_roster(plan, None, None, None, 30.0,
                             group_peers=[0, 1]) == 0


def test_select_roster_empty_plan():
    with pytest.raises(DomainError):
        select_roster(RosterPlan([]), None, None, None, 30.0)


def make_ferry(capacity=2, roster_index=0):
    return FerryState(ferry_id=0, group_id=0, capacity=capacity,
                      roster_index=roster_index)


def test_refresh_keeps_disjoint_roster():
    plan = four_rosters()
    ferry = make_ferry()
    scores = dict(scored([8, 7, 6, 5, 4, 3, 2, 1]))

    cache = refresh_ferry_cache(ferry, plan, frozenset({5, 6}), scores)

    assert cache == frozenset({0, 1})
    assert ferry.cache == cache


def test_refresh_replaces_contents_at_next_anchor():
    plan = partition_rosters(scored([6, 5, 4, 3, 2, 1]), 2)
    ferry = make_ferry()
    scores = dict(scored([6, 5, 4, 3, 2, 1]))
    next_cache = frozenset({0, 1, 3})

    cache = refresh_ferry_cache(ferry, plan, next_cache, scores)

    assert cache == frozenset({2, 4})
    assert not cache & next_cache


def test_refresh_leaves_slots_empty_without_candidates():
    plan = partition_rosters(scored([3, 2, 1]), 2)
    ferry = make_ferry()
    scores = dict(scored([3, 2, 1]))

    cache = refresh_ferry_cache(ferry, plan, frozenset({0, 1, 2}), scores)

    assert cache == frozenset()


def test_refresh_partial_replacement():
    plan = partition_rosters(scored([3, 2, 1]), 2)
    ferry = make_ferry()
    scores = dict(scored([3, 2, 1]))

    cache = refresh_ferry_cache(ferry, plan, frozenset({0, 2}), scores)

    assert cache == frozenset({1})


@pytest.mark.parametrize("group_size, n_eligible, capacity", [
    (3, 7, 2),
    (2, 10, 3),
    (4, 16, 4),
    (2, 3, 2),
])
def test_group_union_cardinality(group_size, n_eligible, capacity):
    scores = dict(scored(np.linspace(1, 0, n_eligible).tolist()))
    plan = partition_rosters(scores.items(), capacity)
    claimed = []
    union = set()

    for member in range(group_size):
        ferry = FerryState(member, 0, capacity)
        if len(claimed) >= len(plan):
            break
        ferry.roster_index = select_roster(plan, None, None, None, 30.0,
                                           group_peers=claimed)
        claimed.append(ferry.roster_index)
        union |= refresh_ferry_cache(ferry, plan, frozenset(), scores)

    assert len(union) == min(group_size * capacity, n_eligible)


def test_merge_newer():
    old = QSnapshot(1, 3, 10.0, np.zeros(2), np.full(2, 0.5))
    new = QSnapshot(1, 5, 20.0, np.ones(2), np.full(2, 0.5))
    other = QSnapshot(2, 1, 5.0, np.zeros(2), np.full(2, 0.5))

    target = {1: old}
    merge_newer(target, {1: new, 2: other})
    assert target == {1: new, 2: other}

    merge_newer(target, {1: old})
    assert target[1] is new


def test_merge_newer_availability_records():
    record = AvailabilityRecord(0, 12.0, frozenset({1}), frozenset({1}),
                                frozenset(), frozenset({1}), 0.1, 0.0, 0.1)
    target = {}

    merge_newer(target, {0: record})

    assert target[0] is record
