"""
Per-anchor Top-k multi-armed bandit: Q-table, the local / ferrying / global
rewards, UCB scores and top-k cache selection with epsilon exploration.
"""
from dataclasses import dataclass, field
import math
import warnings
from typing import AbstractSet, Dict, FrozenSet, Iterable, Mapping
import numpy as np

from uav_caching.errors import ConfigurationError

R_MAX = 3.0


@dataclass
class AgentState:
    """Learning state of one anchor."""
    q: np.ndarray = field(repr=False)
    pull_count: np.ndarray = field(repr=False)
    cache_capacity: int
    learn_rate: float = 0.1
    zeta_ucb: float = 2.0
    epsilon: float = 0.3
    epsilon_decay: float = 0.99
    epsilon_floor: float = 0.01
    # sample-average steps until 1/learn_rate pulls
    warm_start: bool = False
    epoch: int = 0

    @classmethod
    def initial(cls, catalog_size: int, cache_capacity: int,
                **params) -> "AgentState":
        """Q-values and pull counts start at zero."""
        if not 0 < params.get('learn_rate', 0.1) <= 1:
            raise ConfigurationError("learn_rate must be in (0, 1]")
        return cls(np.zeros(catalog_size), np.zeros(catalog_size, dtype=int),
                   cache_capacity, **params)

    def decay_epsilon(self) -> None:
        self.epsilon = max(self.epsilon_floor,
                           self.epsilon * self.epsilon_decay)


@dataclass
class RewardInputs:
    """
    Served-content sets and availability changes seen by an anchor at an
    epoch. Remote anchors without a report are absent from the mappings.
    """
    served_local: FrozenSet[int]
    served_ferry: Mapping[int, FrozenSet[int]]
    served_global: Mapping[int, FrozenSet[int]]
    delta_local: float
    delta_ferry: Mapping[int, float]
    delta_global: Mapping[int, float]
    mf_present: bool
    n_anchor: int
    self_anchor: int


def _bracket(i: int, served: AbstractSet[int], delta: float) -> int:
    return int(i in served and delta >= 0) - int(i not in served and delta < 0)


def reward_local(i: int, inputs: RewardInputs) -> int:
    """+1 if served locally while available, -1 if missed as it fell."""
    return _bracket(i, inputs.served_local, inputs.delta_local)


def reward_ferry(i: int, inputs: RewardInputs) -> float:
    """Average of the served/availability brackets over the remote anchors."""
    if inputs.n_anchor < 2:
        warnings.warn("ferrying reward needs at least two anchors")
        return 0.0

    total = sum(_bracket(i, inputs.served_ferry[j], inputs.delta_ferry[j])
                for j in range(inputs.n_anchor)
                if j != inputs.self_anchor and j in inputs.served_ferry)
    return total / (inputs.n_anchor - 1)


def reward_global(i: int, inputs: RewardInputs) -> float:
    """Average of the served/availability brackets over every anchor."""
    total = sum(_bracket(i, inputs.served_global[j], inputs.delta_global[j])
                for j in range(inputs.n_anchor)
                if j in inputs.served_global)
    return total / inputs.n_anchor


def step_size(state: AgentState, i: int) -> float:
    """
    Weight of the newest reward of content i. A warm-started agent averages
    the samples of an arm until the average weighs less than learn_rate.
    """
    if state.warm_start:
        return max(state.learn_rate, 1.0 / (state.pull_count[i] + 1))
    return state.learn_rate


def q_update(state: AgentState, i: int, inputs: RewardInputs) -> float:
    """
    Recursive Q-value update of content i. Ferrying and global rewards only
    count while a ferry is within range.
    """
    reward = reward_local(i, inputs)
    if inputs.mf_present:
        reward += reward_ferry(i, inputs) + reward_global(i, inputs)

    step = step_size(state, i)
    state.q[i] = (1 - step) * state.q[i] + step * reward
    return float(state.q[i])


def learn_epoch(state: AgentState, cached: Iterable[int],
                inputs: RewardInputs) -> Dict[int, float]:
    """
    Advance the agent by one epoch: every cached content (pulled arm) gets
    its Q-value updated and its pull count incremented.
    """
    state.epoch += 1
    updated = {}
    for i in sorted(cached):
        updated[i] = q_update(state, i, inputs)
        state.pull_count[i] += 1
    return updated


def ucb_scores(state: AgentState) -> np.ndarray:
    """
    Upper confidence bound of every content; never pulled contents map to
    +inf.
    """
    t = max(state.epoch, 1)
    with np.errstate(divide='ignore', invalid='ignore'):
        bonus = np.sqrt(state.zeta_ucb * math.log(t) / state.pull_count)
    bonus[state.pull_count == 0] = np.inf
    return state.q + bonus


def select_cache_set(scores: np.ndarray, k: int, epsilon: float,
                     rng: np.random.Generator) -> FrozenSet[int]:
    """
    Pick k contents: the top-k scores (ties by lower id), and with
    probability epsilon a random ceil(epsilon * k) of those slots swapped for
    random unselected contents.

    Args:
        scores (np.ndarray): Score of every content.
        k (int): Cache capacity.
        epsilon (float): Exploration probability.
        rng (np.random.Generator): Random stream.

    Returns:
        frozenset: Exactly k distinct content ids.
    """
    scores = np.asarray(scores, dtype=float)
    size = scores.size
    if k > size:
        raise ConfigurationError(
            f"cannot cache {k} contents out of {size}")

    ids = np.arange(size)
    order = ids[np.lexsort((ids, -scores))]
    selected = order[:k].copy()

    if epsilon > 0 and k < size and rng.random() < epsilon:
        n_replace = min(math.ceil(epsilon * k), k, size - k)
        slots = rng.choice(k, size=n_replace, replace=False)
        newcomers = rng.choice(order[k:], size=n_replace, replace=False)
        selected[slots] = newcomers

    return frozenset(selected.tolist())


def random_cache_set(catalog_size: int, k: int,
                     rng: np.random.Generator) -> FrozenSet[int]:
    """Uniform k-subset of the catalog."""
    if k > catalog_size:
        raise ConfigurationError(
            f"cannot cache {k} contents out of {catalog_size}")
    return frozenset(rng.choice(catalog_size, size=k, replace=False).tolist())
