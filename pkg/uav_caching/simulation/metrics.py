"""
Evaluation measures: content availability, cache distribution optimality
(Jaro-Winkler similarity of cache rankings), access delay series and the
reactivity of a policy to a demand shift.
"""
from dataclasses import astuple, dataclass, fields
from typing import List, Optional, Sequence
import numpy as np
import pandas as pd

from uav_caching.errors import DomainError

SUSTAINED_IMPROVEMENTS = 3
PREFIX_SCALE = 0.1
MAX_PREFIX = 4


@dataclass(frozen=True)
class EpochRecord:
    """Measures of one community over one epoch window."""
    epoch: int
    time: float
    community: int
    hits: int
    requests: int
    availability: float
    relative_availability: float
    mean_access_delay: float
    downloads: int
    cdo: float

    @classmethod
    def columns(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    def as_row(self) -> tuple:
        return astuple(self)


@dataclass(frozen=True)
class ReactivityReport:
    psi: float
    chi: float
    zeta_cross: float
    tau: float
    tau_c: float


def availability(hits: int, requests: int) -> float:
    """Share of requests served within their TAD; 0 for an empty window."""
    if hits < 0 or requests < 0:
        raise DomainError("hits and requests must be nonnegative")
    if hits > requests:
        raise DomainError(f"{hits} hits exceed {requests} requests")
    if requests == 0:
        return 0.0
    return hits / requests


def jaro_winkler(seq_learned: Sequence[int],
                 seq_benchmark: Sequence[int]) -> float:
    """
    Jaro-Winkler similarity of two token sequences, tokens compared by
    equality.

    Args:
        seq_learned (sequence): The first sequence.
        seq_benchmark (sequence): The second sequence.

    Returns:
        float: The similarity in [0, 1], 1 for identical sequences.
    """
    s1 = list(seq_learned)
    s2 = list(seq_benchmark)
    if not s1 and not s2:
        return 1.0
    if not s1 or not s2:
        return 0.0

    s1_len = len(s1)
    s2_len = len(s2)
    max_dist = max(0, max(s1_len, s2_len) // 2 - 1)

    match = 0
    hash_s1 = [False] * s1_len
    hash_s2 = [False] * s2_len

    for i in range(s1_len):
        start = max(0, i - max_dist)
        end = min(i + max_dist + 1, s2_len)
        for j in range(start, end):
            if hash_s2[j] or s1[i] != s2[j]:
                continue
            hash_s1[i] = True
            hash_s2[j] = True
            match += 1
            break

    if not match:
        return 0.0

    transpositions = 0
    point = 0
    for i in range(s1_len):
        if not hash_s1[i]:
            continue
        while not hash_s2[point]:
            point += 1
        if s1[i] != s2[point]:
            transpositions += 1
        point += 1

    t = transpositions / 2
    jaro = (match / s1_len + match / s2_len + (match - t) / match) / 3

    prefix = 0
    for i in range(min(MAX_PREFIX, s1_len, s2_len)):
        if s1[i] != s2[i]:
            break
        prefix += 1

    return min(1.0, jaro + PREFIX_SCALE * prefix * (1 - jaro))


def cdo(anchor_cache_ranked: Sequence[int],
        benchmark_ranked: Sequence[int]) -> float:
    """Cache distribution optimality of a learned cache ranking."""
    if len(anchor_cache_ranked) != len(benchmark_ranked):
        raise DomainError(
            f"ranked caches differ in length: {len(anchor_cache_ranked)} "
            f"vs {len(benchmark_ranked)}")
    return jaro_winkler(anchor_cache_ranked, benchmark_ranked)


def _recovery_onset(values: np.ndarray) -> Optional[int]:
    """Index where the first run of sustained improvements begins."""
    improving = np.diff(values) > 0
    run = 0
    for i, up in enumerate(improving):
        run = run + 1 if up else 0
        if run == SUSTAINED_IMPROVEMENTS:
            return i + 1 - SUSTAINED_IMPROVEMENTS
    return None


def reactivity(series: pd.Series, shift_time: float,
               baseline_series: pd.Series, tau: float) -> ReactivityReport:
    """
    Reaction of a policy to a demand shift, against a baseline policy.

    psi is the delay from the shift until availability starts three
    consecutive improvements, chi the lowest availability before that
    recovery, and zeta_cross = (tau - tau_c) / tau with tau_c the delay until
    the series first moves from trailing the baseline to beating it: 0 when
    it never trails, tau when it never regains the lead.

    Args:
        series (pd.Series): Availability indexed by time.
        shift_time (float): Time of the demand shift.
        baseline_series (pd.Series): Baseline availability indexed by time.
        tau (float): Length of the observation window in seconds.

    Returns:
        ReactivityReport: The reactivity measures.
    """
    if tau <= 0:
        raise DomainError(f"tau must be positive, got {tau}")

    window = series.sort_index().loc[shift_time:shift_time + tau]
    if len(window) < SUSTAINED_IMPROVEMENTS + 1:
        raise DomainError(
            f"only {len(window)} points after the shift, need at least "
            f"{SUSTAINED_IMPROVEMENTS + 1}")

    values = window.to_numpy(dtype=float)
    times = window.index.to_numpy(dtype=float)

    onset = _recovery_onset(values)
    if onset is None:
        psi = tau
        chi = float(values.min())
    else:
        psi = float(times[onset] - shift_time)
        chi = float(values[:onset + 1].min())

    baseline = baseline_series.sort_index()
    aligned = baseline.reindex(baseline.index.union(window.index)) \
        .ffill().reindex(window.index)
    ahead = ((window > aligned) & aligned.notna()).to_numpy()

    # the crossover is the first regain of the lead after trailing
    tau_c = tau
    if ahead.all():
        tau_c = 0.0
    else:
        first_behind = int(np.argmax(~ahead))
        regained = ahead[first_behind:]
        if regained.any():
            crossing = first_behind + int(np.argmax(regained))
            tau_c = float(min(tau, times[crossing] - shift_time))

    zeta_cross = float(np.clip((tau - tau_c) / tau, 0.0, 1.0))
    return ReactivityReport(psi, chi, zeta_cross, tau, tau_c)


def availability_series(frame: pd.DataFrame,
                        bin_width: Optional[float] = None) -> pd.Series:
    """
    System availability per epoch time, averaged over communities. With a
    bin_width, epochs are pooled into bins of that many seconds, each
    labelled by its right edge.
    """
    if bin_width is not None and bin_width <= 0:
        raise DomainError(f"bin_width must be positive, got {bin_width}")
    if frame.empty:
        return pd.Series(dtype=float)

    times = frame['time']
    if bin_width is not None:
        times = np.ceil(times / bin_width) * bin_width
    return frame.groupby(times)['availability'].mean().sort_index()


def converged_mean(frame: pd.DataFrame, column: str = 'availability',
                   fraction: float = 0.2) -> float:
    """Mean of a column over the last `fraction` of epochs."""
    if frame.empty:
        return 0.0
    epochs = np.sort(frame['epoch'].unique())
    keep = max(1, int(np.ceil(len(epochs) * fraction)))
    tail = frame[frame['epoch'].isin(epochs[-keep:])]
    return float(tail[column].mean())


def early_mean(frame: pd.DataFrame, column: str = 'availability',
               fraction: float = 0.1) -> float:
    """Mean of a column over the first `fraction` of epochs."""
    if frame.empty:
        return 0.0
    epochs = np.sort(frame['epoch'].unique())
    keep = max(1, int(np.ceil(len(epochs) * fraction)))
    head = frame[frame['epoch'].isin(epochs[:keep])]
    return float(head[column].mean())


def availability_spread(frame: pd.DataFrame, window: int = 150) -> float:
    """
    Standard deviation of availability across communities, per epoch,
    averaged over the last `window` epochs.
    """
    if frame.empty:
        return 0.0
    spread = frame.groupby('epoch')['availability'].std(ddof=0).sort_index()
    return float(spread.tail(window).mean())
