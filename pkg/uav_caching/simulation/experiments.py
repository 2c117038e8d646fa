""" Module running experiment scenarios over seeds and writing CSV results. """
import concurrent.futures
from dataclasses import dataclass, field
import os
from typing import Any, Dict, List, Optional, Tuple
import numpy as np
import pandas as pd
from tqdm import tqdm

from uav_caching.errors import (
    ConfigurationError,
    DomainError,
    ReplicationError,
    UavCachingError,
)
from uav_caching.caching.benchmark import bound_report
from .config import (
    LEARNING_POLICIES,
    POLICIES,
    SimConfig,
    apply_overrides,
    cycle_length,
    load_config,
)
from .kernel import SimulationResult, build_demand, run_simulation
from .metrics import (
    availability_series,
    availability_spread,
    converged_mean,
    early_mean,
    reactivity,
)

SCENARIOS = (
    'latency_sweep',
    'policy_evolution',
    'preference_shift',
    'access_delay',
    'cdo_convergence',
    'bound_only',
    'custom',
)
LATENCY_THRESHOLDS = (0, 2, 10)
# contents 51-75 get a tighter TAD in the latency sweep
LATENCY_TAD_OVERRIDES = '50-74:0.0625'
REACTIVITY_BASELINE = 'topk_mab'


@dataclass
class ExperimentSpec:
    """A scenario run over a list of seeds."""
    scenario: str = 'custom'
    overrides: Dict[str, Any] = field(default_factory=dict)
    seeds: List[int] = field(default_factory=lambda: [1])
    output_dir: str = 'results'
    preset: Optional[str] = None
    config_path: Optional[str] = None

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigurationError(
                f"unknown scenario '{self.scenario}', expected one of "
                + ", ".join(SCENARIOS))
        if not self.seeds:
            raise ConfigurationError("at least one seed is required")


def scenario_variants(scenario: str,
                      base: SimConfig) -> List[Tuple[str, Dict[str, Any]]]:
    """
    Named configuration changes a scenario compares.

    Args:
        scenario (str): The scenario name.
        base (SimConfig): The configuration the changes apply to.

    Returns:
        list: Pairs of (variant name, overrides).
    """
    if scenario == 'latency_sweep':
        return [(f"tl{threshold}",
                 {'latency_threshold': threshold,
                  'tad_overrides': LATENCY_TAD_OVERRIDES})
                for threshold in LATENCY_THRESHOLDS]

    if scenario in ('policy_evolution', 'access_delay'):
        return [(policy, {'policy': policy}) for policy in POLICIES]

    if scenario == 'cdo_convergence':
        return [(policy, {'policy': policy}) for policy in LEARNING_POLICIES]

    if scenario == 'preference_shift':
        shift = base.shift_time if base.shift_time > 0 else base.duration / 2
        return [(policy, {'policy': policy, 'shift_time': shift})
                for policy in LEARNING_POLICIES]

    return [(base.policy, {})]


def reactivity_bin_width(config: SimConfig) -> float:
    """Seconds spanned by reactivity_bin_epochs consecutive epochs."""
    return config.reactivity_bin_epochs * cycle_length(config) \
        / config.n_groups


def bound_table(config: SimConfig) -> pd.DataFrame:
    """Upper-bound breakdown per community for a configuration."""
    demand = build_demand(config)
    return bound_report(demand.plan, config.upper_bound_params)


def summarize(frame: pd.DataFrame, variant: str, seed: int,
              result: SimulationResult) -> Dict[str, Any]:
    """Converged measures of one replication."""
    return {
        'variant': variant,
        'seed': seed,
        'epochs': int(frame['epoch'].max()) if not frame.empty else 0,
        'availability': converged_mean(frame, 'availability'),
        'relative_availability':
            converged_mean(frame, 'relative_availability'),
        'early_availability': early_mean(frame, 'availability'),
        'cdo': converged_mean(frame, 'cdo'),
        'early_cdo': early_mean(frame, 'cdo'),
        'mean_access_delay': converged_mean(frame, 'mean_access_delay'),
        'downloads': int(frame['downloads'].sum()) if not frame.empty else 0,
        'availability_spread': availability_spread(frame),
        'trace_hash': result.trace_hash,
    }


def aggregate_seeds(replications: pd.DataFrame) -> pd.DataFrame:
    """Mean and standard deviation of every measure across seeds."""
    measures = ['availability', 'relative_availability', 'early_availability',
                'cdo', 'early_cdo', 'mean_access_delay', 'downloads',
                'availability_spread']
    grouped = replications.groupby('variant', sort=False)[measures]
    summary = grouped.agg(['mean', 'std'])
    summary.columns = [f"{name}_{stat}" for name, stat in summary.columns]
    summary.insert(0, 'seeds', grouped.size())
    return summary.reset_index()


def reactivity_table(frames: Dict[Tuple[str, int], pd.DataFrame],
                     shift_time: float,
                     duration: float,
                     bin_width: Optional[float] = None) -> pd.DataFrame:
    """
    Reactivity of every variant against the baseline, seed by seed, on
    availability pooled into bins of bin_width seconds.
    """
    tau = duration - shift_time
    rows = []
    for (variant, seed), frame in frames.items():
        baseline = frames.get((REACTIVITY_BASELINE, seed))
        row = {'variant': variant, 'seed': seed, 'psi': np.nan,
               'chi': np.nan, 'zeta_cross': np.nan, 'tau': tau,
               'tau_c': np.nan}
        if baseline is not None:
            try:
                report = reactivity(
                    availability_series(frame, bin_width), shift_time,
                    availability_series(baseline, bin_width), tau)
                row.update(psi=report.psi, chi=report.chi,
                           zeta_cross=report.zeta_cross, tau_c=report.tau_c)
            except DomainError:
                pass
        rows.append(row)
    return pd.DataFrame(rows)


def _run_replications(
        jobs: List[Tuple[str, int, SimConfig]],
        max_workers: int,
        progress: bool
) -> Dict[Tuple[str, int], SimulationResult]:
    results = {}

    def run(job):
        variant, seed, config = job
        try:
            return run_simulation(config)
        except UavCachingError as exc:
            raise ReplicationError(variant, seed, exc) from exc

    if max_workers <= 1:
        for job in tqdm(jobs, desc="Running replications",
                        disable=not progress):
            results[job[:2]] = run(job)
        return results

    with concurrent.futures.ThreadPoolExecutor(
            max_workers=max_workers) as executor:
        futures = {executor.submit(run, job): job[:2] for job in jobs}

        for future in tqdm(concurrent.futures.as_completed(futures),
                           total=len(futures),
                           desc="Running replications",
                           disable=not progress):
            results[futures[future]] = future.result()

    return results


def run_experiment(spec: ExperimentSpec, max_workers: int = 4,
                   progress: bool = True) -> List[str]:
    """
    Run every variant of the experiment's scenario for every seed and write one
    epoch-series CSV per replication plus a summary CSV.

    Args:
        spec (ExperimentSpec): What to run.
        max_workers (int): Replications run concurrently; 1 runs them
            in the calling thread.
        progress (bool): Show a progress bar.

    Returns:
        list: Paths of the written files.
    """
    spec.validate()
    base = load_config(spec.config_path, spec.overrides, spec.preset)
    os.makedirs(spec.output_dir, exist_ok=True)
    written = []

    if spec.scenario == 'bound_only':
        filepath = os.path.join(spec.output_dir, 'bound.csv')
        bound_table(base).to_csv(filepath, index=False)
        print(f"Saved upper bound to {filepath}")
        return [filepath]

    variants = scenario_variants(spec.scenario, base)
    jobs = [(name, seed,
             apply_overrides(base, {**changes, 'seed': seed}).validate())
            for name, changes in variants for seed in spec.seeds]
    results = _run_replications(jobs, max_workers, progress)

    frames = {}
    replications = []
    for name, seed, _ in jobs:
        result = results[(name, seed)]
        frame = result.to_frame()
        frames[(name, seed)] = frame

        filepath = os.path.join(spec.output_dir,
                                f"series_{name}_seed{seed}.csv")
        frame.to_csv(filepath, index=False)
        written.append(filepath)
        replications.append(summarize(frame, name, seed, result))

    print(f"Saved {len(frames)} epoch series to {spec.output_dir}")

    replications = pd.DataFrame(replications)
    filepath = os.path.join(spec.output_dir, 'replications.csv')
    replications.to_csv(filepath, index=False)
    written.append(filepath)

    filepath = os.path.join(spec.output_dir, 'summary.csv')
    aggregate_seeds(replications).to_csv(filepath, index=False)
    written.append(filepath)
    print(f"Saved summary to {filepath}")

    if spec.scenario == 'preference_shift':
        shift_time = jobs[0][2].shift_time
        table = reactivity_table(frames, shift_time, base.duration,
                                 reactivity_bin_width(base))
        filepath = os.path.join(spec.output_dir, 'reactivity.csv')
        table.to_csv(filepath, index=False)
        written.append(filepath)
        print(f"Saved reactivity to {filepath}")

    return written
