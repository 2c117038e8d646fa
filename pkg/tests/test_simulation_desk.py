import numpy as np
import pytest
from uav_caching.caching.benchmark import p_access, t_cond
from uav_caching.simulation.config import apply_overrides, load_config
from uav_caching.simulation.experiments import (
    REACTIVITY_BASELINE,
    reactivity_bin_width,
    reactivity_table,
    scenario_variants,
)
from uav_caching.simulation.kernel import run_simulation
from uav_caching.simulation.metrics import converged_mean, early_mean

SEEDS = (1, 2, 3, 4, 5)
DESK = load_config(preset='desk')
BENCHMARK = {'policy': 'benchmark_value', 'storage_lambda': 0.5}


def desk_config(**overrides):
    return apply_overrides(DESK, overrides).validate()


def run_scenario(scenario, variants=None):
    frames = {}
    for name, changes in scenario_variants(scenario, DESK):
        if variants is not None and name not in variants:
            continue
        for seed in SEEDS:
            config = desk_config(**changes, seed=seed)
            frames[(name, seed)] = run_simulation(config).to_frame()
    return frames


def seed_mean(frames, variant, measure):
    return float(np.mean([measure(frame)
                          for (name, _), frame in frames.items()
                          if name == variant]))


def ferry_share(config):
    summary = run_simulation(config).summary()
    return summary['ferry_hits'].sum() / summary['issued'].sum()


@pytest.fixture(scope='module')
def policy_runs():
    return run_scenario('policy_evolution')


@pytest.fixture(scope='module')
def latency_runs():
    return run_scenario('latency_sweep')


@pytest.fixture(scope='module')
def shift_table():
    frames = run_scenario('preference_shift',
                          (REACTIVITY_BASELINE, 'fedmab_selective'))
    return reactivity_table(frames, DESK.duration / 2, DESK.duration,
                            reactivity_bin_width(DESK))


@pytest.mark.parametrize("storage_lambda", [0.5, 0.75, 0.9])
def test_benchmark_availability_matches_bound(storage_lambda):
    config = desk_config(policy='benchmark_value',
                         storage_lambda=storage_lambda, duration=5200.0)

    summary = run_simulation(config).summary()

    assert summary['issued'].sum() >= 100000
    assert (summary['upper_bound'] < 1).all()
    for _, row in summary.iterrows():
        assert row['availability'] == pytest.approx(row['upper_bound'],
                                                    abs=0.03)


def test_saturated_access_ignores_tad():
    shares = []
    for ratio in (1 / 32, 1 / 8, 1 / 2):
        config = desk_config(**BENCHMARK, tad_ratio=ratio, duration=1200.0)
        assert t_cond(config.upper_bound_params) < 0
        assert p_access(config.upper_bound_params) == 1.0
        shares.append(ferry_share(config))

    assert shares[0] > 0
    assert shares == [shares[0]] * 3


def test_sparse_fleet_access_grows_until_t_cond():
    base = desk_config(**BENCHMARK, n_ferry=2, duration=2400.0)
    assert t_cond(base.upper_bound_params) == pytest.approx(40.0)

    shares = {}
    for tad in (10.0, 20.0, 30.0, 42.0, 60.0):
        config = desk_config(**BENCHMARK, n_ferry=2, duration=2400.0,
                             tad_ratio=tad / base.trajectory_period)
        saturated = p_access(config.upper_bound_params) == 1.0
        assert saturated == (tad >= 40.0)
        shares[tad] = ferry_share(config)

    assert shares[10.0] < shares[20.0] < shares[30.0] < shares[42.0]
    assert shares[42.0] == shares[60.0]


def test_relative_availability(policy_runs):
    def relative(frame):
        return converged_mean(frame, 'relative_availability')

    assert seed_mean(policy_runs, 'fedmab_selective', relative) >= 0.85
    assert seed_mean(policy_runs, 'fedmab', relative) >= 0.80


def test_policy_ordering(policy_runs):
    order = ['random', 'topk_mab', 'topk_mab_selective', 'fedmab_selective',
             'benchmark_value']

    means = [seed_mean(policy_runs, policy, converged_mean)
             for policy in order]

    for lower, upper in zip(means, means[1:]):
        assert upper - lower >= -0.01


def test_cdo_converges(policy_runs):
    def first_epoch(frame):
        return frame.loc[frame['epoch'] == 1, 'cdo'].mean()

    def converged(frame):
        return converged_mean(frame, 'cdo')

    start = seed_mean(policy_runs, 'fedmab_selective', first_epoch)
    end = seed_mean(policy_runs, 'fedmab_selective', converged)

    assert end >= 0.85
    assert end - start >= 0.2


def test_latency_threshold_ordering(latency_runs):
    converged = {name: seed_mean(latency_runs, name, converged_mean)
                 for name in ('tl0', 'tl2', 'tl10')}
    early = {name: seed_mean(latency_runs, name, early_mean)
             for name in ('tl0', 'tl10')}

    assert converged['tl10'] - converged['tl2'] >= -0.01
    assert converged['tl2'] - converged['tl0'] >= -0.01
    assert early['tl0'] >= early['tl10'] - 0.02


def test_reactivity_to_preference_shift(shift_table):
    assert not shift_table[['psi', 'chi', 'zeta_cross']].isna().any().any()
    means = shift_table.groupby('variant')[['psi', 'chi']].mean()

    assert means.loc['fedmab_selective', 'psi'] \
        <= means.loc[REACTIVITY_BASELINE, 'psi']
    assert means.loc['fedmab_selective', 'chi'] \
        >= means.loc[REACTIVITY_BASELINE, 'chi'] - 0.02


def test_crossover_ratio_bounds(shift_table):
    assert shift_table['zeta_cross'].between(0, 1).all()

    never = shift_table['tau_c'] >= shift_table['tau']
    assert never.any()
    assert (shift_table.loc[never, 'zeta_cross'] == 0).all()
