import os
from unittest.mock import patch
import pandas as pd
import pytest
from uav_caching.errors import (
    ConfigurationError,
    InvariantViolation,
    ReplicationError,
)
from uav_caching.simulation.config import POLICIES, SimConfig
from uav_caching.simulation.experiments import (
    ExperimentSpec,
    aggregate_seeds,
    reactivity_bin_width,
    run_experiment,
    scenario_variants,
)
from uav_caching.simulation.metrics import EpochRecord

SMALL = {
    'catalog_size': 60,
    'n_anchor': 2,
    'n_ferry': 2,
    'anchor_capacity': 6,
    'ferry_capacity': 3,
    'trajectory_period': 60.0,
    'duration': 600.0,
    'policy': 'topk_mab',
}


def spec_for(tmp_path, scenario='custom', seeds=(1,), **overrides):
    return ExperimentSpec(scenario=scenario, overrides={**SMALL, **overrides},
                          seeds=list(seeds), output_dir=str(tmp_path))


def test_bound_only(tmp_path, capsys):
    written = run_experiment(spec_for(tmp_path, 'bound_only'), progress=False)

    assert written == [os.path.join(str(tmp_path), 'bound.csv')]
    table = pd.read_csv(written[0])
    assert table['community'].tolist() == [0, 1]
    assert table['upper_bound'].between(0, 1).all()
    assert "Saved upper bound" in capsys.readouterr().out


def test_custom_scenario_two_seeds(tmp_path):
    written = run_experiment(spec_for(tmp_path, seeds=(1, 2)), max_workers=1,
                             progress=False)

    names = sorted(os.path.basename(p) for p in written)
    assert names == ['replications.csv', 'series_topk_mab_seed1.csv',
                     'series_topk_mab_seed2.csv', 'summary.csv']

    first = pd.read_csv(tmp_path / 'series_topk_mab_seed1.csv')
    second = pd.read_csv(tmp_path / 'series_topk_mab_seed2.csv')
    assert first.columns.tolist() == EpochRecord.columns()
    assert second.columns.tolist() == EpochRecord.columns()
    assert not first.equals(second)

    summary = pd.read_csv(tmp_path / 'summary.csv')
    assert summary['variant'].tolist() == ['topk_mab']
    assert summary['seeds'].tolist() == [2]


def read_all(directory):
    return {name: (directory / name).read_bytes()
            for name in sorted(os.listdir(directory))}


def test_threads_match_inline_run(tmp_path):
    inline_dir = tmp_path / 'inline'
    threaded_dir = tmp_path / 'threaded'

    run_experiment(spec_for(inline_dir, seeds=(1, 2, 3)), max_workers=1,
                   progress=False)
    run_experiment(spec_for(threaded_dir, seeds=(1, 2, 3)), max_workers=3,
                   progress=False)

    assert read_all(inline_dir) == read_all(threaded_dir)


def test_rerun_overwrites_identically(tmp_path):
    spec = spec_for(tmp_path, policy='fedmab_selective')

    run_experiment(spec, max_workers=1, progress=False)
    before = read_all(tmp_path)
    run_experiment(spec, max_workers=1, progress=False)

    assert read_all(tmp_path) == before


def test_preference_shift_writes_reactivity(tmp_path):
    written = run_experiment(spec_for(tmp_path, 'preference_shift'),
                             max_workers=2, progress=False)

    assert os.path.join(str(tmp_path), 'reactivity.csv') in written
    table = pd.read_csv(tmp_path / 'reactivity.csv')
    assert len(table) == 4
    assert (table['tau'] == 300.0).all()
    zeta = table['zeta_cross'].dropna()
    assert zeta.between(0, 1).all()
    baseline = table[table['variant'] == 'topk_mab']
    assert baseline['zeta_cross'].fillna(0).tolist() == [0.0]


def test_scenario_variants():
    base = SimConfig()

    latency = scenario_variants('latency_sweep', base)
    assert [name for name, _ in latency] == ['tl0', 'tl2', 'tl10']
    assert latency[2][1]['latency_threshold'] == 10

    evolution = scenario_variants('policy_evolution', base)
    assert [name for name, _ in evolution] == list(POLICIES)

    shift = scenario_variants('preference_shift', base)
    assert all(changes['shift_time'] == 3600.0 for _, changes in shift)
    assert 'random' not in dict(shift)

    assert scenario_variants('custom', base) == [('fedmab_selective', {})]


@pytest.mark.parametrize("workers", [1, 2])
def test_replication_failure_names_seed(tmp_path, workers):
    spec = spec_for(tmp_path, seeds=(4, 5))

    with patch('uav_caching.simulation.experiments.run_simulation',
               side_effect=InvariantViolation('conservation')):
        with pytest.raises(ReplicationError) as excinfo:
            run_experiment(spec, max_workers=workers, progress=False)

    assert excinfo.value.variant == 'topk_mab'
    assert excinfo.value.seed in (4, 5)
    assert 'conservation' in str(excinfo.value)


def test_invalid_specs(tmp_path):
    with pytest.raises(ConfigurationError):
        run_experiment(spec_for(tmp_path, 'everything'), progress=False)
    with pytest.raises(ConfigurationError):
        run_experiment(spec_for(tmp_path, seeds=()), progress=False)
    with pytest.raises(ConfigurationError, match='n_ancor'):
        run_experiment(spec_for(tmp_path, n_ancor=3), progress=False)


def test_aggregate_seeds():
    replications = pd.DataFrame({
        'variant': ['a', 'a', 'b'],
        'seed': [1, 2, 1],
        'availability': [0.4, 0.6, 0.9],
        'relative_availability': [0.5, 0.7, 1.0],
        'early_availability': [0.1, 0.3, 0.5],
        'cdo': [0.8, 0.9, 1.0],
        'early_cdo': [0.2, 0.4, 0.6],
        'mean_access_delay': [1.0, 3.0, 0.0],
        'downloads': [10, 20, 0],
        'availability_spread': [0.05, 0.07, 0.0],
    })

    summary = aggregate_seeds(replications)

    assert summary['variant'].tolist() == ['a', 'b']
    assert summary['seeds'].tolist() == [2, 1]
    assert summary['availability_mean'].tolist() == pytest.approx([0.5, 0.9])
    assert summary['downloads_mean'].tolist() == pytest.approx([15, 0])


def test_reactivity_bin_width():
    assert reactivity_bin_width(SimConfig()) == pytest.approx(15.0)
    assert reactivity_bin_width(SimConfig(reactivity_bin_epochs=20)) \
        == pytest.approx(300.0)
    assert reactivity_bin_width(SimConfig(n_ferry=2)) == pytest.approx(60.0)
