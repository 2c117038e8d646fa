import os
from uav_caching.simulate import main, parse_arguments

SMALL = ['--set', 'catalog_size=60', '--set', 'n_anchor=2',
         '--set', 'n_ferry=2', '--set', 'anchor_capacity=6',
         '--set', 'ferry_capacity=3', '--set', 'duration=300']


def test_parse_arguments_defaults():
    args = parse_arguments(['run'])

    assert args.command == 'run'
    assert args.scenario == 'custom'
    assert args.out == 'results'
    assert args.seed is None
    assert args.set == []
    assert not args.profile


def test_bound_prints_csv(capsys):
    assert main(['bound'] + SMALL) == 0

    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith('community,')
    assert len(lines) == 3


def test_run_writes_results(tmp_path):
    code = main(['run'] + SMALL + ['--seed', '3', '--out', str(tmp_path),
                                   '--workers', '1'])

    assert code == 0
    assert os.path.exists(tmp_path / 'series_fedmab_selective_seed3.csv')
    assert os.path.exists(tmp_path / 'summary.csv')


def test_unknown_key_fails(tmp_path, capsys):
    code = main(['run', '--set', 'n_ancor=2', '--out', str(tmp_path)])

    assert code == 1
    assert "n_ancor" in capsys.readouterr().err


def test_missing_config_fails(tmp_path, capsys):
    code = main(['bound', '--config', str(tmp_path / 'missing.conf')])

    assert code == 1
    assert "Error:" in capsys.readouterr().err
