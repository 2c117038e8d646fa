import numpy as np
import pytest
from uav_caching.errors import ConfigurationError
from uav_caching.learning.federation import FIXED_OMEGA1, omega2
from uav_caching.simulation.config import (
    SimConfig,
    adjusted_times,
    apply_overrides,
    cycle_length,
    load_config,
    parse_overrides,
    read_config_file,
)


def test_defaults():
    config = load_config()

    assert config.catalog_size == 2000
    assert config.n_anchor == 4
    assert config.n_ferry == 8
    assert config.anchor_capacity == 200
    assert config.ferry_capacity == 25
    assert config.request_rate == 1.0
    assert config.zipf_alpha == 0.4
    assert config.hover_ratio == pytest.approx(1 / 6)
    assert config.transit_ratio == pytest.approx(1 / 12)


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / 'empty.conf'
    path.write_text('')

    assert load_config(path) == SimConfig()


def test_file_values(tmp_path):
    path = tmp_path / 'run.conf'
    path.write_text(
        "# desk-sized run\n"
        "n_anchor = 2\n"
        "policy = topk_mab\n"
        "\n"
        "segment2_shuffle = true\n"
        "shift_alpha = 0.8\n")

    config = load_config(path)

    assert config.n_anchor == 2
    assert config.policy == 'topk_mab'
    assert config.segment2_shuffle is True
    assert config.shift_alpha == pytest.approx(0.8)
    assert config.n_ferry == 8


def test_override_n_anchor():
    config = load_config(overrides=['n_anchor=2'])

    assert config.n_anchor == 2
    assert config.catalog_size == 2000


def test_unknown_key_is_named():
    with pytest.raises(ConfigurationError, match="n_ancor"):
        load_config(overrides=['n_ancor=2'])


def test_unknown_key_in_file(tmp_path):
    path = tmp_path / 'typo.conf'
    path.write_text("n_ancor = 3\n")

    with pytest.raises(ConfigurationError, match="n_ancor"):
        load_config(path)


def test_parse_error_names_line(tmp_path):
    path = tmp_path / 'broken.conf'
    path.write_text("n_anchor = 2\n# fine\nthis line is broken\n")

    with pytest.raises(ConfigurationError, match=r"broken.conf:3:"):
        read_config_file(path)


def test_file_values_are_not_interpolated(tmp_path, monkeypatch):
    monkeypatch.setenv('TAD_RULES', '0-9:0.5')
    path = tmp_path / 'literal.conf'
    path.write_text("tad_overrides = ${TAD_RULES}\n")

    assert read_config_file(path) == {'tad_overrides': '${TAD_RULES}'}


def test_unparsable_value_names_line(tmp_path):
    path = tmp_path / 'quoted.conf'
    path.write_text("n_anchor = 2\npolicy = 'fedmab\n")

    with pytest.raises(ConfigurationError, match=r"quoted.conf:2:"):
        read_config_file(path)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError, match="does not exist"):
        load_config(tmp_path / 'missing.conf')


def test_precedence(tmp_path):
    path = tmp_path / 'run.conf'
    path.write_text("anchor_capacity = 40\nferry_capacity = 8\n")

    config = load_config(path, overrides=['ferry_capacity=5'],
                         preset='desk')

    assert config.catalog_size == 500
    assert config.anchor_capacity == 40
    assert config.ferry_capacity == 5


def test_desk_preset():
    config = load_config(preset='desk')

    assert (config.catalog_size, config.anchor_capacity,
            config.ferry_capacity) == (500, 50, 10)
    assert config.warm_start
    assert config.shift_rank_offset == config.anchor_capacity

    # local and aggregated weights add up to 1 for nonpositive Q-values
    w2 = omega2(300, np.array([-1.0, 0.0]), config.federation)
    assert (FIXED_OMEGA1 + w2).tolist() == pytest.approx([1.0, 1.0])


def test_unknown_preset():
    with pytest.raises(ConfigurationError, match="huge"):
        load_config(preset='huge')


@pytest.mark.parametrize("override", [
    'n_anchor=two',
    'segment2_shuffle=maybe',
    'learn_rate=fast',
])
def test_invalid_values(override):
    with pytest.raises(ConfigurationError):
        load_config(overrides=[override])


def test_parse_overrides():
    assert parse_overrides(['a=1', ' b = x=y ']) == {'a': '1', 'b': 'x=y'}

    with pytest.raises(ConfigurationError):
        parse_overrides(['novalue'])


def test_apply_overrides_with_mapping():
    config = apply_overrides(SimConfig(), {'seed': 7, 'shift_alpha': 'none'})

    assert config.seed == 7
    assert config.shift_alpha is None


@pytest.mark.parametrize("overrides", [
    {'policy': 'greedy'},
    {'n_ferry': 6, 'ferry_group_size': 4},
    {'anchor_capacity': 3000},
    {'hover_ratio': 0.2},                           # 4 * (0.2 + 1/12) > 1
    {'storage_lambda': 0.0, 'catalog_size': 700},   # anchors need 800
    {'epsilon': 1.5},
    {'learn_rate': 0.0},
    {'swap_probability': -0.1},
    {'comm_overlap': 20.0},                         # transit is 10 s
    {'duration': -1.0},
    {'shift_alpha': -0.5},
    {'beta_scale': 0.0},
    {'omega1_mode': 'sometimes'},
    {'tad_overrides': 'oops'},
    {'catalog_size': 0},
    {'request_rate': 0.0},
])
def test_infeasible_configs(overrides):
    with pytest.raises(ConfigurationError):
        load_config(overrides=overrides)


def test_derived_properties():
    config = load_config(overrides={'tad_ratio': 0.25,
                                    'trajectory_period': 60.0})

    assert config.mean_tad == pytest.approx(15.0)
    assert config.n_groups == 8
    assert config.federation.latency_threshold == 2
    assert config.upper_bound_params.cycle_time == 60.0
    assert config.agent_params()['learn_rate'] == 0.1


def test_adjusted_times_without_overlap():
    config = SimConfig(trajectory_period=60.0)

    assert adjusted_times(config) == pytest.approx((10.0, 5.0))


def test_adjusted_times_with_overlap():
    config = SimConfig(trajectory_period=60.0, comm_overlap=5.0)

    hover, transit = adjusted_times(config)

    assert (hover, transit) == pytest.approx((15.0, 0.0))
    assert hover + transit == pytest.approx(15.0)


def test_adjusted_times_short_overlap_is_ignored():
    config = SimConfig(trajectory_period=60.0, comm_overlap=0.5)

    assert adjusted_times(config) == pytest.approx((10.0, 5.0))


def test_adjusted_times_rejects_long_overlap():
    config = SimConfig(trajectory_period=60.0, comm_overlap=6.0)

    with pytest.raises(ConfigurationError):
        adjusted_times(config)


def test_cycle_length():
    assert cycle_length(SimConfig(trajectory_period=60.0)) \
        == pytest.approx(60.0)
