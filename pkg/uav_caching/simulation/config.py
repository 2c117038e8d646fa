"""
Simulation configuration: the SimConfig dataclass with its default model
parameters, presets and the flat `key = value` file loader.
"""
from dataclasses import dataclass, fields, replace
import os
from typing import (
    Any,
    Dict,
    Iterable,
    Mapping,
    Optional,
    Union,
    get_args,
    get_type_hints,
)
from dotenv import dotenv_values
from dotenv.parser import parse_stream

from uav_caching.errors import ConfigurationError
from uav_caching.caching.benchmark import (
    UpperBoundParams,
    system_content_count,
)
from uav_caching.demand.popularity import TadRule
from uav_caching.learning.federation import FederationConfig

POLICIES = (
    'random',
    'benchmark_value',
    'topk_mab',
    'topk_mab_selective',
    'fedmab',
    'fedmab_selective',
)
LEARNING_POLICIES = POLICIES[2:]

PRESETS: Dict[str, Dict[str, Any]] = {
    'desk': {
        'catalog_size': 500,
        'anchor_capacity': 50,
        'ferry_capacity': 10,
        'zipf_alpha': 0.8,
        'request_rate': 5.0,
        'storage_lambda': 0.9,
        'swap_probability': 0.0,
        'learn_rate': 0.01,
        'warm_start': True,
        'zeta_ucb': 0.03,
        'beta_decay': 0.0,
        'beta_scale': 100.0,
        'duration': 6000.0,
        'shift_rank_offset': 50,
        'reactivity_bin_epochs': 20,
    },
}


@dataclass
class SimConfig:
    """Model parameters of one simulation run."""
    catalog_size: int = 2000
    n_anchor: int = 4
    n_ferry: int = 8
    ferry_group_size: int = 1
    anchor_capacity: int = 200
    ferry_capacity: int = 25
    request_rate: float = 1.0
    hover_ratio: float = 1 / 6
    transit_ratio: float = 1 / 12
    trajectory_period: float = 120.0
    zipf_alpha: float = 0.4
    policy: str = 'fedmab_selective'

    storage_lambda: float = 0.5
    value_kappa: float = 1.0
    segment2_shuffle: bool = False

    learn_rate: float = 0.1
    # exploration degree of the UCB bonus
    zeta_ucb: float = 2.0
    epsilon: float = 0.3
    epsilon_decay: float = 0.99
    epsilon_floor: float = 0.01
    warm_start: bool = False

    beta_decay: float = 0.01
    beta_scale: float = 10.0
    latency_threshold: int = 2
    omega1_mode: str = 'fixed'
    rho_mode: str = 'max_pairwise'

    tad_ratio: float = 1 / 8
    tad_overrides: str = ''
    swap_probability: float = 0.3
    min_distance: float = 0.0
    comm_overlap: float = 0.0

    duration: float = 7200.0
    max_epochs: int = 0
    shift_time: float = 0.0
    shift_alpha: Optional[float] = None
    shift_seed_offset: int = 1000
    # shifted rankings hand every rank to the content this many ids on
    shift_rank_offset: int = 0
    reactivity_bin_epochs: int = 1
    seed: int = 1

    @property
    def federation(self) -> FederationConfig:
        return FederationConfig(self.beta_decay, self.beta_scale,
                                self.latency_threshold, self.omega1_mode,
                                self.rho_mode)

    @property
    def tad_rule(self) -> TadRule:
        return TadRule.parse(self.tad_ratio, self.tad_overrides)

    @property
    def n_groups(self) -> int:
        return self.n_ferry // self.ferry_group_size

    @property
    def mean_tad(self) -> float:
        return float(self.tad_rule.ratios(self.catalog_size).mean()
                     * self.trajectory_period)

    @property
    def upper_bound_params(self) -> UpperBoundParams:
        return UpperBoundParams(
            n_anchor=self.n_anchor,
            n_ferry=self.n_ferry,
            ferry_group_size=self.ferry_group_size,
            hover_ratio=self.hover_ratio,
            transit_ratio=self.transit_ratio,
            cycle_time=self.trajectory_period,
            mean_tad=self.mean_tad,
            ferry_capacity=self.ferry_capacity,
        )

    def agent_params(self) -> Dict[str, Any]:
        return {
            'learn_rate': self.learn_rate,
            'zeta_ucb': self.zeta_ucb,
            'epsilon': self.epsilon,
            'epsilon_decay': self.epsilon_decay,
            'epsilon_floor': self.epsilon_floor,
            'warm_start': self.warm_start,
        }

    def validate(self) -> "SimConfig":
        """Raise ConfigurationError on the first invalid parameter."""
        for name in ('catalog_size', 'n_anchor', 'n_ferry', 'ferry_group_size',
                     'anchor_capacity', 'ferry_capacity'):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be positive")

        for name in ('request_rate', 'hover_ratio', 'transit_ratio',
                     'trajectory_period'):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive")

        if self.policy not in POLICIES:
            raise ConfigurationError(
                f"unknown policy '{self.policy}', expected one of "
                + ", ".join(POLICIES))
        if self.n_ferry % self.ferry_group_size:
            raise ConfigurationError(
                "n_ferry must be a multiple of ferry_group_size")
        if self.anchor_capacity > self.catalog_size:
            raise ConfigurationError(
                "anchor_capacity must not exceed catalog_size")
        if self.n_anchor * (self.hover_ratio + self.transit_ratio) > 1 + 1e-9:
            raise ConfigurationError(
                "a full ferry cycle must fit in the trajectory period: "
                "n_anchor * (hover_ratio + transit_ratio) > 1")
        if system_content_count(self.storage_lambda, self.anchor_capacity,
                                self.n_anchor) > self.catalog_size:
            raise ConfigurationError(
                "infeasible capacity: anchors would hold more distinct "
                f"contents than catalog_size={self.catalog_size}")

        if not 0 <= self.epsilon <= 1 or not 0 <= self.epsilon_floor <= 1:
            raise ConfigurationError("epsilon values must be in [0, 1]")
        if not 0 < self.learn_rate <= 1:
            raise ConfigurationError("learn_rate must be in (0, 1]")
        if self.zeta_ucb < 0:
            raise ConfigurationError("zeta_ucb must be nonnegative")
        if not 0 <= self.swap_probability <= 1:
            raise ConfigurationError("swap_probability must be in [0, 1]")
        if self.comm_overlap < 0:
            raise ConfigurationError("comm_overlap must be nonnegative")
        if self.comm_overlap > self.transit_ratio * self.trajectory_period:
            raise ConfigurationError(
                "comm_overlap must not exceed the transit time")
        if self.duration < 0 or self.max_epochs < 0 or self.shift_time < 0:
            raise ConfigurationError(
                "duration, max_epochs and shift_time must be nonnegative")
        if self.shift_alpha is not None and self.shift_alpha < 0:
            raise ConfigurationError("shift_alpha must be nonnegative")
        if self.shift_rank_offset < 0:
            raise ConfigurationError("shift_rank_offset must be nonnegative")
        if self.reactivity_bin_epochs < 1:
            raise ConfigurationError("reactivity_bin_epochs must be positive")

        # both raise ConfigurationError themselves
        self.federation
        self.tad_rule
        return self


def _coerce(name: str, raw: Any, target: Any) -> Any:
    optional = type(None) in get_args(target)
    if optional:
        target = next(t for t in get_args(target) if t is not type(None))
        if raw is None or str(raw).strip().lower() in ('', 'none'):
            return None

    if isinstance(raw, target) and not (
            target is int and isinstance(raw, bool)):
        return raw

    text = str(raw).strip()
    try:
        if target is bool:
            lowered = text.lower()
            if lowered not in ('1', '0', 'true', 'false', 'yes', 'no'):
                raise ValueError(text)
            return lowered in ('1', 'true', 'yes')
        if target is int:
            return int(text)
        if target is float:
            return float(text)
        return text
    except ValueError as exc:
        raise ConfigurationError(
            f"invalid value '{raw}' for key '{name}'") from exc


def apply_overrides(config: SimConfig,
                    overrides: Mapping[str, Any]) -> SimConfig:
    """Return a copy of config with overrides coerced and applied."""
    hints = get_type_hints(SimConfig)
    known = {f.name for f in fields(SimConfig)}
    changes = {}
    for key, raw in overrides.items():
        key = key.strip()
        if key not in known:
            raise ConfigurationError(f"unknown configuration key '{key}'")
        changes[key] = _coerce(key, raw, hints[key])
    return replace(config, **changes)


def parse_overrides(items: Iterable[str]) -> Dict[str, str]:
    """Turn 'key=value' strings into a mapping."""
    overrides = {}
    for item in items:
        if '=' not in item:
            raise ConfigurationError(
                f"override '{item}' is not of the form key=value")
        key, value = item.split('=', 1)
        overrides[key.strip()] = value.strip()
    return overrides


def read_config_file(
        path: Union[str, os.PathLike]) -> Dict[str, Optional[str]]:
    """
    Read a flat `key = value` file, `#` starting a comment.

    Args:
        path (str): The file to read.

    Returns:
        dict: Raw values keyed by name.
    """
    if not os.path.exists(path):
        raise ConfigurationError(f"configuration file {path} does not exist")

    with open(path, encoding='utf-8') as f:
        for binding in parse_stream(f):
            number = binding.original.line
            text = binding.original.string.strip()
            if binding.error or (binding.key is not None
                                 and binding.value is None):
                raise ConfigurationError(
                    f"{path}:{number}: expected 'key = value', "
                    f"got '{text}'")

    return dict(dotenv_values(path, interpolate=False))


def load_config(
        path: Optional[Union[str, os.PathLike]] = None,
        overrides: Union[Iterable[str], Mapping[str, Any]] = (),
        preset: Optional[str] = None
) -> SimConfig:
    """
    Build a validated SimConfig: defaults, then the preset, then the file,
    then the overrides.

    Args:
        path (str): Optional configuration file.
        overrides (list or dict): 'key=value' strings or a mapping.
        preset (str): Optional preset name, e.g. 'desk'.

    Returns:
        SimConfig: The validated configuration.
    """
    config = SimConfig()

    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError(
                f"unknown preset '{preset}', expected one of "
                + ", ".join(PRESETS))
        config = apply_overrides(config, PRESETS[preset])

    if path is not None:
        config = apply_overrides(config, read_config_file(path))

    if not isinstance(overrides, Mapping):
        overrides = parse_overrides(overrides)
    config = apply_overrides(config, overrides)

    return config.validate()


def adjusted_times(config: SimConfig):
    """
    Hover and transit durations in seconds once lateral links overlap by
    comm_overlap seconds. The overlap extends the hover only when it spans
    at least one mean inter-request time; the sum stays unchanged.

    Returns:
        tuple: (hover, transit) in seconds.
    """
    hover = config.hover_ratio * config.trajectory_period
    transit = config.transit_ratio * config.trajectory_period
    overlap = config.comm_overlap

    if overlap > transit:
        raise ConfigurationError(
            f"comm_overlap {overlap} exceeds the transit time {transit}")
    if overlap > 0 and overlap >= 1.0 / config.request_rate:
        return hover + overlap, transit - overlap
    return hover, transit


def cycle_length(config: SimConfig) -> float:
    """Seconds a ferry needs to visit every anchor once."""
    hover, transit = adjusted_times(config)
    return config.n_anchor * (hover + transit)
