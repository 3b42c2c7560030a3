"""Experiment configuration loaded from YAML or JSON.

Example::

    seed: 7
    trials: 8
    network_sizes: [20, 30, 40, 50, 60]
    delta_mu: 0.1
    traffic_levels: [100, 200, 300, 400, 500, 600]
    baseline_enabled: true
    output_dir: results
    instance:
      file: null          # JSON instance file; generator settings below are ignored when set
      dims: [5, 5, 5]
      cell_edge: 100.0
      range_r: 100.0
      n_candidates: 110
    energy:
      k_traffic: 1.0      # any EnergyParams field
    colony:
      colony_size_per_node: 20
      generations: 200
      lambda2_min: 0.4
      lambda2_max: 0.6
    baseline:
      max_attempts: 5000
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import yaml

from ..colony import DECODERS, ColonyConfig
from ..energy import EnergyParams
from ..errors import ConfigError, DomainError


def _build(cls, doc, where):
    if doc is None:
        return cls()
    if not isinstance(doc, dict):
        raise ConfigError(f"{where} must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")
    try:
        return cls(**doc)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


@dataclass(frozen=True)
class InstanceSettings:
    file: str | None = None
    dims: tuple[int, int, int] = (5, 5, 5)
    cell_edge: float = 100.0
    range_r: float = 100.0
    n_candidates: int = 110

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or min(dims) < 1:
            raise ConfigError(f"instance.dims must be three positive integers, got {self.dims}")
        object.__setattr__(self, "dims", dims)
        if self.cell_edge <= 0 or self.range_r <= 0:
            raise ConfigError("instance.cell_edge and instance.range_r must be positive")
        if self.n_candidates < 0:
            raise ConfigError("instance.n_candidates must be >= 0")


@dataclass(frozen=True)
class ColonySettings:
    colony_size_per_node: int = 20  # population = this * N
    generations: int = 200
    lambda2_min: float = 0.4
    lambda2_max: float = 0.6
    abandonment_limit: int | None = None
    u_range: tuple[float, float] = (-1.0, 1.0)
    decoder: str = "grow"
    exact_count: bool = True

    def __post_init__(self):
        if self.colony_size_per_node < 1:
            raise ConfigError("colony.colony_size_per_node must be >= 1")
        if self.generations < 0:
            raise ConfigError("colony.generations must be >= 0")
        if not 0 < self.lambda2_min < self.lambda2_max:
            raise ConfigError("colony needs 0 < lambda2_min < lambda2_max")
        if self.decoder not in DECODERS:
            raise ConfigError(f"colony.decoder must be one of {DECODERS}")
        object.__setattr__(self, "u_range", tuple(float(u) for u in self.u_range))

    def colony_size(self, n: int) -> int:
        size = self.colony_size_per_node * n
        return max(4, size + size % 2)

    def for_network(self, n: int, budget: int, seed: int) -> ColonyConfig:
        return ColonyConfig(
            colony_size=self.colony_size(n),
            generations=self.generations,
            budget=budget,
            lambda2_min=self.lambda2_min,
            lambda2_max=self.lambda2_max,
            seed=seed,
            abandonment_limit=self.abandonment_limit,
            u_range=self.u_range,
            decoder=self.decoder,
            exact_count=self.exact_count,
        )


@dataclass(frozen=True)
class BaselineSettings:
    max_attempts: int = 5000
    batch: int = 250

    def __post_init__(self):
        if self.max_attempts < 1 or self.batch < 1:
            raise ConfigError("baseline.max_attempts and baseline.batch must be >= 1")


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    trials: int = 8
    network_sizes: tuple[int, ...] = (20, 30, 40, 50, 60)
    delta_mu: float = 0.1
    traffic_levels: tuple[float, ...] = (100.0, 200.0, 300.0, 400.0, 500.0, 600.0)
    baseline_enabled: bool = False
    output_dir: str = "results"
    distance_scale: float | None = None  # meters per hop; defaults to the cell edge
    instance: InstanceSettings = field(default_factory=InstanceSettings)
    energy: EnergyParams = field(default_factory=EnergyParams)
    colony: ColonySettings = field(default_factory=ColonySettings)
    baseline: BaselineSettings = field(default_factory=BaselineSettings)

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        sizes = tuple(int(n) for n in self.network_sizes)
        if not sizes:
            raise ConfigError("network_sizes must be non-empty")
        if min(sizes) < 2:
            raise ConfigError("network sizes must be >= 2")
        object.__setattr__(self, "network_sizes", sizes)
        object.__setattr__(self, "traffic_levels", tuple(float(t) for t in self.traffic_levels))
        if any(t < 0 for t in self.traffic_levels):
            raise ConfigError("traffic levels must be >= 0")
        if self.delta_mu < 0:
            raise ConfigError("delta_mu must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        if self.distance_scale is not None and self.distance_scale <= 0:
            raise ConfigError("distance_scale must be positive")

    @property
    def hop_meters(self) -> float:
        return self.instance.cell_edge if self.distance_scale is None else float(self.distance_scale)

    def with_overrides(self, seed=None, trials=None, baseline=None, output_dir=None) -> "ExperimentConfig":
        changes = {}
        if seed is not None:
            changes["seed"] = int(seed)
        if trials is not None:
            changes["trials"] = int(trials)
        if baseline:
            changes["baseline_enabled"] = True
        if output_dir is not None:
            changes["output_dir"] = str(output_dir)
        return replace(self, **changes)

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["energy"] = self.energy.to_dict()
        return doc

    @classmethod
    def from_dict(cls, doc: dict | None) -> "ExperimentConfig":
        doc = dict(doc or {})
        nested = {
            "instance": InstanceSettings,
            "colony": ColonySettings,
            "baseline": BaselineSettings,
        }
        kwargs = {}
        for key, sub in nested.items():
            if key in doc:
                kwargs[key] = _build(sub, doc.pop(key), key)
        if "energy" in doc:
            try:
                kwargs["energy"] = EnergyParams.from_dict(doc.pop("energy"))
            except (DomainError, TypeError, ValueError) as exc:
                raise ConfigError(f"energy: {exc}") from exc
        unknown = set(doc) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigError(f"unknown keys in config: {sorted(unknown)}")
        try:
            return cls(**doc, **kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config: {exc}") from exc


def load_config(path: str | Path) -> ExperimentConfig:
    """Read a YAML (or JSON) experiment file; a relative ``instance.file`` resolves against it."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if doc is not None and not isinstance(doc, dict):
        raise ConfigError(f"config {path} must contain a mapping")
    cfg = ExperimentConfig.from_dict(doc)
    f = cfg.instance.file
    if f is not None and not Path(f).is_absolute():
        cfg = replace(cfg, instance=replace(cfg.instance, file=str(path.parent / f)))
    return cfg
