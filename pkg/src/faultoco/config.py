"""Experiment configuration: YAML file -> validated `ExperimentConfig`.

Errors carry the dotted path of the offending field, e.g. ``prior`` or
``environment.take``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import yaml

from .environments import DISCLOSURE_MODES, LinearAdversary, NoiseModel
from .estimators import VARIANTS, canonical_variant
from .priors import WEIGHT_TOL, BetaComponent, MassComponent, MixturePrior

EXPERIMENTS = ("synthetic", "regression", "classification")
ARRIVALS = ("randomized", "semi_adversarial", "alternate")


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class SyntheticEnv:
    dim: int = 16
    scale: float = 0.25
    radius: float = 1.0
    sign_mode: str = "independent"


@dataclass(frozen=True)
class DatasetSpec:
    csv: str
    target: int
    features: tuple[int, ...] | None = None
    take: int | None = None
    copies: int = 1
    target_shift: float = 0.0
    arrival: str = "randomized"
    partition_threshold: float | None = None
    partition_first: str = "below"
    radius: float | str = "auto"
    loss: str = "absolute"


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    prior: MixturePrior
    environment: Any
    variants: tuple[str, ...] = VARIANTS
    rounds: int | None = None
    trials: int = 2
    seed: int = 0
    disclosure: str = "known"
    exclude_current: bool = False
    noise: NoiseModel | None = None
    out_dir: str = "out"
    trace_stride: int = 1
    check_substitute_bound: bool = False
    jobs: int = 1
    source: str | None = field(default=None, compare=False)

    def with_overrides(self, **kw) -> ExperimentConfig:
        kw = {k: v for k, v in kw.items() if v is not None}
        cfg = replace(self, **kw)
        _check_counts(cfg)
        return cfg


def _get(d: dict, key: str, path: str, kind, default=..., required=False):
    if key not in d or d[key] is None:
        if required or default is ...:
            raise ConfigError(f"{path}.{key}" if path else key, "missing required field")
        return default
    v = d[key]
    where = f"{path}.{key}" if path else key
    if kind is int:
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(where, f"expected an integer, got {v!r}")
    elif kind is float:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ConfigError(where, f"expected a finite number, got {v!r}")
        v = float(v)
    elif kind is bool:
        if not isinstance(v, bool):
            raise ConfigError(where, f"expected true/false, got {v!r}")
    elif kind is str:
        if not isinstance(v, str):
            raise ConfigError(where, f"expected a string, got {v!r}")
    return v


def parse_prior(block, path: str = "prior") -> MixturePrior:
    """Parse a list of ``{kind: beta|mass, ..., weight}`` components."""
    if not isinstance(block, list) or not block:
        raise ConfigError(path, "expected a non-empty list of components")
    betas, masses = [], []
    for i, comp in enumerate(block):
        where = f"{path}[{i}]"
        if not isinstance(comp, dict):
            raise ConfigError(where, "expected a mapping")
        kind = _get(comp, "kind", where, str, required=True)
        weight = _get(comp, "weight", where, float, required=True)
        try:
            if kind == "beta":
                betas.append(BetaComponent(
                    _get(comp, "alpha", where, float, required=True),
                    _get(comp, "beta", where, float, required=True),
                    weight,
                ))
            elif kind == "mass":
                masses.append(MassComponent(_get(comp, "p", where, float, required=True), weight))
            else:
                raise ConfigError(f"{where}.kind", f"expected 'beta' or 'mass', got {kind!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(where, str(exc)) from None
    total = sum(c.weight for c in betas + masses)
    if abs(total - 1.0) > WEIGHT_TOL:
        raise ConfigError(path, f"component weights sum to {total:g}, expected 1")
    # Keep the configured component order: betas and masses are indexed separately.
    if betas and masses:
        order = [c["kind"] for c in block]
        if order != sorted(order):
            raise ConfigError(path, "list beta components before mass components (component indices follow this order)")
    return MixturePrior(tuple(betas), tuple(masses))


def _check_counts(cfg: ExperimentConfig) -> None:
    if cfg.rounds is not None and cfg.rounds < 1:
        raise ConfigError("rounds", f"must be >= 1, got {cfg.rounds}")
    if cfg.trials < 1:
        raise ConfigError("trials", f"must be >= 1, got {cfg.trials}")
    if cfg.jobs < 1:
        raise ConfigError("jobs", f"must be >= 1, got {cfg.jobs}")
    needs = {"WithKnown": ("known",), "WithPrior": ("known", "prior_only")}
    for v in cfg.variants:
        if v in needs and cfg.disclosure not in needs[v]:
            raise ConfigError("variants", f"{v} cannot run with disclosure {cfg.disclosure!r}")


def _parse_synthetic(env: dict) -> SyntheticEnv:
    p = "environment"
    out = SyntheticEnv(
        dim=_get(env, "dim", p, int, 16),
        scale=_get(env, "scale", p, float, 0.25),
        radius=_get(env, "radius", p, float, 1.0),
        sign_mode=_get(env, "sign_mode", p, str, "independent"),
    )
    if out.dim < 1:
        raise ConfigError(f"{p}.dim", "must be >= 1")
    if out.scale <= 0:
        raise ConfigError(f"{p}.scale", "must be positive")
    if out.radius <= 0:
        raise ConfigError(f"{p}.radius", "must be positive")
    if out.sign_mode not in LinearAdversary.SIGN_MODES:
        raise ConfigError(f"{p}.sign_mode", f"expected one of {LinearAdversary.SIGN_MODES}")
    return out


def _parse_dataset(env: dict, kind: str, base: Path | None) -> DatasetSpec:
    p = "environment"
    csv_path = _get(env, "csv", p, str, required=True)
    if base is not None and not Path(csv_path).is_absolute():
        csv_path = str((base / csv_path).resolve())
    feats = env.get("features")
    if feats is not None:
        if not isinstance(feats, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in feats):
            raise ConfigError(f"{p}.features", "expected a list of column indices")
        feats = tuple(feats)
    part = env.get("partition") or {}
    if not isinstance(part, dict):
        raise ConfigError(f"{p}.partition", "expected a mapping")
    radius = env.get("radius", "auto" if kind == "regression" else 1.0)
    if radius != "auto":
        if isinstance(radius, bool) or not isinstance(radius, (int, float)) or not radius > 0:
            raise ConfigError(f"{p}.radius", f"expected a positive number or 'auto', got {radius!r}")
        radius = float(radius)
    spec = DatasetSpec(
        csv=csv_path,
        target=_get(env, "target", p, int, required=True),
        features=feats,
        take=_get(env, "take", p, int, None),
        copies=_get(env, "copies", p, int, 1),
        target_shift=_get(env, "target_shift", p, float, 0.0),
        arrival=_get(env, "arrival", p, str, "randomized"),
        partition_threshold=_get(part, "threshold", f"{p}.partition", float, None),
        partition_first=_get(part, "first", f"{p}.partition", str, "below"),
        radius=radius,
        loss=_get(env, "loss", p, str, "absolute" if kind == "regression" else "logistic"),
    )
    if spec.take is not None and spec.take < 1:
        raise ConfigError(f"{p}.take", f"must be >= 1, got {spec.take}: empty sample stream")
    if spec.copies < 1:
        raise ConfigError(f"{p}.copies", "must be >= 1")
    if spec.arrival not in ARRIVALS:
        raise ConfigError(f"{p}.arrival", f"expected one of {ARRIVALS}, got {spec.arrival!r}")
    if spec.arrival != "randomized" and spec.partition_threshold is None:
        raise ConfigError(f"{p}.partition.threshold", "required for semi-adversarial arrival")
    if spec.partition_first not in ("below", "above"):
        raise ConfigError(f"{p}.partition.first", "expected 'below' or 'above'")
    if spec.loss not in ("absolute", "logistic"):
        raise ConfigError(f"{p}.loss", f"expected 'absolute' or 'logistic', got {spec.loss!r}")
    return spec


def parse_config(data: dict, base: Path | None = None, source: str | None = None) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("<root>", "expected a mapping at the top level")
    experiment = _get(data, "experiment", "", str, required=True)
    if experiment not in EXPERIMENTS:
        raise ConfigError("experiment", f"expected one of {EXPERIMENTS}, got {experiment!r}")
    prior = parse_prior(data.get("prior"))
    env = data.get("environment") or {}
    if not isinstance(env, dict):
        raise ConfigError("environment", "expected a mapping")
    environment = _parse_synthetic(env) if experiment == "synthetic" else _parse_dataset(env, experiment, base)

    raw_variants = data.get("variants", list(VARIANTS))
    if isinstance(raw_variants, str):
        raw_variants = [v for v in raw_variants.split(",") if v.strip()]
    if not isinstance(raw_variants, list) or not raw_variants:
        raise ConfigError("variants", "expected a non-empty list")
    try:
        variants = tuple(dict.fromkeys(canonical_variant(v) for v in raw_variants))
    except ValueError as exc:
        raise ConfigError("variants", str(exc)) from None

    disclosure = _get(data, "disclosure", "", str, "known")
    if disclosure not in DISCLOSURE_MODES:
        raise ConfigError("disclosure", f"expected one of {DISCLOSURE_MODES}, got {disclosure!r}")

    emp = data.get("empirical") or {}
    noise = None
    if data.get("noise"):
        nb = data["noise"]
        if not isinstance(nb, dict):
            raise ConfigError("noise", "expected a mapping")
        try:
            noise = NoiseModel(_get(nb, "sigma", "noise", float, required=True), _get(nb, "kind", "noise", str, "gaussian"))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError("noise", str(exc)) from None
    out = data.get("output") or {}
    checks = data.get("checks") or {}

    cfg = ExperimentConfig(
        experiment=experiment,
        prior=prior,
        environment=environment,
        variants=variants,
        rounds=_get(data, "rounds", "", int, None),
        trials=_get(data, "trials", "", int, 2),
        seed=_get(data, "seed", "", int, 0),
        disclosure=disclosure,
        exclude_current=_get(emp, "exclude_current", "empirical", bool, False),
        noise=noise,
        out_dir=_get(out, "dir", "output", str, "out"),
        trace_stride=_get(out, "trace_stride", "output", int, 1),
        check_substitute_bound=_get(checks, "substitute_bound", "checks", bool, False),
        jobs=_get(data, "jobs", "", int, 1),
        source=source,
    )
    if experiment == "synthetic" and cfg.rounds is None:
        raise ConfigError("rounds", "missing required field")
    if cfg.trace_stride < 1:
        raise ConfigError("output.trace_stride", "must be >= 1")
    _check_counts(cfg)
    return cfg


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(str(path), f"invalid YAML: {exc}") from None
    return parse_config(data, base=path.parent, source=str(path))
