"""Engine configuration with layered precedence.

Sources, strongest first: explicit CLI flags, environment variables
(prefix ``FFS_``), a JSON config file, then the built-in defaults.  The
effective configuration is echoed into every build manifest so runs are
auditable.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path

from .clustering import DEFAULT_K_GRID

ENV_PREFIX = "FFS_"


class ConfigError(ValueError):
    """Unparseable configuration value."""


@dataclass(frozen=True)
class EngineConfig:
    # embeddings
    dim: int = 32
    normalize_words: bool = False
    # clustering (k = None means AUTO grid selection)
    purpose_k: int | None = None
    mechanism_k: int | None = None
    k_grid: tuple[int, ...] = DEFAULT_K_GRID
    cluster_seed: int = 0
    max_iters: int = 100
    tol: float = 1e-4
    silhouette_sample: int | None = 2000
    selection: str = "knee"
    title_count: int = 3
    # rule mining
    min_support: int = 3
    min_confidence: float = 0.5
    type_threshold: float = 0.6
    # search defaults
    method: str = "avg"
    neg_percentile: float = 90.0
    limit: int = 20
    combine: str = "mean"
    # inspiration sessions
    spans_per_box: int = 5
    top_r: int = 3
    boxes_per_condition: int = 2
    session_seed: int = 0

    def as_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["k_grid"] = list(self.k_grid)
        return out


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(EngineConfig)}

_INT_FIELDS = {
    "dim", "cluster_seed", "max_iters", "title_count", "min_support", "limit",
    "spans_per_box", "top_r", "boxes_per_condition", "session_seed",
}
_OPT_INT_FIELDS = {"purpose_k", "mechanism_k", "silhouette_sample"}
_FLOAT_FIELDS = {"tol", "min_confidence", "type_threshold", "neg_percentile"}
_BOOL_FIELDS = {"normalize_words"}
_STR_FIELDS = {"selection", "method", "combine"}
_LIST_FIELDS = {"k_grid"}


def _coerce(name: str, raw) -> object:
    if name in _BOOL_FIELDS:
        if isinstance(raw, bool):
            return raw
        return str(raw).strip().lower() in ("1", "true", "yes", "on")
    if name in _INT_FIELDS:
        return int(raw)
    if name in _OPT_INT_FIELDS:
        if raw is None or str(raw).strip().lower() in ("none", "auto", ""):
            return None
        return int(raw)
    if name in _FLOAT_FIELDS:
        return float(raw)
    if name in _STR_FIELDS:
        return str(raw)
    if name in _LIST_FIELDS:
        if isinstance(raw, (list, tuple)):
            return tuple(int(x) for x in raw)
        return tuple(int(x) for x in str(raw).replace(",", " ").split())
    raise ConfigError(f"unknown config field {name!r}")


def resolve_config(
    cli_values: dict | None = None,
    env: dict | None = None,
    config_path: str | Path | None = None,
) -> EngineConfig:
    """Merge configuration sources by precedence and return the result.

    ``cli_values`` entries that are None are treated as unset.
    """
    merged: dict = {}
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            file_values = json.load(fh)
        for name, value in file_values.items():
            if name not in _FIELD_TYPES:
                raise ConfigError(f"{config_path}: unknown config field {name!r}")
            merged[name] = _coerce(name, value)
    env = os.environ if env is None else env
    for name in _FIELD_TYPES:
        key = ENV_PREFIX + name.upper()
        if key in env:
            merged[name] = _coerce(name, env[key])
    for name, value in (cli_values or {}).items():
        if value is None:
            continue
        if name not in _FIELD_TYPES:
            raise ConfigError(f"unknown config field {name!r}")
        merged[name] = _coerce(name, value)
    return EngineConfig(**merged)
