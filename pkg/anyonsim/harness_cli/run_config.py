"""
Run configuration of the memory experiment and its file formats
"""
from __future__ import annotations

import itertools
import json
import logging
from dataclasses import asdict, dataclass, field, fields

from config import BaseConfig

from anyonsim.errors import ConfigError

logger = logging.getLogger(__name__)

BOOLEAN_WORDS = {'true': True, '1': True, 'yes': True, 'on': True,
                 'false': False, '0': False, 'no': False, 'off': False}


@dataclass
class RunConfig:
    """
    Parameters of one memory experiment

    `eps` is the per-element failure probability and `N` the number of elements in a unit
    cube; a cube fails with probability 1 - (1 - eps)**N. `flush_rounds` defaults to 4(L + 2)
    and the anyon separation `d` to L // 2, so that it grows with the lattice.
    """
    L: int = 8
    T: int = 8
    eps: float = 0.0
    N: int = 10
    Q: int = 6
    d: int | None = None
    shots: int = 100
    master_seed: int = field(default_factory=lambda: BaseConfig.MASTER_SEED)
    eta_emission: bool = True
    eta_probability: float = 0.5
    measurement_noise: bool = True
    boundaries: str = 'periodic'
    flush_rounds: int | None = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        checks = [
            (self.separation >= 4, f"d must be at least 4, got {self.separation}"),
            (self.shots >= 1, f"shots must be at least 1, got {self.shots}"),
            (self.L >= 2 * self.separation,
             f"L={self.L} cannot hold the four computational anyons at d={self.separation}"),
            (self.T >= 1, f"T must be at least 1, got {self.T}"),
            (0 <= self.eps <= 1, f"eps must lie in [0, 1], got {self.eps}"),
            (self.N >= 1, f"N must be at least 1, got {self.N}"),
            (self.Q >= 2, f"Q must be at least 2, got {self.Q}"),
            (0 <= self.eta_probability <= 1, f"eta_probability must lie in [0, 1], got {self.eta_probability}"),
            (self.boundaries == 'periodic', f"boundaries={self.boundaries!r} is not supported, use 'periodic'"),
            (self.flush_rounds is None or self.flush_rounds >= 1, "flush_rounds must be positive"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigError(msg)

    @property
    def separation(self) -> int:
        return self.d if self.d is not None else self.L // 2

    @property
    def flush_cap(self) -> int:
        return self.flush_rounds if self.flush_rounds is not None else 4 * (self.L + 2)

    def as_dict(self) -> dict:
        return asdict(self)

    def replace(self, **overrides) -> RunConfig:
        values = self.as_dict()
        values.update(coerce(overrides))
        return RunConfig(**values)


FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce_value(key: str, value):
    kind = FIELD_TYPES[key]
    if value is None or (isinstance(value, str) and value.lower() in ('', 'none', 'null')):
        if 'None' in kind:
            return None
        msg = f"{key} needs a value"
        raise ConfigError(msg)
    try:
        if kind.startswith('int'):
            return int(value)
        if kind == 'float':
            return float(value)
        if kind == 'bool':
            if isinstance(value, bool):
                return value
            return BOOLEAN_WORDS[str(value).strip().lower()]
        return str(value)
    except (KeyError, TypeError, ValueError):
        msg = f"cannot read {key}={value!r} as {kind}"
        raise ConfigError(msg) from None


def coerce(values: dict) -> dict:
    """Field values converted to the RunConfig types; unknown keys are an error."""
    coerced = {}
    for key, value in values.items():
        key = key.strip()
        if key not in FIELD_TYPES:
            msg = f"unknown config key {key!r}"
            raise ConfigError(msg)
        coerced[key] = _coerce_value(key, value)
    return coerced


def parse_config_text(text: str) -> dict:
    """Raw values from a JSON object or from flat key=value lines ('#' comments)."""
    stripped = text.strip()
    if stripped.startswith('{'):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as exc:
            msg = f"invalid JSON config: {exc}"
            raise ConfigError(msg) from None
    values = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        if not sep:
            msg = f"line {number}: expected key=value, got {line!r}"
            raise ConfigError(msg)
        values[key.strip()] = value.strip()
    return values


def _read(file_path: str) -> str:
    try:
        with open(file_path, encoding='utf-8') as handle:
            return handle.read()
    except OSError as exc:
        msg = f"cannot read {file_path}: {exc.strerror}"
        raise ConfigError(msg) from None


def load_config(file_path: str | None = None, **overrides) -> RunConfig:
    """File values first, then the non-None overrides (CLI flags)."""
    values = coerce(parse_config_text(_read(file_path))) if file_path else {}
    values.update(coerce({k: v for k, v in overrides.items() if v is not None}))
    return RunConfig(**values)


def expand_grid(text: str) -> list[RunConfig]:
    """
    Cartesian product of a grid file

    Every value may be a comma-separated list (or a JSON list); configs come out in file order,
    the last key varying fastest.
    """
    raw = parse_config_text(text)
    axes = []
    for key, value in raw.items():
        if isinstance(value, list):
            options = value
        elif isinstance(value, str):
            options = [v.strip() for v in value.split(',') if v.strip()] or ['']
        else:
            options = [value]
        axes.append([(key, v) for v in options])
    if not axes:
        return []
    configs = [RunConfig(**coerce(dict(combo))) for combo in itertools.product(*axes)]
    logger.info("grid expanded to %d configs", len(configs))
    return configs


def load_grid(file_path: str) -> list[RunConfig]:
    return expand_grid(_read(file_path))
