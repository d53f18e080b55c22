"""
Local fault alphabet, error configurations and the i.i.d. unit-cube noise model
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from anyonsim.components.lattice import H, V

from .geometry import SpacetimePoint, r_components

logger = logging.getLogger(__name__)

SPATIAL_KINDS = ('qubitX', 'qubitZ', 'qutritX', 'qutritZ')
FAULT_KINDS = SPATIAL_KINDS + ('measFlip',)
FAMILIES = ('beta', 'alpha', 'vertex', 'plaquette')
DIRECTION_NAMES = {H: 'H', V: 'V'}


@dataclass(frozen=True, order=True)
class Fault:
    """
    One elementary fault

    Spatial faults at time t act on edge (direction, x, y) just before round t is read.
    measFlip at time t corrupts the round-t reading of stabilizer `family` at site (x, y);
    `power` is the qutrit exponent, and the increment of a Z3 reading for measFlip.
    """
    t: int
    x: int
    y: int
    kind: str
    direction: int | None = None
    power: int = 1
    family: str | None = None

    def __post_init__(self):
        if self.kind not in FAULT_KINDS:
            msg = f"unknown fault kind {self.kind!r}"
            raise ValueError(msg)
        if self.kind == 'measFlip' and self.family not in FAMILIES:
            msg = f"measFlip needs a family from {FAMILIES}"
            raise ValueError(msg)
        if self.kind != 'measFlip' and self.direction not in (H, V):
            msg = f"{self.kind} needs an edge direction"
            raise ValueError(msg)

    @property
    def location(self) -> SpacetimePoint:
        return SpacetimePoint(self.x, self.y, self.t)

    @property
    def edge(self) -> tuple[int, int, int] | None:
        return None if self.direction is None else (self.direction, self.x, self.y)

    @property
    def is_timelike(self) -> bool:
        return self.kind == 'measFlip'

    def param(self) -> str:
        if self.kind == 'measFlip':
            return f'{self.family}:{self.power}'
        if self.kind in ('qutritX', 'qutritZ'):
            return f'{DIRECTION_NAMES[self.direction]}:{self.power}'
        return DIRECTION_NAMES[self.direction]

    def to_line(self) -> str:
        return f'{self.t} {self.x} {self.y} {self.kind} {self.param()}'

    @classmethod
    def from_line(cls, line: str) -> Fault:
        parts = line.split()
        if len(parts) not in (4, 5):
            msg = f"malformed fault line {line!r}"
            raise ValueError(msg)
        t, x, y = (int(v) for v in parts[:3])
        kind = parts[3]
        param = parts[4] if len(parts) == 5 else ''
        head, _, power = param.partition(':')
        power = int(power) if power else 1
        if kind == 'measFlip':
            return cls(t, x, y, kind, None, power, head or 'beta')
        direction = {'H': H, 'V': V}.get(head, H)
        return cls(t, x, y, kind, direction, power)


@dataclass(frozen=True)
class ErrorConfiguration:
    faults: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, faults: Iterable[Fault]) -> ErrorConfiguration:
        return cls(frozenset(faults))

    @property
    def weight(self) -> int:
        return len(self.faults)

    def __len__(self) -> int:
        return len(self.faults)

    def __iter__(self) -> Iterator[Fault]:
        return iter(sorted(self.faults))

    def union(self, other: ErrorConfiguration) -> ErrorConfiguration:
        return ErrorConfiguration(self.faults | other.faults)

    def difference(self, other: ErrorConfiguration) -> ErrorConfiguration:
        return ErrorConfiguration(self.faults - other.faults)

    def at(self, t: int) -> list[Fault]:
        return sorted(f for f in self.faults if f.t == t)

    def points(self) -> list[tuple[int, int, int]]:
        return sorted({f.location.as_tuple() for f in self.faults})

    def r_components(self, r: float, L: int | None = None) -> list[list[tuple[int, int, int]]]:
        """Fault locations grouped by r-connectivity in the L-infinity metric."""
        return r_components(self.points(), r, L)

    def dumps(self) -> str:
        return ''.join(f.to_line() + '\n' for f in self)


def cube_failure_prob(eps: float, N: int) -> float:
    """Probability that at least one of N independent elements of a unit cube fails."""
    if not 0 <= eps <= 1 or N < 1:
        msg = f"need 0 <= eps <= 1 and N >= 1, got eps={eps}, N={N}"
        raise ValueError(msg)
    return 1.0 - (1.0 - eps) ** N


def sample_errors(p: float, L: int, T: int, rng, measurement_noise: bool = True, t_offset: int = 1):
    """
    Draw an error configuration on the L x L x T volume

    Each unit cube faults independently with probability p and then draws one kind uniformly,
    a uniform edge direction, a uniform qutrit exponent in {1, 2} and, for measFlip, a uniform
    stabilizer family. Cube times run from t_offset to t_offset + T - 1.
    """
    hits = np.argwhere(rng.random((T, L, L)) < p)
    kinds = FAULT_KINDS if measurement_noise else SPATIAL_KINDS
    kind_draw = rng.integers(0, len(kinds), size=len(hits))
    direction_draw = rng.integers(0, 2, size=len(hits))
    power_draw = rng.integers(1, 3, size=len(hits))
    family_draw = rng.integers(0, len(FAMILIES), size=len(hits))

    faults = []
    for (t, y, x), k, d, a, fam in zip(hits, kind_draw, direction_draw, power_draw, family_draw):
        kind = kinds[k]
        if kind == 'measFlip':
            faults.append(Fault(int(t) + t_offset, int(x), int(y), kind, None, int(a), FAMILIES[fam]))
        else:
            power = int(a) if kind in ('qutritX', 'qutritZ') else 1
            faults.append(Fault(int(t) + t_offset, int(x), int(y), kind, int(d), power))
    logger.debug("sampled %d faults on %dx%dx%d at p=%g", len(faults), L, L, T, p)
    return ErrorConfiguration.of(faults)


def dump_errors(config: ErrorConfiguration, file_path: str) -> str:
    with open(file_path, 'w', encoding='utf-8') as handle:
        handle.write(config.dumps())
    return file_path


def load_errors(source) -> ErrorConfiguration:
    """Read `t x y kind [param]` lines from a path or an iterable of lines; '#' starts a comment."""
    if isinstance(source, str):
        with open(source, encoding='utf-8') as handle:
            lines = handle.read().splitlines()
    else:
        lines = list(source)
    faults = []
    for line in lines:
        line = line.split('#', 1)[0].strip()
        if line:
            faults.append(Fault.from_line(line))
    return ErrorConfiguration.of(faults)
