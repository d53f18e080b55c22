"""
Stabilizer readings and the detectors built from consecutive rounds
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from anyonsim.errors import MissingReadingError

from .faults import FAMILIES

SPECIES = {'beta': 'μ', 'alpha': 'η', 'vertex': 'e', 'plaquette': 'm'}
FAMILY_OF = {species: family for family, species in SPECIES.items()}
MASKED = -1


@dataclass
class Readings:
    """
    One round of stabilizer readings on an L x L torus, arrays indexed [y, x]

    beta, alpha: +1/-1, alpha is 0 where the cell is in the Z3 phase.
    vertex, plaquette: 0/1 in the S3 phase (MASKED next to a mu), 0..2 in the Z3 phase.
    """
    beta: np.ndarray
    alpha: np.ndarray
    vertex: np.ndarray
    plaquette: np.ndarray
    z3: np.ndarray

    @classmethod
    def clean(cls, L: int, mu_sites: Iterable[tuple[int, int]] = ()) -> Readings:
        beta = np.ones((L, L), dtype=int)
        for x, y in mu_sites:
            beta[y, x] = -1
        zeros = np.zeros((L, L), dtype=int)
        return cls(beta, np.ones((L, L), dtype=int), zeros.copy(), zeros.copy(), np.zeros((L, L), dtype=bool))

    @property
    def L(self) -> int:
        return self.beta.shape[0]

    def copy(self) -> Readings:
        return Readings(self.beta.copy(), self.alpha.copy(), self.vertex.copy(), self.plaquette.copy(),
                        self.z3.copy())

    def family(self, name: str) -> np.ndarray:
        return getattr(self, name)

    def as_dict(self) -> dict:
        return {name: self.family(name).tolist() for name in FAMILIES} | {'z3': self.z3.astype(int).tolist()}


@dataclass(frozen=True, order=True)
class DetectorEvent:
    time: int
    species: str
    site: tuple[int, int]
    boundary: bool = False
    value: int = 1

    @property
    def family(self) -> str:
        return FAMILY_OF[self.species]

    def as_dict(self) -> dict:
        return {'species': self.species, 'site': list(self.site), 'time': self.time,
                'boundary': self.boundary, 'value': self.value}


@dataclass
class SyndromeStream:
    events: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def extend(self, events: Iterable[DetectorEvent]):
        self.events.extend(events)

    def at(self, t: int) -> list[DetectorEvent]:
        return [e for e in self.events if e.time == t]

    def of_species(self, species: str) -> list[DetectorEvent]:
        return [e for e in self.events if e.species == species]

    def times(self) -> list[int]:
        return sorted({e.time for e in self.events})

    def to_json(self) -> list[dict]:
        return [e.as_dict() for e in sorted(self.events)]


def _normalized_beta(readings: Readings, expected_mu: Iterable[tuple[int, int]]) -> np.ndarray:
    beta = readings.beta.copy()
    for x, y in expected_mu:
        beta[y, x] = -beta[y, x]
    return beta


def detect_round(previous: Readings, current: Readings, t: int, expected_previous=(), expected_current=()):
    """
    Detection events between two consecutive rounds

    Cells whose phase changed between the rounds are skipped; their detectors belong to the
    gauging boundary. Masked S3 readings and unmeasured alpha readings produce no event.
    `expected_*` list the plaquettes where a computational mu is scheduled, whose beta
    reading is expected to be -1.
    """
    same_phase = previous.z3 == current.z3
    events = []

    beta_prev = _normalized_beta(previous, expected_previous)
    beta_cur = _normalized_beta(current, expected_current)
    for y, x in np.argwhere(same_phase & (beta_prev != beta_cur)):
        events.append(DetectorEvent(t, 'μ', (int(x), int(y))))

    alpha_changed = (previous.alpha != current.alpha) & (previous.alpha != 0) & (current.alpha != 0)
    for y, x in np.argwhere(same_phase & alpha_changed):
        events.append(DetectorEvent(t, 'η', (int(x), int(y))))

    for name in ('vertex', 'plaquette'):
        before, after = previous.family(name), current.family(name)
        changed = same_phase & (before != after) & (before != MASKED) & (after != MASKED)
        for y, x in np.argwhere(changed):
            value = int((after[y, x] - before[y, x]) % 3) if current.z3[y, x] else int(after[y, x])
            events.append(DetectorEvent(t, SPECIES[name], (int(x), int(y)), value=value))
    return sorted(events)


def expected_mu_sites(schedule, t: int) -> set[tuple[int, int]]:
    """Plaquettes on a scheduled computational-anyon worldline at time t."""
    sites = set()
    for absorber in schedule or ():
        sites.update((p.x, p.y) for p in absorber.extent if p.t == t)
    return sites


def detectors_from_readings(readings: Sequence[Readings | None], schedule=None) -> SyndromeStream:
    """
    Detection events over a whole reading history

    Round 0 is compared with the clean reference; every later round needs the one before it.

    Args:
        readings: readings indexed by round
        schedule: computational-anyon worldlines (Absorber.worldline) whose beta is expected at -1

    Returns:
        SyndromeStream
    """
    stream = SyndromeStream()
    if not readings or readings[0] is None:
        msg = "no reading for the initial round"
        raise MissingReadingError(msg)
    reference = Readings.clean(readings[0].L, expected_mu_sites(schedule, 0))
    previous, previous_expected = reference, expected_mu_sites(schedule, 0)
    for t, current in enumerate(readings):
        if current is None:
            msg = f"missing reading at round {t}"
            raise MissingReadingError(msg)
        expected = expected_mu_sites(schedule, t)
        stream.extend(detect_round(previous, current, t, previous_expected, expected))
        previous, previous_expected = current, expected
    return stream
