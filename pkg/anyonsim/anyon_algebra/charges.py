"""
D(S3) charge labels, quantum dimensions and the microscopic Z3 x Z3 x Z2 refinement
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Charge(str, Enum):
    VACUUM = '1'
    ETA = 'η'
    MU = 'μ'
    PHI = 'φ'
    E = 'e'
    M = 'm'
    F = 'f'
    G = 'g'

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, label: str) -> Charge:
        aliases = {'eta': cls.ETA, 'mu': cls.MU, 'phi': cls.PHI, 'vacuum': cls.VACUUM}
        if label in aliases:
            return aliases[label]
        return cls(label)


CHARGES = tuple(Charge)

DIMENSIONS = {
    Charge.VACUUM: 1,
    Charge.ETA: 1,
    Charge.MU: 3,
    Charge.PHI: 3,
    Charge.E: 2,
    Charge.M: 2,
    Charge.F: 2,
    Charge.G: 2,
}

# Mixed micro-charges (e, m) with both parts nonzero. The assignment follows the
# eigenvalue-one sectors of the F and G vertex-plaquette projectors: F fires when
# e + m = 0 mod 3, G when e - m = 0 mod 3 (see stabilizer_lab.stabilizers).
PARAFERMION_CONVENTION = {
    (1, 2): Charge.F,
    (2, 1): Charge.F,
    (1, 1): Charge.G,
    (2, 2): Charge.G,
}


def quantum_dim(a: Charge) -> int:
    return DIMENSIONS[Charge(a)]


@dataclass(frozen=True)
class MicroCharge:
    """Charge of the gauged Z3 toric code: electric and magnetic parts mod 3, η bit mod 2."""
    e: int = 0
    m: int = 0
    eta: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'e', self.e % 3)
        object.__setattr__(self, 'm', self.m % 3)
        object.__setattr__(self, 'eta', self.eta % 2)

    def __add__(self, other: MicroCharge) -> MicroCharge:
        return MicroCharge(self.e + other.e, self.m + other.m, self.eta + other.eta)

    def __neg__(self) -> MicroCharge:
        return MicroCharge(-self.e, -self.m, self.eta)

    def __sub__(self, other: MicroCharge) -> MicroCharge:
        return self + (-other)

    @property
    def is_vacuum(self) -> bool:
        return self.e == 0 and self.m == 0 and self.eta == 0

    def as_tuple(self) -> tuple[int, int, int]:
        return self.e, self.m, self.eta


VACUUM_MICRO = MicroCharge()
ALL_MICRO_CHARGES = tuple(MicroCharge(e, m, eta) for e in range(3) for m in range(3) for eta in range(2))


def conjugate(x: MicroCharge) -> MicroCharge:
    """Charge conjugation swaps the two nontrivial Z3 labels and leaves η alone."""
    return MicroCharge(-x.e, -x.m, x.eta)


def orbit_of(x: MicroCharge) -> Charge:
    """Conjugation orbit of a micro-charge, i.e. the D(S3) anyon it becomes after gauging."""
    if x.e and x.m:
        return PARAFERMION_CONVENTION[(x.e, x.m)]
    if x.e:
        return Charge.E
    if x.m:
        return Charge.M
    return Charge.ETA if x.eta else Charge.VACUUM
