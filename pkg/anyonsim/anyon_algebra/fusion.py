"""
Fusion multiplicities of D(S3).

The listed products are the ones stated with the model; every other product is filled in by
complete_fusion_table(), which closes the table under commutativity, rigidity (all charges are
self-dual, so N_ab^c is symmetric in a, b, c), the dimension rule and associativity.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .charges import CHARGES, DIMENSIONS, Charge

logger = logging.getLogger(__name__)

ONE, ETA, MU, PHI, E, M, F, G = CHARGES
PARAFERMIONS = (E, M, F, G)


def _listed_rules():
    rules = {}

    def put(a, b, *outcomes):
        rules[frozenset((a, b))] = Counter(outcomes)

    for a in CHARGES:
        put(ONE, a, a)
    put(ETA, ETA, ONE)
    put(ETA, MU, PHI)
    for a in (E, M):
        put(a, ETA, a)
        put(MU, a, MU, PHI)
    for a in PARAFERMIONS:
        put(a, a, ONE, ETA, a)
    for a, b in itertools.combinations(PARAFERMIONS, 2):
        put(a, b, *[c for c in PARAFERMIONS if c not in (a, b)])
    put(MU, MU, ONE, E, M, F, G)
    put(PHI, PHI, ONE, E, M, F, G)
    put(MU, PHI, ETA, E, M, F, G)
    return rules


LISTED_RULES = _listed_rules()


@dataclass(frozen=True)
class FusionTable:
    multiplicities: dict = field(repr=False)
    derived_pairs: frozenset = frozenset()

    def N(self, a: Charge, b: Charge, c: Charge) -> int:
        return self.multiplicities[(Charge(a), Charge(b), Charge(c))]

    def product(self, a: Charge, b: Charge) -> Counter:
        return Counter({c: self.N(a, b, c) for c in CHARGES if self.N(a, b, c)})

    def is_derived(self, a: Charge, b: Charge) -> bool:
        return frozenset((Charge(a), Charge(b))) in self.derived_pairs

    # --- invariant checks; each returns the list of offending index tuples ---

    def commutativity_violations(self):
        return [(a, b, c) for a, b, c in itertools.product(CHARGES, repeat=3)
                if self.N(a, b, c) != self.N(b, a, c)]

    def unit_violations(self):
        return [(a, c) for a, c in itertools.product(CHARGES, repeat=2)
                if self.N(ONE, a, c) != int(a == c)]

    def dimension_violations(self):
        return [(a, b) for a, b in itertools.product(CHARGES, repeat=2)
                if DIMENSIONS[a] * DIMENSIONS[b] != sum(self.N(a, b, c) * DIMENSIONS[c] for c in CHARGES)]

    def associativity_violations(self):
        bad = []
        for a, b, c, d in itertools.product(CHARGES, repeat=4):
            lhs = sum(self.N(a, b, x) * self.N(x, c, d) for x in CHARGES)
            rhs = sum(self.N(b, c, y) * self.N(a, y, d) for y in CHARGES)
            if lhs != rhs:
                bad.append((a, b, c, d))
        return bad

    def as_json(self) -> dict:
        table = {}
        for a in CHARGES:
            table[a.value] = {}
            for b in CHARGES:
                outcomes = []
                for c, n in self.product(a, b).items():
                    outcomes.extend([c.value] * n)
                table[a.value][b.value] = outcomes
        return {
            'table': table,
            'derived': sorted(sorted(c.value for c in pair) for pair in self.derived_pairs),
        }


def complete_fusion_table(listed=None) -> FusionTable:
    """
    Fill every product missing from `listed` and return the closed table

    Args:
        listed (dict): frozenset pair -> Counter of outcomes; defaults to LISTED_RULES

    Returns:
        FusionTable: the unique completion; its derived_pairs are the products that were filled
    """
    listed = LISTED_RULES if listed is None else listed
    known = {}
    for pair, outcomes in listed.items():
        a, b = tuple(pair) if len(pair) == 2 else (next(iter(pair)),) * 2
        for c in CHARGES:
            key, value = _key(a, b, c), outcomes.get(c, 0)
            if known.setdefault(key, value) != value:
                msg = f"listed fusion rules disagree on N for {[x.value for x in key]}"
                raise ValueError(msg)
    unknown = sorted({_key(a, b, c) for a, b, c in itertools.product(CHARGES, repeat=3)} - set(known),
                     key=lambda k: [CHARGES.index(x) for x in k])
    logger.debug("fusion completion: %d unknown symmetric entries", len(unknown))

    solutions = list(itertools.islice(_backtrack(known, unknown, 0), 2))
    if not solutions:
        msg = "listed fusion rules admit no consistent completion"
        raise ValueError(msg)
    if len(solutions) > 1:
        msg = "listed fusion rules admit more than one completion"
        raise ValueError(msg)

    solved = solutions[0]
    multiplicities = {(a, b, c): solved[_key(a, b, c)] for a, b, c in itertools.product(CHARGES, repeat=3)}
    derived = frozenset(frozenset((a, b)) for a, b in itertools.product(CHARGES, repeat=2)
                        if frozenset((a, b)) not in listed)
    return FusionTable(multiplicities, derived)


def _key(a, b, c):
    return tuple(sorted((a, b, c), key=CHARGES.index))


def _backtrack(known, unknown, depth):
    if not _consistent(known):
        return
    if depth == len(unknown):
        yield dict(known)
        return
    slot = unknown[depth]
    for value in range(4):
        known[slot] = value
        yield from _backtrack(known, unknown, depth + 1)
        del known[slot]


def _consistent(known) -> bool:
    def n(a, b, c):
        return known.get(_key(a, b, c))

    for a, b in itertools.combinations_with_replacement(CHARGES, 2):
        row = [n(a, b, c) for c in CHARGES]
        partial = sum(v * DIMENSIONS[c] for v, c in zip(row, CHARGES) if v is not None)
        if partial > DIMENSIONS[a] * DIMENSIONS[b]:
            return False
        if None not in row and partial != DIMENSIONS[a] * DIMENSIONS[b]:
            return False
    for a, b, c in itertools.product(CHARGES, repeat=3):
        lhs = _compose(n, a, b, c, left=True)
        rhs = _compose(n, a, b, c, left=False)
        if lhs is not None and rhs is not None and lhs != rhs:
            return False
    return True


def _compose(n, a, b, c, left):
    """(a x b) x c when left, a x (b x c) otherwise; None while an entry is still open."""
    first = [n(a, b, x) if left else n(b, c, x) for x in CHARGES]
    if None in first:
        return None
    total = Counter()
    for x, weight in zip(CHARGES, first):
        if not weight:
            continue
        for d in CHARGES:
            value = n(x, c, d) if left else n(a, x, d)
            if value is None:
                return None
            total[d] += weight * value
    return +total


@lru_cache(maxsize=1)
def fusion_table() -> FusionTable:
    return complete_fusion_table()


def fuse(a: Charge, b: Charge) -> Counter:
    """Outcomes of a x b with their multiplicities."""
    return fusion_table().product(a, b)


def possible_total_charges(charges: Iterable[Charge]) -> set[Charge]:
    """Every total charge some fusion order of the multiset can produce."""
    reachable = {ONE}
    for x in charges:
        reachable = {c for r in reachable for c in fuse(r, x)}
    return reachable


def is_neutralizable(charges: Iterable[Charge]) -> bool:
    return ONE in possible_total_charges(charges)


def total_dimension() -> float:
    return sum(d * d for d in DIMENSIONS.values()) ** 0.5
