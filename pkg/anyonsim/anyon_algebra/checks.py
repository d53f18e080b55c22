"""
Acceptance checks for the fusion ring, driven by `verify algebra`
"""
import itertools

import numpy as np

from .charges import ALL_MICRO_CHARGES, CHARGES, DIMENSIONS, conjugate, orbit_of
from .fusion import fuse, fusion_table, possible_total_charges


def _record(name, violations):
    return {'check': name, 'violations': [str(v) for v in violations[:10]],
            'count': len(violations), 'pass': not violations}


def run_algebra_suite(dump=False, seed=0, samples=200):
    table = fusion_table()
    records = [
        _record('commutativity', table.commutativity_violations()),
        _record('unit', table.unit_violations()),
        _record('dimension', table.dimension_violations()),
        _record('associativity', table.associativity_violations()),
        _record('orbit-conjugation', [x.as_tuple() for x in ALL_MICRO_CHARGES
                                      if orbit_of(conjugate(x)) != orbit_of(x)]),
        _record('conjugation-involution', [x.as_tuple() for x in ALL_MICRO_CHARGES
                                           if conjugate(conjugate(x)) != x]),
        _record('pair-totals', [(a.value, b.value) for a, b in itertools.product(CHARGES, repeat=2)
                                if possible_total_charges([a, b]) != set(fuse(a, b))]),
        _record('sum-of-squares', [] if sum(d * d for d in DIMENSIONS.values()) == 36 else ['sum != 36']),
    ]

    rng = np.random.default_rng(seed)
    order_bad = []
    for _ in range(samples):
        size = int(rng.integers(0, 7))
        multiset = [CHARGES[i] for i in rng.integers(0, len(CHARGES), size=size)]
        shuffled = [multiset[i] for i in rng.permutation(size)]
        if possible_total_charges(multiset) != possible_total_charges(shuffled):
            order_bad.append([c.value for c in multiset])
    records.append(_record('order-independence', order_bad))

    report = {'suite': 'algebra', 'checks': records, 'passed': all(r['pass'] for r in records)}
    if dump:
        report['fusion'] = table.as_json()
    return report
