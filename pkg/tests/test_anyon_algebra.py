from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anyonsim.anyon_algebra import (ALL_MICRO_CHARGES, CHARGES, LISTED_RULES, Charge, MicroCharge,
                                    complete_fusion_table, conjugate, fuse, fusion_table, is_neutralizable,
                                    orbit_of, possible_total_charges, quantum_dim, total_dimension)
from anyonsim.anyon_algebra.checks import run_algebra_suite

ONE, ETA, MU, PHI, E, M, F, G = CHARGES


# =============================================================================
# Fusion products and dimensions
# =============================================================================

class TestFuse:

    def test_mu_mu(self):
        assert fuse(MU, MU) == Counter({ONE: 1, E: 1, M: 1, F: 1, G: 1})

    def test_unit(self):
        assert fuse(ONE, PHI) == Counter({PHI: 1})

    def test_mu_phi(self):
        assert fuse(MU, PHI) == Counter({ETA: 1, E: 1, M: 1, F: 1, G: 1})

    def test_symmetric(self):
        for a in CHARGES:
            for b in CHARGES:
                assert fuse(a, b) == fuse(b, a)

    def test_quantum_dims(self):
        assert quantum_dim(MU) == 3
        assert quantum_dim(ONE) == 1
        assert sum(quantum_dim(a) ** 2 for a in CHARGES) == 36
        assert total_dimension() == pytest.approx(6.0)

    def test_mu_mu_dimension_count(self):
        assert quantum_dim(MU) ** 2 == sum(n * quantum_dim(c) for c, n in fuse(MU, MU).items()) == 9


class TestCompletion:

    def test_listed_products_are_kept(self):
        table = fusion_table()
        for pair, outcomes in LISTED_RULES.items():
            a, b = (tuple(pair) * 2)[:2]
            assert table.product(a, b) == +outcomes

    def test_derived_products(self):
        table = fusion_table()
        assert fuse(ETA, F) == Counter({F: 1})
        assert fuse(ETA, G) == Counter({G: 1})
        assert fuse(ETA, PHI) == Counter({MU: 1})
        for a in (F, G):
            assert fuse(PHI, a) == Counter({MU: 1, PHI: 1})
            assert fuse(MU, a) == Counter({MU: 1, PHI: 1})
        for a in (E, M):
            assert fuse(PHI, a) == Counter({MU: 1, PHI: 1})
        assert table.is_derived(ETA, F)
        assert table.is_derived(PHI, G)
        assert not table.is_derived(MU, MU)

    def test_derived_pairs_are_exactly_the_unlisted_ones(self):
        expected = {frozenset(p) for p in [(ETA, F), (ETA, G), (ETA, PHI), (PHI, E), (PHI, M),
                                           (PHI, F), (PHI, G), (MU, F), (MU, G)]}
        assert set(fusion_table().derived_pairs) == expected

    def test_contradictory_rules_are_rejected(self):
        rules = dict(LISTED_RULES)
        rules[frozenset((ETA, MU))] = Counter([MU])
        with pytest.raises(ValueError):
            complete_fusion_table(rules)


class TestInvariants:

    def test_commutativity(self):
        assert fusion_table().commutativity_violations() == []

    def test_unit(self):
        assert fusion_table().unit_violations() == []

    def test_dimension(self):
        assert fusion_table().dimension_violations() == []

    def test_associativity(self):
        assert fusion_table().associativity_violations() == []

    def test_suite_passes(self):
        report = run_algebra_suite(dump=True, samples=50)
        assert report['passed']
        assert report['fusion']['table']['μ']['μ'] == ['1', 'e', 'm', 'f', 'g']


# =============================================================================
# Totals over multisets
# =============================================================================

class TestTotals:

    def test_empty(self):
        assert possible_total_charges([]) == {ONE}

    def test_e_e(self):
        assert possible_total_charges([E, E]) == {ONE, ETA, E}

    def test_e_m_eta(self):
        assert possible_total_charges([E, M, ETA]) == {F, G}

    def test_pairs_match_fuse(self):
        for a in CHARGES:
            for b in CHARGES:
                assert possible_total_charges([a, b]) == set(fuse(a, b))

    def test_neutralizable(self):
        assert is_neutralizable([MU, MU])
        assert not is_neutralizable([ETA])
        assert not is_neutralizable([E, M])

    @given(st.lists(st.sampled_from(CHARGES), max_size=6), st.randoms(use_true_random=False))
    @settings(max_examples=200, deadline=None)
    def test_order_independence(self, multiset, rnd):
        shuffled = list(multiset)
        rnd.shuffle(shuffled)
        assert possible_total_charges(multiset) == possible_total_charges(shuffled)


# =============================================================================
# Micro-charges
# =============================================================================

class TestMicroCharge:

    def test_orbit_examples(self):
        assert orbit_of(MicroCharge(0, 0, 0)) == ONE
        assert orbit_of(MicroCharge(1, 0, 0)) == E
        assert orbit_of(MicroCharge(0, 0, 1)) == ETA
        assert orbit_of(MicroCharge(1, 0, 1)) == E
        assert orbit_of(MicroCharge(0, 2, 0)) == M
        assert orbit_of(MicroCharge(1, 1, 0)) == G
        assert orbit_of(MicroCharge(1, 2, 0)) == F

    def test_conjugate_examples(self):
        assert conjugate(MicroCharge(1, 2, 0)) == MicroCharge(2, 1, 0)
        assert conjugate(MicroCharge(0, 0, 1)) == MicroCharge(0, 0, 1)

    @pytest.mark.parametrize('x', ALL_MICRO_CHARGES, ids=lambda x: str(x.as_tuple()))
    def test_conjugation_is_an_involution_preserving_orbits(self, x):
        assert conjugate(conjugate(x)) == x
        assert orbit_of(conjugate(x)) == orbit_of(x)

    def test_arithmetic_wraps(self):
        assert MicroCharge(1, 0, 0) + MicroCharge(2, 0, 0) == MicroCharge()
        assert (MicroCharge(1, 1, 1) + MicroCharge(0, 0, 1)).as_tuple() == (1, 1, 0)
        assert MicroCharge(4, -1, 3).as_tuple() == (1, 2, 1)

    def test_parse_aliases(self):
        assert Charge.parse('mu') is MU
        assert Charge.parse('e') is E
