from __future__ import annotations

import numpy as np
import pytest
from config import BaseConfig
from hypothesis import given, settings
from hypothesis import strategies as st

from anyonsim.chunk_analysis import (Cluster, build_linked_trees, cluster_statistics, constants_table, decompose,
                                     fit_double_exponential, generate_placements, linking_violations, minimal_Q,
                                     threshold_estimate, tree_violations, verify_nugget_separation)
from anyonsim.chunk_analysis.constants import INEQUALITIES, satisfied
from anyonsim.errors import UnknownInequalityError
from anyonsim.spacetime_model import sample_errors


def _line(*times):
    return [(0, 0, t) for t in times]


@st.composite
def configurations(draw):
    return draw(st.sets(st.tuples(st.integers(0, 9), st.integers(0, 9), st.integers(0, 12)), max_size=14))


# =============================================================================
# Decomposition
# =============================================================================

class TestDecompose:

    def test_single_site(self):
        decomposition = decompose(_line(4), 6)
        assert decomposition.m == 0
        assert decomposition.differences == [{(0, 0, 4)}]

    def test_empty(self):
        decomposition = decompose([], 6)
        assert decomposition.levels == []
        assert decomposition.nuggets() == {}

    def test_close_pair_forms_level_one_chunk(self):
        decomposition = decompose(_line(0, 2), 6)
        assert decomposition.differences == [set(), {(0, 0, 0), (0, 0, 2)}]

    def test_distant_pair_stays_at_level_zero(self):
        decomposition = decompose(_line(0, 10), 6)
        assert decomposition.m == 0
        assert decomposition.nuggets() == {0: [[(0, 0, 0)], [(0, 0, 10)]]}

    def test_level_two_needs_two_disjoint_pairs(self):
        decomposition = decompose(_line(0, 3, 15, 18, 19), 6)
        assert decomposition.levels[2] == set(_line(0, 3, 15, 18))
        assert decomposition.differences[1] == {(0, 0, 19)}

    def test_periodic_space(self):
        decomposition = decompose([(0, 0, 5), (9, 0, 5)], 6, L=10)
        assert decomposition.m == 1

    def test_rejects_small_Q(self):
        with pytest.raises(ValueError):
            decompose(_line(0), 1)

    @given(configurations(), st.tuples(st.integers(0, 9), st.integers(0, 9), st.integers(0, 12)))
    @settings(max_examples=60, deadline=None)
    def test_monotone_under_added_fault(self, sites, extra):
        smaller = decompose(sites, 4, L=10)
        larger = decompose(sites | {extra}, 4, L=10)
        for n, level in enumerate(smaller.levels):
            assert level <= larger.levels[n]

    @given(configurations())
    @settings(max_examples=60, deadline=None)
    def test_differences_partition_sites(self, sites):
        decomposition = decompose(sites, 6, L=10)
        differences = decomposition.differences
        assert set().union(*differences) == set(sites) if sites else differences == []
        assert sum(len(f) for f in differences) == len(sites)


# =============================================================================
# Nugget separation
# =============================================================================

class TestNuggetSeparation:

    def test_empty_configuration(self):
        assert verify_nugget_separation(decompose([], 6))['violations'] == []

    def test_near_miss_is_one_nugget(self):
        report = verify_nugget_separation(decompose(_line(0, 2), 6))
        assert report['violations'] == []

    def test_overlap_is_classified(self):
        report = verify_nugget_separation(decompose(_line(0, 3, 15, 18, 19), 6))
        assert report['genuine'] == 0
        assert report['overlap'] >= 1

    def test_displayed_form_counted_separately(self):
        report = verify_nugget_separation(decompose(_line(0, 3, 15, 18, 22), 6))
        assert report['violations'] == []
        assert report['displayed_form_pairs'] >= 1

    def test_random_configurations(self):
        for index in range(30):
            rng = np.random.default_rng([11, index])
            decomposition = decompose(sample_errors(0.02, 10, 10, rng), 6, L=10)
            assert verify_nugget_separation(decomposition)['genuine'] == 0

    @given(configurations())
    @settings(max_examples=80, deadline=None)
    def test_no_genuine_violation(self, sites):
        assert verify_nugget_separation(decompose(sites, 6, L=10))['genuine'] == 0

    def test_acceptance_volume(self):
        rng = np.random.default_rng([0, 0])
        report = verify_nugget_separation(decompose(sample_errors(0.05, 20, 20, rng), 6, L=20))
        assert report['genuine'] == 0

    def test_workers_default_from_config(self, cli):
        command = cli.commands['verify'].commands['chunks']
        workers = next(param for param in command.params if param.name == 'workers')
        assert workers.default == BaseConfig.WORKERS


class TestClusterStatistics:

    def test_zero_rate(self):
        table = cluster_statistics(5, 0.0, 6, 6, 6, np.random.default_rng(0))
        assert table['per_level'] == [0.0, 0.0, 0.0, 0.0]
        assert fit_double_exponential(table)['C'] == 0.0

    def test_level_frequencies_decrease(self):
        table = cluster_statistics(100, 0.0005, 20, 20, 6, np.random.default_rng(4))
        assert table['per_level'][1] < table['per_level'][0]
        fit = fit_double_exponential(table)
        assert fit['holds']


# =============================================================================
# Linked trees
# =============================================================================

def _cluster(i, level, times, region_times=None, x=0):
    sites = frozenset((x, 0, t) for t in times)
    region = frozenset((x, 0, t) for t in region_times) if region_times else frozenset()
    return Cluster(i, level, sites, region)


class TestLinkedTrees:

    def test_distant_clusters_stay_apart(self):
        clusters = [_cluster(0, 0, [0]), _cluster(1, 0, [20])]
        trees = build_linked_trees(clusters, 6)
        assert [t.members for t in trees] == [[0], [1]]

    def test_small_cluster_near_region_links(self):
        big = _cluster(0, 2, range(0, 10), region_times=range(-5, 15))
        small = _cluster(1, 0, [20])
        trees = build_linked_trees([big, small], 6)
        assert len(trees) == 1
        assert trees[0].root == 0
        assert trees[0].links == [(1, 0)]

    def test_equal_level_link_is_reported(self):
        clusters = [_cluster(0, 0, [0]), _cluster(1, 0, [4])]
        assert linking_violations(clusters, 6)['same_level'] == [(0, 1)]

    def test_two_parents_reported(self):
        clusters = [_cluster(0, 1, [0]), _cluster(1, 1, [10]), _cluster(2, 0, [5])]
        assert linking_violations(clusters, 6)['several_parents'] == [2]

    def test_adversarial_placements_at_sixty(self):
        for index in range(20):
            clusters = generate_placements(60, np.random.default_rng([3, index]))
            assert not any(linking_violations(clusters, 60).values())
            trees = build_linked_trees(clusters, 60)
            assert not any(tree_violations(trees, clusters, 60).values())
            for tree in trees:
                levels = [tree.levels[i] for i in tree.members]
                assert levels.count(tree.level) == 1


# =============================================================================
# Constant chain
# =============================================================================

class TestConstants:

    @pytest.mark.parametrize('identifier, expected', [
        ('linking-same-size', 33),
        ('linking-single-parent', 8),
        ('linking-one-per-size', 43),
        ('tree-diameter', 11),
        ('tree-separation-gamma', 24),
        ('tree-separation-diameter', 45),
        ('tree-separation-descendants', 26),
        ('just-in-time', 89),
        ('eta-separation', 353),
    ])
    def test_minimal_Q(self, identifier, expected):
        assert minimal_Q(identifier) == expected

    def test_tree_diameter_fails_at_ten(self):
        assert not INEQUALITIES['tree-diameter'].holds(10, 1)
        assert satisfied('tree-diameter', 11)

    def test_unknown_identifier(self):
        with pytest.raises(UnknownInequalityError):
            minimal_Q('no-such-inequality')

    def test_table_flags_known_discrepancies(self):
        table = constants_table()
        flagged = {row['inequality'] for row in table['rows'] if not row['agrees']}
        assert flagged == {'linking-single-parent', 'tree-separation-diameter'}
        assert table['passed']

    def test_threshold_estimate(self):
        assert threshold_estimate(352) == pytest.approx(7.2e-19, rel=0.01)
