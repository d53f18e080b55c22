from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anyonsim.components.lattice import H, V
from anyonsim.errors import MissingReadingError
from anyonsim.spacetime_model import (Absorber, ErrorConfiguration, Fault, Readings, SpacetimePoint,
                                      cube_failure_prob, detectors_from_readings, distance, load_errors,
                                      r_components, sample_errors)

L = 6


@st.composite
def regions(draw, size=L):
    points = draw(st.lists(st.tuples(st.integers(0, size - 1), st.integers(0, size - 1), st.integers(0, 5)),
                           min_size=1, max_size=5))
    return points


# =============================================================================
# Noise model
# =============================================================================

class TestNoise:

    def test_cube_failure_prob(self):
        assert cube_failure_prob(0, 7) == 0
        assert cube_failure_prob(1, 1) == 1
        assert cube_failure_prob(0.001, 10) == pytest.approx(0.00995511, abs=1e-8)

    def test_cube_failure_prob_rejects_bad_input(self):
        with pytest.raises(ValueError):
            cube_failure_prob(1.5, 3)

    def test_zero_rate(self):
        assert sample_errors(0.0, 8, 8, np.random.default_rng(1)).weight == 0

    def test_every_cube_faults(self):
        config = sample_errors(1.0, 2, 1, np.random.default_rng(1))
        assert config.weight == 4
        assert {(f.x, f.y, f.t) for f in config} == {(x, y, 1) for x in range(2) for y in range(2)}

    def test_mean_weight(self):
        rng = np.random.default_rng(3)
        weights = [sample_errors(0.01, 16, 16, rng).weight for _ in range(200)]
        sigma = np.sqrt(4096 * 0.01 * 0.99 / 200)
        assert abs(np.mean(weights) - 40.96) < 3 * sigma

    def test_reproducible(self):
        a = sample_errors(0.1, 6, 6, np.random.default_rng([5, 2]))
        b = sample_errors(0.1, 6, 6, np.random.default_rng([5, 2]))
        assert a == b

    def test_without_measurement_noise(self):
        config = sample_errors(1.0, 4, 4, np.random.default_rng(0), measurement_noise=False)
        assert all(not f.is_timelike for f in config)

    def test_qutrit_powers(self):
        config = sample_errors(1.0, 8, 8, np.random.default_rng(0))
        assert {f.power for f in config if f.kind in ('qutritX', 'qutritZ')} == {1, 2}
        assert {f.power for f in config if f.kind in ('qubitX', 'qubitZ')} == {1}


class TestErrorConfiguration:

    def test_text_format(self):
        config = ErrorConfiguration.of([Fault(3, 1, 2, 'qutritZ', H, 2), Fault(4, 0, 0, 'measFlip', None, 1, 'vertex'),
                                        Fault(5, 2, 2, 'qubitX', V)])
        lines = config.dumps().splitlines()
        assert '3 1 2 qutritZ H:2' in lines
        assert '4 0 0 measFlip vertex:1' in lines
        assert load_errors(lines + ['# comment', '']) == config

    def test_set_algebra(self):
        a = ErrorConfiguration.of([Fault(1, 0, 0, 'qubitZ', H)])
        b = ErrorConfiguration.of([Fault(2, 0, 0, 'qubitZ', V)])
        assert a.union(b).weight == 2
        assert a.union(b).difference(b) == a

    def test_components(self):
        config = ErrorConfiguration.of([Fault(1, 0, 0, 'qubitZ', H), Fault(2, 1, 1, 'qubitZ', H),
                                        Fault(1, 4, 4, 'qubitZ', H)])
        assert config.r_components(1, L=10) == [[(0, 0, 1), (1, 1, 2)], [(4, 4, 1)]]

    def test_invalid_fault(self):
        with pytest.raises(ValueError):
            Fault(0, 0, 0, 'measFlip')


# =============================================================================
# Metric
# =============================================================================

class TestDistance:

    def test_points(self):
        assert distance((0, 0, 0), (3, -2, 1)) == 3

    def test_periodic(self):
        assert distance(SpacetimePoint(0, 0, 0), SpacetimePoint(L - 1, 0, 0), L) == 1

    @given(regions(), regions())
    @settings(max_examples=100, deadline=None)
    def test_region_matches_brute_force(self, a, b):
        def point_distance(p, q):
            dx = min((p[0] - q[0]) % L, (q[0] - p[0]) % L)
            dy = min((p[1] - q[1]) % L, (q[1] - p[1]) % L)
            return max(dx, dy, abs(p[2] - q[2]))
        expected = min(point_distance(p, q) for p, q in itertools.product(a, b))
        assert distance(a, b, L) == expected
        assert distance(b, a, L) == expected

    @given(regions(), regions(), regions())
    @settings(max_examples=50, deadline=None)
    def test_triangle_inequality_for_points(self, a, b, c):
        p, q, r = a[0], b[0], c[0]
        assert distance(p, r, L) <= distance(p, q, L) + distance(q, r, L)

    def test_periodic_components_wrap(self):
        assert r_components([(0, 0, 0), (L - 1, 0, 0)], 1, L) == [[(0, 0, 0), (L - 1, 0, 0)]]

    def test_absorber_needs_extent(self):
        with pytest.raises(ValueError):
            Absorber('gaugingWall', frozenset())
        wall = Absorber.worldline(2, 2, 0, 4)
        assert wall.distance_to((5, 2, 2), L) == 3


# =============================================================================
# Detectors
# =============================================================================

def _history(rounds):
    return [Readings.clean(L) for _ in range(rounds)]


class TestDetectors:

    def test_constant_readings(self):
        assert len(detectors_from_readings(_history(5))) == 0

    def test_physical_fault_fires_once(self):
        history = _history(6)
        for t in range(3, 6):
            history[t].vertex[1, 1] = 1
            history[t].vertex[1, 2] = 1
        stream = detectors_from_readings(history)
        assert [(e.time, e.species, e.site) for e in stream] == [(3, 'e', (1, 1)), (3, 'e', (2, 1))]

    def test_measurement_flip_is_time_stacked(self):
        history = _history(6)
        history[2].beta[4, 0] = -1
        stream = detectors_from_readings(history)
        assert [(e.time, e.site) for e in stream] == [(2, (0, 4)), (3, (0, 4))]

    def test_scheduled_anyon_is_expected(self):
        history = [Readings.clean(L, [(2, 2)]) for _ in range(4)]
        schedule = [Absorber.worldline(2, 2, 0, 3)]
        assert len(detectors_from_readings(history, schedule)) == 0
        assert len(detectors_from_readings(history)) == 1

    def test_masked_readings_are_silent(self):
        history = _history(3)
        history[1].vertex[0, 0] = -1
        history[2].vertex[0, 0] = 1
        assert len(detectors_from_readings(history)) == 0

    def test_phase_change_left_to_the_boundary(self):
        history = _history(3)
        history[1].z3[0, 0] = True
        history[1].vertex[0, 0] = 2
        history[2].z3[0, 0] = True
        history[2].vertex[0, 0] = 2
        assert len(detectors_from_readings(history)) == 0

    def test_missing_reading(self):
        history = _history(3)
        history[1] = None
        with pytest.raises(MissingReadingError):
            detectors_from_readings(history)

    def test_stream_json(self):
        history = _history(2)
        history[1].plaquette[0, 1] = 1
        assert detectors_from_readings(history).to_json() == [
            {'species': 'm', 'site': [1, 0], 'time': 1, 'boundary': False, 'value': 1}]
