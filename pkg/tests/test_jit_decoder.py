from __future__ import annotations

import json

import numpy as np
import pytest

from anyonsim.components.lattice import H, V, Box
from anyonsim.errors import DecoderEscalationError, MissingReadingError
from anyonsim.jit_decoder import (ClusterRecord, ClusterStatus, DecoderState, age_rule, apply_eta_correction,
                                  cluster_events, eta_homology, eta_is_trivial, global_eta_decode)
from anyonsim.sim_engine import FrameState, GaugeRegion, encode_logical, measure_round, readout_logical
from anyonsim.spacetime_model import ErrorConfiguration, Fault


def _fault(kind, x, y, direction=H, power=1, t=1):
    return Fault(t, x, y, kind, direction=direction, power=power)


def _flip(family, x, y, t=1, power=1):
    return Fault(t, x, y, 'measFlip', power=power, family=family)


def _cluster(cluster_id, *points, region=None):
    cluster = ClusterRecord(cluster_id, birth=min(p[2] for p in points), region=region)
    for i, point in enumerate(points):
        cluster.add(('e', i, cluster_id), point, 20)
    if region is not None:
        cluster.status = ClusterStatus.UNGAUGED
    return cluster


def _drive(frame, decoder, faults, rounds, start=1):
    """Alternate faults, readings and decoding; returns the first round the decoder is idle after the last fault."""
    errors = ErrorConfiguration.of(faults)
    last_fault = max((f.t for f in errors), default=0)
    finished = None
    for t in range(start, start + rounds):
        now = errors.at(t)
        frame.apply_faults(now)
        decoder.step(frame, measure_round(frame, t, now), t)
        if finished is None and t >= last_fault and decoder.idle:
            finished = t
    return finished


def _boxes(decoder):
    return [Box(L=decoder.L, **a['region']) for a in decoder.actions if a['action'] in ('ungauge', 'widen')]


def _string(x, y, d, direction, t):
    if direction == H:
        return [_fault('qutritZ', x + i, y, H, t=t) for i in range(d)], [(x, y), (x + d, y)]
    return [_fault('qutritZ', x, y + i, V, t=t) for i in range(d)], [(x, y), (x, y + d)]


# =============================================================================
# Commit rule and clustering
# =============================================================================

class TestAgeRule:

    def test_singleton_is_ripe_at_once(self):
        assert age_rule(_cluster(0, (3, 3, 5)), 5)

    def test_waits_for_the_youngest_detection(self):
        cluster = _cluster(0, (0, 0, 2), (4, 0, 2))
        assert cluster.diameter == 4
        assert not age_rule(cluster, 5)
        assert age_rule(cluster, 6)

    def test_empty_cluster(self):
        with pytest.raises(ValueError):
            age_rule(ClusterRecord(0), 3)


class TestClusterEvents:

    def test_neighbours_share_a_cluster(self):
        clusters = {}
        touched, next_id = cluster_events(clusters, {('e', 1, 1): (1, 1, 2), ('e', 2, 1): (2, 1, 2)}, 2, 20, 0)
        assert touched == [0]
        assert next_id == 1
        assert clusters[0].diameter == 1

    def test_distant_events_stay_apart(self):
        clusters = {}
        touched, _ = cluster_events(clusters, {('e', 1, 1): (1, 1, 2), ('e', 10, 1): (10, 1, 2)}, 2, 20, 0)
        assert len(touched) == 2
        assert all(c.diameter == 0 for c in clusters.values())

    def test_links_to_an_open_region(self):
        region = GaugeRegion(0, Box(2, 2, 3, 3, 20), 1, 5)
        open_cluster = _cluster(0, (3, 3, 1), (4, 3, 1), region=region)
        clusters = {0: open_cluster}
        touched, next_id = cluster_events(clusters, {('m', 8, 3): (8, 3, 5)}, 5, 20, 1)
        assert touched == [0]
        assert next_id == 1
        assert ('m', 8, 3) in open_cluster.live

    def test_joins_the_older_cluster(self):
        older = _cluster(0, (2, 2, 1))
        younger = _cluster(1, (6, 2, 3))
        clusters = {0: older, 1: younger}
        touched, _ = cluster_events(clusters, {('e', 4, 2): (4, 2, 4)}, 4, 20, 2)
        assert touched == [0]
        assert younger.status == ClusterStatus.CLOSED
        assert len(older.events) == 3


# =============================================================================
# Decoding rounds
# =============================================================================

class TestStep:

    def test_no_events_no_actions(self):
        frame = FrameState(8)
        decoder = DecoderState(8)
        _drive(frame, decoder, [], 6)
        assert decoder.actions == []
        assert decoder.idle

    def test_missing_readings(self):
        with pytest.raises(MissingReadingError):
            DecoderState(8).step(FrameState(8), None, 1)

    def test_e_pair_trace(self):
        frame = FrameState(12)
        decoder = DecoderState(12)
        faults = [_fault('qutritZ', x, 3) for x in (3, 4, 5)]
        finished = _drive(frame, decoder, faults, 20)
        by_action = {a['action']: a['t'] for a in decoder.actions}
        assert by_action['ungauge'] == 5
        assert by_action['correct'] == 10
        assert by_action['regauge'] == 10
        assert finished <= 5 * (3 + 2)
        assert not frame.e_charge.any()
        assert not frame.z3.any()

    def test_measurement_flip_is_only_deferred(self):
        frame = FrameState(8)
        decoder = DecoderState(8)
        _drive(frame, decoder, [_flip('plaquette', 2, 2, t=2)], 6)
        assert [a['action'] for a in decoder.actions] == ['defer']
        assert decoder.stats()['clusters'] == 0
        assert not frame.qutrit_x.any()

    def test_eta_excluded_from_clusters(self):
        frame = FrameState(8)
        decoder = DecoderState(8)
        _drive(frame, decoder, [_fault('qubitZ', 2, 2)], 4)
        assert decoder.actions == []
        assert sorted(decoder.eta_events) == [(2, 2, 1), (3, 2, 1)]

    def test_action_log_lines(self):
        frame = FrameState(12)
        decoder = DecoderState(12)
        _drive(frame, decoder, [_fault('qutritX', 4, 4)], 12)
        lines = decoder.action_log().splitlines()
        assert len(lines) == len(decoder.actions)
        for line in lines:
            assert set(json.loads(line)) == {'t', 'cluster_id', 'action', 'region'}


class TestIsolatedCluster:

    @pytest.mark.parametrize('d', range(7))
    @pytest.mark.parametrize('seed', range(4))
    @pytest.mark.parametrize('measurement_flip', [False, True])
    def test_corrected_locally_and_in_time(self, d, seed, measurement_flip):
        L, t0 = 24, 3
        rng = np.random.default_rng([seed, d])
        x, y = (int(v) for v in rng.integers(0, L, size=2))
        direction = int(rng.integers(0, 2))
        if d == 0:
            faults, support = [_flip('vertex', x, y, t=t0)], [(x, y)]
        else:
            faults, support = _string(x, y, d, direction, t0)
        if measurement_flip:
            faults.append(_flip('vertex', x, y, t=t0 + 1))

        frame = FrameState(L)
        decoder = DecoderState(L)
        finished = _drive(frame, decoder, faults, 5 * (d + 2) + 6)

        assert finished is not None
        assert finished - t0 < 5 * (d + 2)
        assert not frame.e_charge.any()
        assert not frame.z3.any()
        for box in _boxes(decoder):
            for cell in box.cells():
                assert min(frame.torus.distance(cell, s) for s in support) <= 4 * d + 7


class TestHidingAndReveal:

    def test_charge_next_to_computational_anyon(self):
        L = 16
        frame = encode_logical(FrameState(L), 0, 4)
        decoder = DecoderState(L, homes=frame.homes())
        frame.apply_fault(_fault('qutritZ', 2, 4))
        assert frame.bound[(4, 4)] == [['e', (3, 4), 2]]

        for t in range(1, 20):
            decoder.step(frame, measure_round(frame, t), t)

        actions = [a['action'] for a in decoder.actions]
        assert 'widen' in actions
        assert actions[-1] == 'regauge'
        assert decoder.idle
        assert not frame.e_charge.any()
        assert not frame.bound
        assert readout_logical(frame) == 0

    @pytest.mark.parametrize('x', [-2, 14, 30])
    def test_hiding_across_the_seam(self, x):
        L = 16
        positions = {'A1': (0, 0), 'A2': (4, 0), 'B1': (0, 8), 'B2': (4, 8)}
        frame = encode_logical(FrameState(L), 1, 4, positions)
        decoder = DecoderState(L, homes=frame.homes())
        frame.apply_fault(_fault('qutritZ', x, 0))
        assert [site for _, site, _ in frame.bound[(0, 0)]] == [(15, 0)]
        assert frame.charge_at('e', (14, 0))

        _drive(frame, decoder, [], 30)
        assert decoder.idle
        assert not frame.e_charge.any()
        assert not frame.bound
        assert readout_logical(frame) == 1

    @pytest.mark.parametrize('bit', [0, 1])
    def test_occupied_home_wins_a_tie(self, bit):
        L = 16
        frame = encode_logical(FrameState(L), bit, 4)
        decoder = DecoderState(L, homes=frame.homes())
        frame.apply_fault(_fault('qutritX', 3, 7))
        assert [site for _, site, _ in frame.bound[(4, 8)]] == [(3, 7)]
        assert (4, 4) not in frame.bound

        _drive(frame, decoder, [], 30)
        widened = [Box(L=L, **a['region']) for a in decoder.actions if a['action'] == 'widen']
        assert widened
        assert all(box.contains(4, 8) and not box.contains(4, 4) for box in widened)
        assert decoder.idle
        assert not frame.m_charge.any()
        assert readout_logical(frame) == bit


class TestStrayMu:

    def test_mu_pair_is_fused(self):
        L = 12
        frame = FrameState(L)
        decoder = DecoderState(L)
        _drive(frame, decoder, [_fault('qubitX', 5, 5)], 12)
        actions = [a['action'] for a in decoder.actions]
        assert 'ungauge' in actions
        assert actions[-1] == 'regauge'
        assert frame.mu_sites() == []
        assert not frame.z3.any()
        assert decoder.idle

    def test_beta_read_next_to_mu(self):
        L = 12
        frame = FrameState(L)
        decoder = DecoderState(L)
        frame.apply_fault(_fault('qubitX', 5, 5))
        decoder.step(frame, measure_round(frame, 1), 1)
        mus = frame.mu_sites()
        assert len(mus) == 2
        assert sorted((k[1], k[2]) for k in decoder.pending if k[0] == 'μ') == sorted(mus)
        assert decoder.stats()['detections'] == 2

    @pytest.mark.parametrize('bit', [0, 1])
    @pytest.mark.parametrize('edge', [(H, 3, 3), (V, 4, 4), (H, 4, 4), (V, 5, 4), (V, 6, 4)])
    def test_mu_pair_next_to_home(self, bit, edge):
        L = 16
        frame = encode_logical(FrameState(L), bit, 4)
        decoder = DecoderState(L, homes=frame.homes())
        direction, x, y = edge
        _drive(frame, decoder, [_fault('qubitX', x, y, direction)], 30)
        assert decoder.idle
        assert sorted(frame.mu_sites()) == sorted(frame.homes())
        assert sorted(a.position for a in frame.anyons) == sorted(frame.homes())
        assert readout_logical(frame) == bit


class TestEscalation:

    def test_region_spanning_the_torus(self):
        frame = FrameState(8)
        frame.add_charge('e', (3, 3), 1)
        decoder = DecoderState(8)
        with pytest.raises(DecoderEscalationError) as info:
            for t in range(1, 20):
                decoder.step(frame, measure_round(frame, t), t)
        assert info.value.cluster_id == 0

    def test_finish_routes_to_the_boundary(self):
        frame = FrameState(12)
        decoder = DecoderState(12)
        _drive(frame, decoder, [_fault('qutritZ', x, 3) for x in (3, 4, 5)], 6)
        assert decoder.live_clusters
        assert decoder.finish(frame, 6) == 1
        assert decoder.idle
        assert not frame.z3.any()
        assert decoder.stats()['boundary_closures'] == 1


# =============================================================================
# Global eta decode
# =============================================================================

class TestEtaDecode:

    def test_neighbours_match_at_first_tier(self):
        result = global_eta_decode([(0, 0, 1), (1, 0, 1)], 8)
        assert result['pairs'] == [((0, 0, 1), (1, 0, 1))]
        assert result['boundary'] == []
        assert result['tiers'] == 1

    def test_odd_component_meets_the_wall(self):
        result = global_eta_decode([(0, 0, 1), (1, 0, 1), (5, 5, 3)], 8)
        assert result['pairs'] == [((0, 0, 1), (1, 0, 1))]
        assert result['boundary'] == [(5, 5, 3)]

    def test_odd_component_waits_for_a_partner(self):
        result = global_eta_decode([(0, 0, 1), (3, 0, 1)], 8, t_end=1)
        assert result['pairs'] == [((0, 0, 1), (3, 0, 1))]
        assert result['boundary'] == []
        assert result['tiers'] == 3

    def test_wall_event_gets_no_correction(self):
        frame = FrameState(8)
        result = global_eta_decode([(3, 3, 2)], 8, max_tier=2)
        assert result == {'pairs': [], 'boundary': [(3, 3, 2)], 'tiers': 3}
        assert apply_eta_correction(frame, result['pairs']) == 0

    def test_single_string(self):
        L = 12
        frame = FrameState(L)
        for x in range(2, 7):
            frame.apply_fault(_fault('qubitZ', x, 2))
        assert frame.eta_sites() == [(2, 2), (7, 2)]
        result = global_eta_decode([(2, 2, 1), (7, 2, 1)], L)
        assert apply_eta_correction(frame, result['pairs']) <= 10
        assert eta_is_trivial(frame)

    def test_winding_loop_is_nontrivial(self):
        frame = FrameState(6)
        for x in range(6):
            frame.apply_fault(_fault('qubitZ', x, 3))
        assert frame.eta_sites() == []
        assert eta_homology(frame) == (1, 0)
        assert not eta_is_trivial(frame)

    def test_wall_emissions_close_locally(self):
        L = 12
        frame = FrameState(L, eta_probability=1.0)
        decoder = DecoderState(L, rng=np.random.default_rng(0))
        _drive(frame, decoder, [_fault('qutritZ', x, 3) for x in (3, 4, 5)], 14)
        assert decoder.eta_events
        result = global_eta_decode(decoder.eta_events, L)
        assert result['boundary'] == []
        apply_eta_correction(frame, result['pairs'])
        assert eta_is_trivial(frame)
