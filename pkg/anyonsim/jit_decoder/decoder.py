"""
Just-in-time decoder

Each round the decoder compares the readings with the clean reference (beta = -1 on the
computational homes, every other term satisfied) on S3-phase cells it can see. A new
difference is deferred for one round, which is the classical reversal of the most recent
reading: if the next reading agrees with the reference the two time-stacked events cancel,
otherwise the defect is confirmed at the later round. Confirmed defects are clustered; a
cluster is ungauged once every initial detection is as old as the cluster diameter, and after
a dwell of diameter + 2 rounds its region is either corrected and regauged or widened.
"""
from __future__ import annotations

import json
import logging

import numpy as np

from anyonsim.components.lattice import Box
from anyonsim.errors import DecoderEscalationError, MissingReadingError
from anyonsim.sim_engine import (GaugeRegion, apply_correction, evaluate_neutrality, extend_region, regauge_region,
                                 ungauge_region)
from anyonsim.spacetime_model import MASKED, SPECIES, Absorber, Readings, SyndromeStream, detect_round

from .clusters import ClusterRecord, ClusterStatus, age_rule, cluster_events

logger = logging.getLogger(__name__)

SPECIES_FAMILIES = tuple((SPECIES[family], family) for family in ('beta', 'vertex', 'plaquette'))


class DecoderState:
    """
    Per-shot decoder state, driven one round at a time by `step`

    Args:
        L (int): spatial period
        homes (Iterable): plaquettes of the computational anyons
        rng: generator used for eta emission at regauging, None to disable emission
    """

    def __init__(self, L: int, homes=(), rng=None):
        self.L = L
        self.homes = sorted({tuple(h) for h in homes})
        self.rng = rng
        self.reference = Readings.clean(L, self.homes)
        self.previous = self.reference
        self.detections = SyndromeStream()
        self.clusters: dict[int, ClusterRecord] = {}
        self.closed: list[ClusterRecord] = []
        self.defects: dict[tuple, int] = {}
        self.pending: dict[tuple, tuple[int, str]] = {}
        self.eta_events: list[tuple[int, int, int]] = []
        self.actions: list[dict] = []
        self.last_alpha = np.ones((L, L), dtype=int)
        self.boundary_closures = 0
        self.max_tier = 0
        self.max_region = 0
        self._next_cluster = 0
        self._next_region = 0

    # ------------------------------------------------------------------ state

    @property
    def idle(self) -> bool:
        return not self.pending and not any(c.active for c in self.clusters.values())

    @property
    def live_clusters(self) -> list[ClusterRecord]:
        return [c for c in self.clusters.values() if c.active]

    def stats(self) -> dict:
        return {
            'clusters': self._next_cluster,
            'max_level': self.max_tier,
            'max_region': self.max_region,
            'eta_events': len(self.eta_events),
            'detections': len(self.detections),
            'boundary_closures': self.boundary_closures,
        }

    def _log(self, t, cluster_id, action, region=None):
        entry = {'t': t, 'cluster_id': cluster_id, 'action': action,
                 'region': region.as_dict() if isinstance(region, Box) else region}
        self.actions.append(entry)
        return entry

    def action_log(self) -> str:
        """Action log as JSON lines."""
        return ''.join(json.dumps(a, sort_keys=True) + '\n' for a in self.actions)

    # ------------------------------------------------------------------ readings

    def _check(self, readings: Readings | None, t: int):
        if readings is None or readings.beta.shape != (self.L, self.L):
            msg = f"readings missing or malformed at round {t}"
            raise MissingReadingError(msg)

    def record_eta(self, readings: Readings, t: int):
        """Log every alpha change on a cell read this round as an eta detection event."""
        measured = readings.alpha != 0
        changed = measured & (readings.alpha != self.last_alpha)
        for y, x in np.argwhere(changed):
            self.eta_events.append((int(x), int(y), t))
        self.last_alpha = np.where(measured, readings.alpha, self.last_alpha)

    def _scan(self, readings: Readings, t: int):
        """
        Differences from the reference and the keys that could be read this round

        The differences are the detection events of the clean reference against this round;
        beta is read on every S3 cell, vertex and plaquette terms only where they are not masked.
        """
        s3 = ~readings.z3
        visible = set()
        for species, family in SPECIES_FAMILIES:
            readable = s3 if family == 'beta' else s3 & (readings.family(family) != MASKED)
            visible.update((species, int(x), int(y)) for y, x in np.argwhere(readable))
        differing = {(event.species, *event.site) for event in detect_round(self.reference, readings, t)
                     if event.species != SPECIES['alpha']}
        return differing, visible

    # ------------------------------------------------------------------ step

    def step(self, frame, readings: Readings, t: int) -> list[dict]:
        """
        Decode round t and act on the frame

        Returns:
            list[dict]: actions issued this round

        Raises:
            MissingReadingError: readings absent or of the wrong size
            DecoderEscalationError: a region would span the torus or hold two computational anyons
        """
        self._check(readings, t)
        start = len(self.actions)
        self.record_eta(readings, t)
        differing, visible = self._scan(readings, t)
        self.detections.extend(detect_round(self.previous, readings, t, self.homes, self.homes))
        self.previous = readings

        confirmed = {}
        for key, (_, kind) in sorted(self.pending.items()):
            if key not in visible:
                continue
            if kind == 'appear' and key in differing:
                confirmed[key] = (key[1], key[2], t)
            elif kind == 'vanish' and key not in differing:
                self._drop_defect(key)
        self.pending = {}

        for key in sorted(differing - self.defects.keys() - confirmed.keys()):
            self.pending[key] = (t, 'appear')
            self._log(t, None, 'defer', {'species': key[0], 'site': [key[1], key[2]]})
        for key in sorted((self.defects.keys() & visible) - differing):
            self.pending[key] = (t, 'vanish')

        if confirmed:
            touched, self._next_cluster = cluster_events(self.clusters, confirmed, t, self.L, self._next_cluster)
            for cluster_id in touched:
                cluster = self.clusters[cluster_id]
                for key in cluster.live:
                    self.defects[key] = cluster_id
                if cluster.status == ClusterStatus.UNGAUGED:
                    self._grow_open(frame, cluster, t)

        for cluster in sorted(self.live_clusters, key=lambda c: (c.birth, c.cluster_id)):
            if not cluster.active:
                continue
            if cluster.status == ClusterStatus.DEFERRED:
                if not cluster.live:
                    self._close(cluster, t, 'dissolve')
                elif age_rule(cluster, t):
                    cluster.status = ClusterStatus.RIPE
            if cluster.status == ClusterStatus.RIPE:
                self._open(frame, cluster, t)
            elif cluster.status == ClusterStatus.UNGAUGED and t >= cluster.region.dwell_deadline:
                self._settle(frame, cluster, t)
        return self.actions[start:]

    # ------------------------------------------------------------------ regions

    def _drop_defect(self, key):
        cluster_id = self.defects.pop(key, None)
        if cluster_id is not None and cluster_id in self.clusters:
            self.clusters[cluster_id].live.discard(key)

    def _reassign(self, cluster: ClusterRecord):
        for key in cluster.live:
            self.defects[key] = cluster.cluster_id

    def _homes_in(self, box: Box) -> list[tuple[int, int]]:
        return [h for h in self.homes if box.contains(*h)]

    def _home_disks(self, box: Box) -> Box:
        """`box` grown over the absorption disk of every home it holds."""
        for home in self._homes_in(box):
            box = box.union(Box.covering([home], self.L, inflate=1))
        return box

    def _guard(self, cluster: ClusterRecord, box: Box):
        if box.spans_torus:
            msg = f"cluster {cluster.cluster_id} needs a region spanning the torus"
            raise DecoderEscalationError(msg, cluster.cluster_id)
        if len(self._homes_in(box)) > 1:
            msg = f"cluster {cluster.cluster_id} needs a region holding two computational anyons"
            raise DecoderEscalationError(msg, cluster.cluster_id)

    def _collect(self, target: ClusterRecord, box: Box, merge: list):
        """Grow `box` over every live cluster it touches and every home disk it holds until stable."""
        merge = list(merge)
        changed = True
        while changed and not box.spans_torus:
            changed = False
            for other in self.live_clusters:
                if other is target or other in merge:
                    continue
                footprint = other.footprint(self.L)
                if footprint is not None and footprint.overlaps(box):
                    merge.append(other)
                    box = box.union(footprint)
                    changed = True
            grown = self._home_disks(box)
            if grown != box:
                box = grown
                changed = True
        return box, merge

    def _release_tracking(self, box: Box):
        for key in [k for k in self.defects if box.contains(k[1], k[2])]:
            self._drop_defect(key)
        for key in [k for k in self.pending if box.contains(k[1], k[2])]:
            del self.pending[key]

    def _open(self, frame, cluster: ClusterRecord, t: int):
        box = Box.covering(cluster.cells(live_only=True) or cluster.cells(), self.L, inflate=1)
        box, merge = self._collect(cluster, box, [])
        open_clusters = sorted((c for c in merge if c.region is not None), key=lambda c: (c.birth, c.cluster_id))
        if open_clusters:
            target = open_clusters[0]
            others = [c for c in merge if c is not target] + [cluster]
            self._widen(frame, target, target.region.box.union(box), t, others)
            return
        for other in merge:
            cluster.absorb(other, self.L)
            self._close(other, t, 'merge', into=cluster)
        self._reassign(cluster)
        box = Box.covering(cluster.cells(live_only=True) or cluster.cells(), self.L, inflate=1).union(box)
        self._guard(cluster, box)
        region = GaugeRegion(self._next_region, box, t, t + cluster.diameter + 2)
        self._next_region += 1
        ungauge_region(frame, region, t)
        cluster.region = region
        cluster.status = ClusterStatus.UNGAUGED
        self._link_home(cluster, t)
        self._release_tracking(box)
        self.max_region = max(self.max_region, box.span + 1)
        self._log(t, cluster.cluster_id, 'ungauge', box)

    def _widen(self, frame, target: ClusterRecord, box: Box, t: int, merge=()):
        box, merge = self._collect(target, box, merge)
        self._guard(target, box)
        absorbed = [c.region for c in merge if c.region is not None]
        extend_region(frame, target.region, box, t, absorbed)
        for other in merge:
            target.absorb(other, self.L)
            self._close(other, t, 'merge', into=target)
        self._reassign(target)
        target.region.dwell_deadline = max(target.region.dwell_deadline,
                                           t + max(target.diameter, box.span) + 2)
        self._link_home(target, t)
        self._release_tracking(box)
        self.max_region = max(self.max_region, box.span + 1)
        self._log(t, target.cluster_id, 'widen', box)

    def _grow_open(self, frame, cluster: ClusterRecord, t: int):
        cells = cluster.cells(live_only=True)
        if not cells:
            return
        box = cluster.region.box.union(Box.covering(cells, self.L, inflate=1))
        self._widen(frame, cluster, box, t)

    def _link_home(self, cluster: ClusterRecord, t: int):
        homes = self._homes_in(cluster.region.box)
        if homes and cluster.linked_absorber is None:
            cluster.linked_absorber = Absorber.worldline(homes[0][0], homes[0][1], 0, t)

    def _close(self, cluster: ClusterRecord, t: int, action: str, into: ClusterRecord | None = None):
        cluster.status = ClusterStatus.CLOSED
        for key in list(cluster.live):
            self._drop_defect(key)
        cluster.live = set()
        self.clusters.pop(cluster.cluster_id, None)
        self.closed.append(cluster)
        if action == 'merge':
            self._log(t, cluster.cluster_id, 'merge', {'into': into.cluster_id})
        elif action == 'dissolve':
            self._log(t, cluster.cluster_id, 'dissolve')

    def _settle(self, frame, cluster: ClusterRecord, t: int):
        region = cluster.region
        charge = evaluate_neutrality(frame, region)
        if charge == region.expected_charge:
            apply_correction(frame, region)
            self._log(t, cluster.cluster_id, 'correct', region.box)
            regauge_region(frame, region, t, self.rng)
            self._log(t, cluster.cluster_id, 'regauge', region.box)
            self._close(cluster, t, 'closed')
        else:
            logger.debug("cluster %d holds %s, expected %s", cluster.cluster_id, charge, region.expected_charge)
            self.handle_nonneutral(frame, cluster, t)

    def handle_nonneutral(self, frame, cluster: ClusterRecord, t: int):
        """
        Escalate one tier and absorb whatever lies within the new linking radius

        Clusters and computational homes in range are merged nearest first. At equal distance a
        home whose absorption disk holds bound charge comes first, then an empty home, then
        clusters by age and id. A home is skipped when the region already holds one. With
        nothing in range the region grows by the radius.
        """
        cluster.tier += 1
        self.max_tier = max(self.max_tier, cluster.tier)
        radius = cluster.radius
        box = cluster.region.box
        candidates = []
        for other in self.live_clusters:
            if other is cluster:
                continue
            footprint = other.footprint(self.L)
            if footprint is not None and footprint.distance(box) <= radius:
                candidates.append((footprint.distance(box), 2, other.birth, other.cluster_id, footprint, other))
        for home in self.homes:
            if not box.contains(*home) and box.distance_to(*home) <= radius:
                rank = 0 if frame.bound.get(home) else 1
                candidates.append((box.distance_to(*home), rank, -1, -1, Box.covering([home], self.L, inflate=1), None))
        grown, merge = box, []
        for *_, footprint, other in sorted(candidates, key=lambda c: c[:4]):
            trial = grown.union(footprint)
            if len(self._homes_in(trial)) > 1:
                continue
            grown = trial
            if other is not None:
                merge.append(other)
        if grown == box:
            grown = box.inflated(radius)
        self._widen(frame, cluster, grown, t, merge)

    # ------------------------------------------------------------------ end of run

    def finish(self, frame, t: int) -> int:
        """
        Route every cluster still live to the temporal boundary

        Returns:
            int: number of clusters closed this way
        """
        forced = 0
        for cluster in sorted(self.live_clusters, key=lambda c: (c.birth, c.cluster_id)):
            if cluster.region is not None:
                apply_correction(frame, cluster.region, force=True)
                cluster.region.dwell_deadline = min(cluster.region.dwell_deadline, t)
                regauge_region(frame, cluster.region, t, None, force=True)
            self._log(t, cluster.cluster_id, 'boundary', cluster.region.box if cluster.region else None)
            self._close(cluster, t, 'boundary')
            forced += 1
        self.pending = {}
        self.boundary_closures += forced
        return forced

