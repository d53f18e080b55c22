"""
Cluster records of the just-in-time decoder and the commit rule

A defect is keyed by (species, x, y); its first confirmed detection is a spacetime point
(x, y, t). New defects are grouped by single linkage at the base radius, then joined to the
oldest live cluster whose linking radius (2**tier, or 2(d + 2) around an open region of a
cluster of diameter d) reaches them.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from anyonsim.components.lattice import Box
from anyonsim.spacetime_model import Absorber, diameter, distance, r_components

logger = logging.getLogger(__name__)

BASE_TIER = 2


class ClusterStatus(str, Enum):
    DEFERRED = 'deferred'
    RIPE = 'ripe'
    UNGAUGED = 'ungauged'
    CLOSED = 'closed'


@dataclass(eq=False)
class ClusterRecord:
    cluster_id: int
    events: dict = field(default_factory=dict)
    birth: int = 0
    last_growth: int = 0
    diameter: int = 0
    status: ClusterStatus = ClusterStatus.DEFERRED
    tier: int = BASE_TIER
    region: object = None
    live: set = field(default_factory=set)
    linked_absorber: Absorber | None = None

    @property
    def radius(self) -> int:
        return 2 ** self.tier

    @property
    def active(self) -> bool:
        return self.status != ClusterStatus.CLOSED

    def points(self) -> list[tuple[int, int, int]]:
        return list(self.events.values())

    def cells(self, live_only: bool = False) -> list[tuple[int, int]]:
        keys = self.live if live_only else self.events
        return sorted({(key[1], key[2]) for key in keys})

    def footprint(self, L: int) -> Box | None:
        """Region box when ungauged, otherwise the box around the live defects."""
        if self.region is not None:
            return self.region.box
        cells = self.cells(live_only=True) or self.cells()
        return Box.covering(cells, L, inflate=1) if cells else None

    def add(self, key, point, L: int):
        self.events.setdefault(key, point)
        self.live.add(key)
        self.last_growth = max(self.last_growth, point[2])
        self.diameter = diameter(self.points(), L)

    def absorb(self, other: ClusterRecord, L: int):
        self.events.update({k: v for k, v in other.events.items() if k not in self.events})
        self.live |= other.live
        self.birth = min(self.birth, other.birth)
        self.last_growth = max(self.last_growth, other.last_growth)
        self.tier = max(self.tier, other.tier)
        self.diameter = diameter(self.points(), L)
        if self.status == ClusterStatus.RIPE:
            self.status = ClusterStatus.DEFERRED
        other.status = ClusterStatus.CLOSED
        other.live = set()

    def as_dict(self) -> dict:
        return {
            'id': self.cluster_id,
            'birth': self.birth,
            'last_growth': self.last_growth,
            'diameter': self.diameter,
            'status': self.status.value,
            'tier': self.tier,
            'events': len(self.events),
            'region': self.region.as_dict() if self.region is not None else None,
        }


def age_rule(cluster: ClusterRecord, t: int) -> bool:
    """True once every initial detection is at least `diameter` rounds old."""
    if not cluster.events:
        msg = f"cluster {cluster.cluster_id} has no events"
        raise ValueError(msg)
    return min(t - p[2] for p in cluster.points()) >= cluster.diameter


def _reaches(cluster: ClusterRecord, point, L: int) -> bool:
    if cluster.region is not None:
        return cluster.region.box.distance_to(point[0], point[1]) <= 2 * (cluster.diameter + 2)
    return any(distance(point, p, L) <= cluster.radius for p in cluster.points())


def cluster_events(clusters: dict[int, ClusterRecord], new_events: dict, t: int, L: int, next_id: int):
    """
    Assign newly confirmed defects to clusters

    Args:
        clusters: live clusters by id, updated in place
        new_events: defect key -> first detection (x, y, t)
        t: current round
        L: spatial period
        next_id: id for the next new cluster

    Returns:
        (touched cluster ids, next free id)
    """
    by_point = {}
    for key, point in new_events.items():
        by_point.setdefault(point, []).append(key)
    touched = []
    for group in r_components(list(by_point), 2 ** BASE_TIER, L):
        group = [tuple(p) for p in group]
        candidates = sorted((c for c in clusters.values()
                             if c.active and any(_reaches(c, p, L) for p in group)),
                            key=lambda c: (c.birth, c.cluster_id))
        if candidates:
            target = candidates[0]
            for other in candidates[1:]:
                if other.region is None:
                    target.absorb(other, L)
                    logger.debug("cluster %d merged into %d", other.cluster_id, target.cluster_id)
        else:
            target = ClusterRecord(next_id, birth=t, last_growth=t)
            clusters[next_id] = target
            next_id += 1
        for point in group:
            for key in by_point[point]:
                target.add(key, point, L)
        if target.status == ClusterStatus.RIPE:
            target.status = ClusterStatus.DEFERRED
        if target.cluster_id not in touched:
            touched.append(target.cluster_id)
    return touched, next_id
