"""
Spacetime points, the L-infinity metric and absorbers
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

import networkx as nx
import numpy as np
from scipy.spatial import cKDTree


@dataclass(frozen=True, order=True)
class SpacetimePoint:
    x: int
    y: int
    t: int

    def as_tuple(self) -> tuple[int, int, int]:
        return self.x, self.y, self.t


def _as_array(points) -> np.ndarray:
    """(n, 3) array of x, y, t from points, tuples (x, y, t) or a single point."""
    if isinstance(points, SpacetimePoint):
        points = [points]
    elif isinstance(points, tuple) and points and isinstance(points[0], (int, np.integer)):
        points = [points]
    rows = [p.as_tuple() if isinstance(p, SpacetimePoint) else tuple(p) for p in points]
    if not rows:
        msg = "distance needs nonempty arguments"
        raise ValueError(msg)
    return np.asarray(rows, dtype=int)


def distance(a, b, L: int | None = None) -> int:
    """
    L-infinity distance between points or regions; min over pairs for regions

    Args:
        a, b: a SpacetimePoint, an (x, y, t) tuple, or an iterable of either
        L (int | None): spatial period; time is never periodic

    Returns:
        int: max over axes of the coordinate gap, minimized over point pairs
    """
    left, right = _as_array(a), _as_array(b)
    gaps = np.abs(left[:, None, :] - right[None, :, :])
    if L is not None:
        gaps[..., :2] %= L
        gaps[..., :2] = np.minimum(gaps[..., :2], L - gaps[..., :2])
    return int(gaps.max(axis=2).min())


def r_components(points: Iterable, r: float, L: int | None = None) -> list[list[tuple[int, int, int]]]:
    """
    Group points whose chains of L-infinity steps never exceed r

    Uses a periodic cKDTree in space when L is given. Components are returned sorted,
    largest first, each sorted internally.
    """
    coords = sorted({p.as_tuple() if isinstance(p, SpacetimePoint) else tuple(p) for p in points})
    if not coords:
        return []
    data = np.asarray(coords, dtype=float)
    if L is not None:
        horizon = 2 * (data[:, 2].max() + r + 2)
        tree = cKDTree(data, boxsize=[L, L, horizon])
    else:
        tree = cKDTree(data)
    graph = nx.Graph()
    graph.add_nodes_from(range(len(coords)))
    graph.add_edges_from(tree.query_pairs(r, p=np.inf))
    components = [sorted(coords[i] for i in c) for c in nx.connected_components(graph)]
    return sorted(components, key=lambda c: (-len(c), c))


def diameter(points: Iterable, L: int | None = None) -> int:
    """Largest pairwise L-infinity distance; 0 for a single point."""
    data = _as_array(list(points))
    gaps = np.abs(data[:, None, :] - data[None, :, :])
    if L is not None:
        gaps[..., :2] = np.minimum(gaps[..., :2] % L, L - gaps[..., :2] % L)
    return int(gaps.max())


class AbsorberKind(str, Enum):
    SPATIAL_BOUNDARY = 'spatialBoundary'
    TEMPORAL_BOUNDARY = 'temporalBoundary'
    GAUGING_WALL = 'gaugingWall'
    COMPUTATIONAL_ANYON = 'computationalAnyonWorldline'
    ERROR_CLUSTER = 'errorClusterRegion'


@dataclass(frozen=True)
class Absorber:
    kind: AbsorberKind
    extent: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.extent:
            msg = f"absorber {self.kind} has an empty extent"
            raise ValueError(msg)

    def distance_to(self, region, L: int | None = None) -> int:
        return distance(self.extent, region, L)

    @classmethod
    def worldline(cls, x: int, y: int, t_start: int, t_end: int) -> Absorber:
        return cls(AbsorberKind.COMPUTATIONAL_ANYON,
                   frozenset(SpacetimePoint(x, y, t) for t in range(t_start, t_end + 1)))
