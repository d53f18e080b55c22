"""
End-of-run renormalization-group decode of eta detection events

Events are grouped at doubling radii; components holding an even number of events are paired
by minimum-weight matching and retired. An odd component waits for the next tier; one still
odd at the last tier is matched with every event owning a twin on the temporal wall at the
end of the run, so that at least one of its events goes to the wall.
"""
from __future__ import annotations

import logging
from itertools import combinations

import networkx as nx

from anyonsim.components.lattice import H, V
from anyonsim.spacetime_model import distance, r_components

logger = logging.getLogger(__name__)

WALL = 'wall'


def _is_wall(node) -> bool:
    return node[0] == WALL


def _match(component, L: int, t_end: int | None):
    graph = nx.Graph()
    for a, b in combinations(component, 2):
        graph.add_edge(a, b, weight=distance(a, b, L))
    if t_end is not None:
        twins = [(WALL, p) for p in component]
        for p, twin in zip(component, twins):
            graph.add_edge(p, twin, weight=max(0, t_end - p[2]))
        for a, b in combinations(twins, 2):
            graph.add_edge(a, b, weight=0)
    pairs, boundary = [], []
    for a, b in nx.min_weight_matching(graph, weight='weight'):
        if _is_wall(a) and _is_wall(b):
            continue
        if _is_wall(a) or _is_wall(b):
            boundary.append(b if _is_wall(a) else a)
        else:
            pairs.append(tuple(sorted((a, b))))
    return sorted(pairs), sorted(boundary)


def global_eta_decode(events, L: int, max_tier: int | None = None, t_end: int | None = None) -> dict:
    """
    Pair eta detection events (x, y, t)

    Args:
        events: detection points
        L: spatial period
        max_tier: last tier tried, by default large enough for one component to hold everything
        t_end: round of the temporal wall, the latest event by default

    Returns:
        dict: `pairs` (list of point pairs), `boundary` (points matched to the temporal wall),
            `tiers` used
    """
    remaining = sorted({tuple(p) for p in events})
    pairs, boundary = [], []
    tier = 0
    t_end = t_end if t_end is not None else max((p[2] for p in remaining), default=0)
    horizon = max([L] + [p[2] for p in remaining]) + 1
    max_tier = max_tier if max_tier is not None else max(1, int(horizon).bit_length() + 1)
    while remaining and tier <= max_tier:
        retired = set()
        for component in r_components(remaining, 2 ** tier, L):
            wall = None
            if len(component) % 2:
                if tier < max_tier:
                    continue
                wall = t_end
            matched, walled = _match(component, L, wall)
            pairs.extend(matched)
            boundary.extend(walled)
            retired.update(component)
        remaining = [p for p in remaining if p not in retired]
        tier += 1
    if boundary:
        logger.info("eta decode sent %d events to the temporal wall", len(boundary))
    return {'pairs': pairs, 'boundary': sorted(boundary), 'tiers': tier}


def apply_eta_correction(frame, pairs) -> int:
    """Toggle qubitZ along the spatial path of every matched pair; returns the edge count."""
    toggled = 0
    for a, b in pairs:
        for (d, x, y), _ in frame.torus.vertex_path((a[0], a[1]), (b[0], b[1])):
            frame.qubit_z[d, y, x] ^= 1
            toggled += 1
    return toggled


def eta_homology(frame) -> tuple[int, int]:
    """Winding parities of the qubitZ configuration around the x and y cycles."""
    winding_x = int(frame.qubit_z[H][:, 0].sum() % 2)
    winding_y = int(frame.qubit_z[V][0, :].sum() % 2)
    return winding_x, winding_y


def eta_is_trivial(frame) -> bool:
    return not frame.eta_mask().any() and eta_homology(frame) == (0, 0)
