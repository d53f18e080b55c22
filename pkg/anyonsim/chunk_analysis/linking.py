"""
Clusters, the linking relation and linked trees
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from anyonsim.spacetime_model import diameter, distance

from .chunks import ChunkDecomposition, separation_bound

logger = logging.getLogger(__name__)


def linking_radius(Q: int, level: int) -> int:
    return 2 * (Q ** level + 2)


def tree_diameter_bound(Q: int, k: int) -> float:
    return 2 * (Q ** k + 2) + 8 * (Q ** k - 1) / (Q - 1) + 16 * k


def tree_separation_bound(Q: int, n: int) -> float:
    return Q ** (n + 1) / 4 - 2


@dataclass(frozen=True)
class Cluster:
    """A nugget and the region its decoder absorbs, which defaults to the nugget itself."""
    id: int
    level: int
    sites: frozenset
    region: frozenset = field(default=frozenset())

    @property
    def absorbing_region(self) -> frozenset:
        return self.region or self.sites


@dataclass
class LinkedTree:
    root: int
    members: list
    links: list
    levels: dict

    @property
    def level(self) -> int:
        return self.levels[self.root]

    def sites(self, clusters: dict) -> list:
        return sorted(set().union(*(clusters[i].sites for i in self.members)))


def clusters_from_decomposition(decomposition: ChunkDecomposition) -> list[Cluster]:
    clusters = []
    for n, components in sorted(decomposition.nuggets().items()):
        for component in components:
            clusters.append(Cluster(len(clusters), n, frozenset(component)))
    return clusters


def links(clusters: list[Cluster], Q: int, L: int | None = None) -> list[tuple[int, int]]:
    """
    Pairs (a, b) with a linked to b

    a is linked to b when level(a) <= level(b) and a comes within 2(Q^level(a) + 2) of b's
    absorbing region. Equal-level pairs are listed both ways.
    """
    result = []
    for a in clusters:
        for b in clusters:
            if a.id == b.id or a.level > b.level:
                continue
            if distance(a.sites, b.absorbing_region, L) <= linking_radius(Q, a.level):
                result.append((a.id, b.id))
    return result


def build_linked_trees(clusters: list[Cluster], Q: int, L: int | None = None) -> list[LinkedTree]:
    """
    Partition clusters into linked trees

    Each weakly connected component of the link graph is one tree, rooted at its largest cluster
    (the lowest id among ties).
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(c.id for c in clusters)
    graph.add_edges_from(links(clusters, Q, L))
    levels = {c.id: c.level for c in clusters}
    trees = []
    for component in nx.weakly_connected_components(graph):
        members = sorted(component)
        root = min(members, key=lambda i: (-levels[i], i))
        edges = sorted(graph.subgraph(members).edges())
        trees.append(LinkedTree(root, members, edges, {i: levels[i] for i in members}))
    trees.sort(key=lambda t: (-t.level, t.root))
    logger.debug("%d clusters form %d linked trees", len(clusters), len(trees))
    return trees


def linking_violations(clusters: list[Cluster], Q: int, L: int | None = None) -> dict:
    """
    Breaches of the three linking properties

    same_level: two clusters of equal level linked to each other.
    several_parents: a cluster linked to more than one larger cluster.
    shared_size: two clusters of the same smaller level linked to one cluster through the same
    stretch of its boundary, i.e. within 4(Q^p + 2) of each other.
    """
    lookup = {c.id: c for c in clusters}
    levels = {c.id: c.level for c in clusters}
    pairs = links(clusters, Q, L)
    same_level = sorted({tuple(sorted(p)) for p in pairs if levels[p[0]] == levels[p[1]]})
    parents, children = {}, {}
    for a, b in pairs:
        if levels[a] < levels[b]:
            parents.setdefault(a, []).append(b)
            children.setdefault((b, levels[a]), []).append(a)
    several_parents = sorted(a for a, bs in parents.items() if len(bs) > 1)
    shared_size = []
    for (b, p), members in sorted(children.items()):
        for i, first in enumerate(members):
            for second in members[i + 1:]:
                gap = distance(lookup[first].sites, lookup[second].sites, L)
                if gap <= 2 * linking_radius(Q, p):
                    shared_size.append((b, first, second))
    return {'same_level': same_level, 'several_parents': several_parents, 'shared_size': shared_size}


def tree_violations(trees: list[LinkedTree], clusters: list[Cluster], Q: int, L: int | None = None) -> dict:
    """Trees wider than the diameter bound and tree pairs closer than the separation bound."""
    lookup = {c.id: c for c in clusters}
    too_wide, too_close = [], []
    for tree in trees:
        sites = tree.sites(lookup)
        if diameter(sites, L) > tree_diameter_bound(Q, tree.level):
            too_wide.append(tree.root)
    for i, a in enumerate(trees):
        for b in trees[i + 1:]:
            n = min(a.level, b.level)
            if distance(a.sites(lookup), b.sites(lookup), L) < tree_separation_bound(Q, n):
                too_close.append((a.root, b.root))
    return {'diameter': too_wide, 'separation': too_close}


def generate_placements(Q: int, rng, levels=(0, 0, 0, 0, 1, 1), attempts: int = 200) -> list[Cluster]:
    """
    Adversarial cluster placements along a line in open space

    Clusters are laid down largest first. Each one is a level-n cluster of extent Q^n / 2 placed
    as close to an already placed cluster as the separation Q^(min level + 1)/3 allows, at a
    random spatial offset. Its absorbing region reaches 3Q^n/4 + 2 beyond it in time, which keeps
    the region diameter within 2(Q^n + 2).
    """
    placed: list[Cluster] = []
    for level in sorted(levels, reverse=True):
        extent = int(Q ** level // 2)
        for _ in range(attempts):
            if placed:
                anchor = placed[rng.integers(len(placed))]
                gap = int(np.ceil(separation_bound(Q, level, anchor.level))) + int(rng.integers(0, 2))
                sign = 1 if rng.random() < 0.5 else -1
                base = np.asarray(max(anchor.sites) if sign > 0 else min(anchor.sites))
                shift = sign * (gap + (0 if sign > 0 else extent))
                origin = base + np.array([int(rng.integers(-extent, extent + 1)), 0, shift])
            else:
                origin = np.zeros(3, dtype=int)
            sites = frozenset(tuple(int(v) for v in origin + np.array([0, 0, dt])) for dt in range(extent + 1))
            reach = 3 * Q ** level // 4 + 2
            region = frozenset(tuple(int(v) for v in origin + np.array([0, 0, dt]))
                               for dt in range(-reach, extent + reach + 1))
            candidate = Cluster(len(placed), level, sites, region)
            if all(distance(candidate.sites, c.sites) >= separation_bound(Q, level, c.level) for c in placed):
                placed.append(candidate)
                break
    return placed
