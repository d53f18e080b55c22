"""
Chunk decomposition of spacetime error configurations, nugget extraction and the
nugget separation check.

A level-0 chunk is a single site; a level-n chunk is the disjoint union of two level-(n-1)
chunks whose union has L-infinity diameter at most Q^n / 2. E_n collects every site of some
level-n chunk and F_n = E_n minus E_{n+1}. Membership in E_n is decided by an exact depth-first
witness search. Once Q^n / 2 reaches the diameter of the whole configuration the bound no longer
constrains anything; that level is the last one resolved and holds every higher level as well.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from anyonsim.spacetime_model import ErrorConfiguration, diameter, r_components, sample_errors

logger = logging.getLogger(__name__)

STATISTICS_LEVELS = 4


def chunk_bound(Q: int, level: int) -> float:
    return Q ** level / 2


def separation_bound(Q: int, n: int, m: int) -> float:
    """A level-n nugget keeps nuggets of the same size or larger at least Q^(n+1)/3 away."""
    return Q ** (min(n, m) + 1) / 3


def displayed_separation_bound(Q: int, n: int, m: int) -> float:
    return Q ** max(n, m) / 3


def _distance_matrix(coords: np.ndarray, L: int | None) -> np.ndarray:
    gaps = np.abs(coords[:, None, :] - coords[None, :, :])
    if L is not None:
        gaps[..., :2] = np.minimum(gaps[..., :2] % L, L - gaps[..., :2] % L)
    return gaps.max(axis=2)


class _WitnessSearch:
    """Depth-first search for a level-n chunk containing a given site."""

    def __init__(self, dist: np.ndarray, Q: int, top_level: int):
        self.dist = dist
        self.Q = Q
        self.top_level = top_level
        self.allowed = np.ones(len(dist), dtype=bool)
        self._rows = {}

    def bound(self, level: int) -> float:
        return np.inf if level >= self.top_level else chunk_bound(self.Q, level)

    def find(self, level: int, anchor: int) -> tuple | None:
        return next(self._chunks(level, anchor, frozenset(), (), -1), None)

    def _within(self, site: int, limit: float) -> np.ndarray:
        key = (site, limit)
        if key not in self._rows:
            self._rows[key] = self.dist[site] <= limit
        return self._rows[key]

    def _candidates(self, constraints, floor):
        pinned = [(sites, limit) for sites, limit in constraints if sites]
        if pinned:
            sites, limit = min(pinned, key=lambda c: c[1])
            mask = self.allowed & self._within(sites[0], limit)
        else:
            mask = self.allowed.copy()
        if floor >= 0:
            mask[:floor + 1] = False
        return np.flatnonzero(mask)

    def _fits(self, i, constraints) -> bool:
        return all(self.dist[i, s] <= limit for sites, limit in constraints for s in sites)

    def _chunks(self, level, anchor, forbidden, constraints, floor):
        if level == 0:
            candidates = [anchor] if anchor is not None else self._candidates(constraints, floor)
            for i in candidates:
                i = int(i)
                if i not in forbidden and self._fits(i, constraints):
                    yield (i,)
            return
        scoped = constraints + (((), self.bound(level)),)
        for first in self._chunks(level - 1, anchor, forbidden, scoped, floor):
            grown = tuple((sites + first, limit) for sites, limit in scoped)
            # unanchored unions are enumerated once: the half holding the smallest index goes first
            second_floor = min(first) if anchor is None else floor
            for second in self._chunks(level - 1, None, forbidden | set(first), grown, second_floor):
                yield first + second


@dataclass
class ChunkDecomposition:
    Q: int
    L: int | None
    sites: list
    levels: list = field(default_factory=list)
    top_level: int = 1

    @property
    def m(self) -> int:
        return len(self.levels) - 1

    @property
    def differences(self) -> list[set]:
        """F_n = E_n minus E_(n+1)."""
        result = []
        for n, level in enumerate(self.levels):
            above = self.levels[n + 1] if n + 1 < len(self.levels) else set()
            result.append(level - above)
        return result

    def level_of(self) -> dict:
        return {site: n for n, f in enumerate(self.differences) for site in f}

    @property
    def capped(self) -> bool:
        """True when the last resolved level is the one whose bound covers the whole configuration."""
        return self.m >= self.top_level

    def nuggets(self) -> dict[int, list[list]]:
        """Q^n-connected components of each F_n."""
        return {n: r_components(f, self.Q ** n, self.L) for n, f in enumerate(self.differences) if f}

    def as_dict(self) -> dict:
        return {
            'Q': self.Q,
            'levels': [sorted(level) for level in self.levels],
            'differences': [sorted(f) for f in self.differences],
            'nuggets': {str(n): c for n, c in self.nuggets().items()},
            'capped': self.capped,
        }


def _points(errors) -> list:
    if isinstance(errors, ErrorConfiguration):
        return errors.points()
    return sorted({tuple(p) for p in errors})


def decompose(errors, Q: int, L: int | None = None) -> ChunkDecomposition:
    """
    Maximal chunk decomposition of an error configuration

    Args:
        errors: ErrorConfiguration or iterable of (x, y, t) sites
        Q (int): scale factor, at least 2
        L (int | None): spatial period of the torus, None for open space

    Returns:
        ChunkDecomposition: E_0 ⊇ E_1 ⊇ ... as sets of (x, y, t) sites
    """
    if Q < 2:
        msg = f"Q must be at least 2, got {Q}"
        raise ValueError(msg)
    sites = _points(errors)
    decomposition = ChunkDecomposition(Q, L, sites)
    if not sites:
        return decomposition
    decomposition.levels.append(set(sites))

    span = diameter(sites, L)
    top = 1
    while chunk_bound(Q, top) < span:
        top += 1
    decomposition.top_level = top

    coords = np.asarray(sites, dtype=int)
    search = _WitnessSearch(_distance_matrix(coords, L), Q, top)
    current = set(range(len(sites)))
    for level in range(1, top + 1):
        search.allowed[:] = False
        search.allowed[list(current)] = True
        found = set()
        for x in sorted(current):
            if x in found:
                continue
            chunk = search.find(level, x)
            if chunk is not None:
                found.update(chunk)
        if not found:
            break
        decomposition.levels.append({sites[i] for i in found})
        current = found
    logger.debug("decomposed %d sites into %d levels (top %d)", len(sites), len(decomposition.levels), top)
    return decomposition


def verify_nugget_separation(decomposition: ChunkDecomposition) -> dict:
    """
    Pairs of distinct nuggets closer than Q^(min level + 1)/3

    A violation is `overlap` when the lower-level site has an E_(n+1) site within Q^n/2, so its
    own chunks may share sites with denser levels; anything else is `genuine` and indicates a bug.
    Pairs closer than the displayed bound Q^(max level)/3 are counted separately.
    Neighbourhoods come from a periodic cKDTree and are filtered as arrays; only the pairs
    that break the bound are visited one by one.
    """
    Q, L = decomposition.Q, decomposition.L
    report = {'violations': [], 'genuine': 0, 'overlap': 0, 'displayed_form_pairs': 0}
    if not decomposition.sites:
        return report

    sites = decomposition.sites
    index = {site: i for i, site in enumerate(sites)}
    level_of = np.zeros(len(sites), dtype=int)
    nugget_of = np.zeros(len(sites), dtype=int)
    label = 0
    for n, components in decomposition.nuggets().items():
        for component in components:
            for site in component:
                level_of[index[site]] = n
                nugget_of[index[site]] = label
            label += 1
    coords = np.asarray(sites, dtype=float)
    levels = decomposition.levels
    if L is not None:
        horizon = 2 * (coords[:, 2].max() + Q ** (len(levels) + 1) + 2)
        tree = cKDTree(coords, boxsize=[L, L, horizon])
    else:
        tree = cKDTree(coords)
    dist = _distance_matrix(np.asarray(sites, dtype=int), L)
    near = {}

    def near_denser(i, n):
        if n + 1 >= len(levels):
            return False
        if n not in near:
            denser = [index[z] for z in levels[n + 1]]
            near[n] = (dist[:, denser] <= chunk_bound(Q, n)).any(axis=1)
        return bool(near[n][i])

    for i, x in enumerate(sites):
        n = int(level_of[i])
        bound = separation_bound(Q, n, n)
        found = np.asarray(tree.query_ball_point(coords[i], np.ceil(bound) - 1, p=np.inf), dtype=int)
        if not len(found):
            continue
        m = level_of[found]
        # partners of the same or a higher level, each unordered same-level pair once
        close = ((nugget_of[found] != nugget_of[i]) & (m >= n) & ~((m == n) & (found < i))
                 & (dist[i, found] < bound))
        for j in found[close]:
            j = int(j)
            y, m_j = sites[j], int(level_of[j])
            overlapping = near_denser(i, n) or (m_j == n and near_denser(j, n))
            kind = 'overlap' if overlapping else 'genuine'
            report[kind] += 1
            report['violations'].append({'sites': [list(x), list(y)], 'levels': [n, m_j],
                                         'distance': int(dist[i, j]), 'kind': kind})

    for j in range(len(sites)):
        m = int(level_of[j])
        radius = np.ceil(displayed_separation_bound(Q, m, m)) - 1
        if radius < 0:
            continue
        found = np.asarray(tree.query_ball_point(coords[j], radius, p=np.inf), dtype=int)
        report['displayed_form_pairs'] += int(np.count_nonzero(level_of[found] < m)) if len(found) else 0
    return report


def cluster_statistics(samples: int, p: float, L: int, T: int, Q: int, rng, levels: int = STATISTICS_LEVELS):
    """
    Mean number of level-n nuggets per sampled configuration, n < levels

    Returns:
        dict: {'per_level': [mean counts], 'samples', 'volume', 'p', 'Q'}
    """
    totals = np.zeros(levels)
    for _ in range(samples):
        decomposition = decompose(sample_errors(p, L, T, rng), Q, L)
        for n, components in decomposition.nuggets().items():
            if n < levels:
                totals[n] += len(components)
    return {'per_level': (totals / max(samples, 1)).tolist(), 'samples': samples, 'volume': L * L * T,
            'p': p, 'Q': Q}


def fit_double_exponential(table: dict) -> dict:
    """
    Smallest C with freq(n) <= volume * (C p)^(2^n) at every populated level
    """
    volume, p = table['volume'], table['p']
    per_level = table['per_level']
    estimates = []
    for n, freq in enumerate(per_level):
        if freq > 0 and p > 0:
            estimates.append((freq / volume) ** (1 / 2 ** n) / p)
    C = max(estimates) if estimates else 0.0
    bounds = [volume * (C * p) ** (2 ** n) for n in range(len(per_level))]
    return {
        'C': C,
        'bounds': bounds,
        'holds': all(freq <= bound * (1 + 1e-9) for freq, bound in zip(per_level, bounds)),
        'monotone': all(a >= b for a, b in zip(per_level, per_level[1:])),
    }
