"""
Phenomenological D(S3) frame

The qubit layer is tracked exactly: qubit_x is the mu branch-cut membrane (mu anyons sit on
plaquettes of odd membrane parity) and qubit_z carries eta strings (eta on vertices of odd
parity). The qutrit layer is tracked as Z3 micro-charges: e on vertices, m on plaquettes.
An e charge that crosses a membrane edge is conjugated; the membrane ledger keeps the running
deficit so that the total charge is conserved exactly.

A visible charge on an S3-phase site within L-infinity radius 1 of an S3-phase mu is bound to
that mu: it stays on its site, hidden from the stabilizer readings, and travels with the mu.
"""
from __future__ import annotations

import copy
import logging
from dataclasses import dataclass

import numpy as np

from anyonsim.anyon_algebra import MicroCharge
from anyonsim.components.lattice import H, V, Box, Torus
from anyonsim.errors import RegionError
from anyonsim.spacetime_model import Fault

logger = logging.getLogger(__name__)

ABSORPTION_RADIUS = 1
PAIRS = {'A': ('A1', 'A2'), 'B': ('B1', 'B2')}


@dataclass
class ComputationalAnyon:
    name: str
    pair: str
    home: tuple[int, int]
    position: tuple[int, int] | None = None

    def as_dict(self) -> dict:
        return {'name': self.name, 'pair': self.pair, 'home': list(self.home),
                'position': list(self.position) if self.position else None}


def _dilate(mask: np.ndarray, radius: int = ABSORPTION_RADIUS) -> np.ndarray:
    grown = np.zeros_like(mask)
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            grown |= np.roll(np.roll(mask, dy, axis=0), dx, axis=1)
    return grown


class FrameState:
    """
    Frame of one shot on an L x L torus; site arrays are indexed [y, x], edge arrays [d, y, x]
    """

    def __init__(self, L: int, eta_probability: float = 0.5):
        self.L = L
        self.torus = Torus(L)
        self.qubit_x = np.zeros((2, L, L), dtype=np.int8)
        self.qubit_z = np.zeros((2, L, L), dtype=np.int8)
        self.qutrit_x = np.zeros((2, L, L), dtype=np.int64)
        self.qutrit_z = np.zeros((2, L, L), dtype=np.int64)
        self.e_charge = np.zeros((L, L), dtype=np.int64)
        self.m_charge = np.zeros((L, L), dtype=np.int64)
        self.z3 = np.zeros((L, L), dtype=bool)
        self.bound: dict[tuple[int, int], list[list]] = {}
        self.ledger = 0
        self.anyons: list[ComputationalAnyon] = []
        self.pair_charges: dict[str, MicroCharge] = {}
        self.regions: dict = {}
        self.eta_probability = eta_probability

    def copy(self) -> FrameState:
        return copy.deepcopy(self)

    # ------------------------------------------------------------------ syndromes

    def mu_mask(self) -> np.ndarray:
        h, v = self.qubit_x[H], self.qubit_x[V]
        return (h ^ np.roll(h, -1, axis=0) ^ v ^ np.roll(v, -1, axis=1)).astype(bool)

    def mu_sites(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for y, x in np.argwhere(self.mu_mask())]

    def eta_mask(self) -> np.ndarray:
        h, v = self.qubit_z[H], self.qubit_z[V]
        return (h ^ np.roll(h, 1, axis=1) ^ v ^ np.roll(v, 1, axis=0)).astype(bool)

    def eta_sites(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for y, x in np.argwhere(self.eta_mask())]

    def hiding_mask(self) -> np.ndarray:
        """S3-phase cells whose vertex and plaquette readings are blocked by a nearby mu."""
        return _dilate(self.mu_mask() & ~self.z3) & ~self.z3

    def is_cut(self, edge) -> bool:
        d, x, y = edge
        return bool(self.qubit_x[d, y, x])

    def homes(self) -> set[tuple[int, int]]:
        return {a.home for a in self.anyons}

    def total_charge(self) -> MicroCharge:
        """Visible + bound + logical pair charges + membrane ledger, conserved by every operation."""
        e = int(self.e_charge.sum()) + self.ledger
        m = int(self.m_charge.sum())
        for charges in self.bound.values():
            for kind, _, value in charges:
                if kind == 'e':
                    e += value
                else:
                    m += value
        for charge in self.pair_charges.values():
            e += charge.e
            m += charge.m
        return MicroCharge(e, m)

    # ------------------------------------------------------------------ charges

    def add_charge(self, kind: str, site, value: int):
        x, y = site
        layer = self.e_charge if kind == 'e' else self.m_charge
        layer[y, x] = (layer[y, x] + value) % 3

    def charge_at(self, kind: str, site) -> int:
        x, y = site
        layer = self.e_charge if kind == 'e' else self.m_charge
        return int(layer[y, x])

    def move_e(self, source, edge, value: int):
        """Carry e charge `value` from `source` across `edge` to its other endpoint."""
        tail, head = self.torus.edge_endpoints(*edge)
        target = head if tuple(source) == tail else tail
        arriving = -value if self.is_cut(edge) else value
        self.add_charge('e', source, -value)
        self.add_charge('e', target, arriving)
        self.ledger = (self.ledger - (arriving - value)) % 3
        d, x, y = edge
        self.qutrit_z[d, y, x] += value if tuple(source) == tail else -value
        return target, arriving % 3

    def move_m(self, source, edge, value: int):
        first, second = self.torus.edge_plaquettes(*edge)
        target = second if tuple(source) == first else first
        self.add_charge('m', source, -value)
        self.add_charge('m', target, value)
        d, x, y = edge
        self.qutrit_x[d, y, x] += value if tuple(source) == first else -value
        return target, value % 3

    def absorb(self):
        """Bind every visible charge on an S3 site within radius 1 of an S3-phase mu."""
        mus = [p for p in self.mu_sites() if not self.z3[p[1], p[0]]]
        if not mus:
            return
        near = _dilate(self.mu_mask() & ~self.z3) & ~self.z3
        for kind, layer in (('e', self.e_charge), ('m', self.m_charge)):
            for y, x in np.argwhere((layer != 0) & near):
                site = (int(x), int(y))
                mu = min(mus, key=lambda p: (self.torus.distance(p, site), p[1], p[0]))
                self.bound.setdefault(mu, []).append([kind, site, int(layer[y, x])])
                layer[y, x] = 0
                logger.debug("%s charge at %s bound to mu at %s", kind, site, mu)

    def release(self, mu):
        """Make the charges bound to `mu` visible again on their own sites."""
        for kind, site, value in self.bound.pop(tuple(mu), []):
            self.add_charge(kind, site, value)

    # ------------------------------------------------------------------ membrane

    def toggle_membrane(self, edge):
        """Flip qubit_x on one edge: creates, moves or annihilates mu anyons."""
        d, x, y = edge
        p1, p2 = self.torus.edge_plaquettes(d, x, y)
        before = self.mu_mask()
        mu1, mu2 = bool(before[p1[1], p1[0]]), bool(before[p2[1], p2[0]])
        self.qubit_x[d, y, x] ^= 1
        if mu1 and mu2:
            for p in (p1, p2):
                self.release(p)
                for anyon in self.anyons:
                    if anyon.position == p:
                        anyon.position = None
        elif mu1 or mu2:
            source, target = (p1, p2) if mu1 else (p2, p1)
            self._carry_bound(source, target)
            for anyon in self.anyons:
                if anyon.position == source:
                    anyon.position = target
        self.absorb()

    def _carry_bound(self, source, target):
        dx = self.torus.axis_offset(source[0], target[0])
        dy = self.torus.axis_offset(source[1], target[1])
        carried = []
        for kind, site, value in self.bound.pop(tuple(source), []):
            new_site = self.torus.wrap(site[0] + dx, site[1] + dy)
            if kind == 'e':
                step = _step_edge(self.torus, site, dx, dy)
                if self.is_cut(step):
                    self.ledger = (self.ledger - (-2 * value)) % 3
                    value = -value % 3
            carried.append([kind, new_site, value])
        if carried:
            self.bound[tuple(target)] = carried

    # ------------------------------------------------------------------ faults

    def apply_fault(self, fault: Fault):
        """
        Apply one spatial fault; measFlip faults only touch readings and are ignored here
        """
        if fault.kind == 'measFlip':
            return
        edge = self.torus.edge(*fault.edge)
        d, x, y = edge
        if fault.kind == 'qubitX':
            self.toggle_membrane(edge)
        elif fault.kind == 'qubitZ':
            self.qubit_z[d, y, x] ^= 1
        elif fault.kind == 'qutritZ':
            a = fault.power
            tail, head = self.torus.edge_endpoints(*edge)
            arriving = a if self.is_cut(edge) else -a
            self.add_charge('e', tail, a)
            self.add_charge('e', head, arriving)
            self.ledger = (self.ledger - (a + arriving)) % 3
            self.qutrit_z[d, y, x] += a
            self.absorb()
        elif fault.kind == 'qutritX':
            a = fault.power
            first, second = self.torus.edge_plaquettes(*edge)
            self.add_charge('m', first, a)
            self.add_charge('m', second, -a)
            self.qutrit_x[d, y, x] += a
            self.absorb()

    def apply_faults(self, faults):
        for fault in faults:
            self.apply_fault(fault)

    # ------------------------------------------------------------------ snapshots

    def to_json(self) -> dict:
        return {
            'L': self.L,
            'mu': [list(p) for p in self.mu_sites()],
            'eta': [list(v) for v in self.eta_sites()],
            'e_charge': self.e_charge.tolist(),
            'm_charge': self.m_charge.tolist(),
            'z3': self.z3.astype(int).tolist(),
            'bound': [{'mu': list(mu), 'charges': [[k, list(s), v] for k, s, v in charges]}
                      for mu, charges in sorted(self.bound.items())],
            'anyons': [a.as_dict() for a in self.anyons],
            'pair_charges': {k: list(v.as_tuple()) for k, v in sorted(self.pair_charges.items())},
            'regions': sorted(self.regions),
        }


def _step_edge(torus: Torus, site, dx: int, dy: int):
    x, y = site
    if dx == 1:
        return torus.edge(H, x, y)
    if dx == -1:
        return torus.edge(H, x - 1, y)
    if dy == 1:
        return torus.edge(V, x, y)
    return torus.edge(V, x, y - 1)


def apply_fault(frame: FrameState, fault: Fault) -> FrameState:
    frame.apply_fault(fault)
    return frame


def default_positions(L: int, d: int) -> dict[str, tuple[int, int]]:
    x0 = y0 = (L - 2 * d) // 2
    return {'A1': (x0, y0), 'A2': (x0 + d, y0), 'B1': (x0, y0 + d), 'B2': (x0 + d, y0 + d)}


def pair_box(start, end, L: int) -> Box:
    """Box around the membrane of one computational pair, one cell of margin on every side."""
    dx = (end[0] - start[0]) % L
    dy = (end[1] - start[1]) % L
    return Box((start[0] - 1) % L, (start[1] - 1) % L, dx + 3, dy + 3, L)


def encode_logical(frame: FrameState, bit: int, d: int, positions: dict | None = None) -> FrameState:
    """
    Create the two computational mu pairs; bit 1 makes each pair fuse to e

    Raises:
        RegionError: two positions closer than d
    """
    positions = positions or default_positions(frame.L, d)
    names = sorted(positions)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            if frame.torus.distance(positions[a], positions[b]) < d:
                msg = f"computational anyons {a} and {b} are closer than d={d}"
                raise RegionError(msg)
    for pair, (first, second) in PAIRS.items():
        start, end = positions[first], positions[second]
        for edge in pair_box(start, end, frame.L).plaquette_path(frame.torus, start, end):
            frame.toggle_membrane(edge)
        frame.anyons.append(ComputationalAnyon(first, pair, start, start))
        frame.anyons.append(ComputationalAnyon(second, pair, end, end))
    frame.pair_charges['A'] = MicroCharge(1) if bit else MicroCharge()
    frame.pair_charges['B'] = MicroCharge(2) if bit else MicroCharge()
    logger.debug("encoded bit %d at %s", bit, positions)
    return frame
