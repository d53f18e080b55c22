"""
Ungauging and regauging of rectangular regions, neutrality evaluation and in-region corrections

Inside an ungauged region the D(S3) frame reads as a Z3 toric code: charges bound to a mu are
released onto their own sites, the membrane shows up as sigma^Z strings ending on the mu
plaquettes, and every charge can be transported and fused with qutrit strings.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from anyonsim.anyon_algebra import Charge, MicroCharge, orbit_of
from anyonsim.components.lattice import Box
from anyonsim.errors import NeutralityError, RegionError

from .frame import PAIRS, FrameState, pair_box

logger = logging.getLogger(__name__)


@dataclass
class GaugeRegion:
    region_id: int
    box: Box
    open_time: int
    dwell_deadline: int
    expected_charge: Charge | None = None

    @property
    def cells(self) -> list[tuple[int, int]]:
        return self.box.cells()

    def mask(self) -> np.ndarray:
        return box_mask(self.box)

    def as_dict(self) -> dict:
        return {
            'id': self.region_id,
            'box': self.box.as_dict(),
            'open_time': self.open_time,
            'dwell_deadline': self.dwell_deadline,
            'expected_charge': str(self.expected_charge) if self.expected_charge else None,
        }


@dataclass
class CorrectionPlan:
    """Ordered charge moves inside one region and the charge they leave behind."""
    moves: list = field(default_factory=list)
    charge: Charge = Charge.VACUUM
    residual: MicroCharge = MicroCharge()
    root_vertex: tuple[int, int] | None = None
    root_plaquette: tuple[int, int] | None = None

    def as_dict(self) -> dict:
        return {'moves': len(self.moves), 'charge': str(self.charge), 'residual': list(self.residual.as_tuple())}


def box_mask(box: Box) -> np.ndarray:
    mask = np.zeros((box.L, box.L), dtype=bool)
    for x, y in box.cells():
        mask[y, x] = True
    return mask


def _homes_inside(frame: FrameState, box: Box) -> list[tuple[int, int]]:
    return sorted({a.home for a in frame.anyons if box.contains(*a.home)})


def _loop_report(frame: FrameState, region: GaugeRegion, released: int) -> dict:
    mus = [p for p in frame.mu_sites() if region.box.contains(*p)]
    strings = sorted(e for e in region.box.edges(frame.torus) if frame.is_cut(e))
    return {
        'region': region.region_id,
        'closed': not mus,
        'endpoints': [list(p) for p in mus],
        'string_edges': [list(e) for e in strings],
        'released': released,
    }


def _flip_to_z3(frame: FrameState, cells) -> int:
    released = 0
    for x, y in cells:
        frame.z3[y, x] = True
    for mu in frame.mu_sites():
        if frame.z3[mu[1], mu[0]] and mu in frame.bound:
            released += len(frame.bound[mu])
            frame.release(mu)
    return released


def ungauge_region(frame: FrameState, region: GaugeRegion, t: int) -> dict:
    """
    Flip a region into the Z3 phase at time t

    Boundary detectors are formed from the next reading by `boundary_events`.

    Returns:
        dict: loop report; `closed` is True when no mu sits inside

    Raises:
        RegionError: part of the box is already ungauged, or it holds two computational anyons
    """
    mask = region.mask()
    if (frame.z3 & mask).any():
        msg = f"region {region.region_id} overlaps a region that is already ungauged"
        raise RegionError(msg)
    homes = _homes_inside(frame, region.box)
    if len(homes) > 1:
        msg = f"region {region.region_id} contains {len(homes)} computational anyons"
        raise RegionError(msg)
    if region.expected_charge is None:
        region.expected_charge = Charge.MU if homes else Charge.VACUUM
    region.open_time = t
    released = _flip_to_z3(frame, region.cells)
    frame.regions[region.region_id] = region
    report = _loop_report(frame, region, released)
    logger.debug("ungauged region %d at t=%d: %s", region.region_id, t, region.box.as_dict())
    return report


def extend_region(frame: FrameState, region: GaugeRegion, box: Box, t: int, absorbed=()) -> dict:
    """
    Widen an open region to `box`, taking over the open regions listed in `absorbed`

    Raises:
        RegionError: the new box meets an ungauged cell owned by another region, or holds
            two computational anyons
    """
    owned = region.mask()
    for other in absorbed:
        owned |= other.mask()
    new_mask = box_mask(box)
    if (frame.z3 & new_mask & ~owned).any():
        msg = f"extension of region {region.region_id} overlaps another ungauged region"
        raise RegionError(msg)
    homes = _homes_inside(frame, box)
    if len(homes) > 1:
        msg = f"extension of region {region.region_id} contains {len(homes)} computational anyons"
        raise RegionError(msg)
    for other in absorbed:
        frame.regions.pop(other.region_id, None)
    fresh = [(int(x), int(y)) for y, x in np.argwhere(new_mask & ~frame.z3)]
    region.box = box
    region.expected_charge = Charge.MU if homes else Charge.VACUUM
    released = _flip_to_z3(frame, fresh)
    frame.regions[region.region_id] = region
    logger.debug("extended region %d at t=%d to %s", region.region_id, t, box.as_dict())
    return _loop_report(frame, region, released)


def _require_ungauged(frame: FrameState, region: GaugeRegion):
    if not (frame.z3 | ~region.mask()).all():
        msg = f"region {region.region_id} is not fully ungauged"
        raise RegionError(msg)


def _charged(frame: FrameState, kind: str, cells) -> list[tuple[int, int]]:
    return [c for c in cells if frame.charge_at(kind, c)]


def _plan(work: FrameState, box: Box, home: tuple[int, int] | None) -> CorrectionPlan:
    """Fuse everything inside `box` on `work`, recording each move."""
    torus = work.torus
    cells = box.cells()
    moves = []

    def fuse(kind, path_of, move):
        sites = _charged(work, kind, cells)
        while len(sites) >= 2:
            a = sites.pop(0)
            b = min(sites, key=lambda s: torus.distance(a, s))
            current, value = a, work.charge_at(kind, a)
            for step in path_of(a, b):
                moves.append((kind, current, step, value))
                current, value = move(current, step, value)
            if not work.charge_at(kind, b):
                sites.remove(b)
        return sites[0] if sites else None

    # charges travel against the membrane as it stands, before any mu is moved
    root_vertex = fuse('e', lambda a, b: [edge for edge, _ in box.vertex_path(torus, a, b)], work.move_e)
    root_plaquette = fuse('m', lambda a, b: box.plaquette_path(torus, a, b), work.move_m)

    def walk_mu(start, end):
        for edge in box.plaquette_path(torus, start, end):
            work.toggle_membrane(edge)
            moves.append(('membrane', edge))

    mus = [p for p in work.mu_sites() if box.contains(*p)]
    if home is not None and home not in mus and len(mus) % 2 == 1:
        nearest = min(mus, key=lambda p: (torus.distance(p, home), p[1], p[0]))
        walk_mu(nearest, home)
        mus = [p for p in work.mu_sites() if box.contains(*p)]
    free = sorted((p for p in mus if p != home), key=lambda p: (p[1], p[0]))
    while len(free) >= 2:
        a = free.pop(0)
        b = min(free, key=lambda p: (torus.distance(a, p), p[1], p[0]))
        free.remove(b)
        walk_mu(a, b)

    residual = MicroCharge(work.charge_at('e', root_vertex) if root_vertex is not None else 0,
                           work.charge_at('m', root_plaquette) if root_plaquette is not None else 0)
    left = [p for p in work.mu_sites() if box.contains(*p)]
    if not left:
        charge = orbit_of(residual)
    elif len(left) == 1 and residual.is_vacuum:
        charge = Charge.MU
    else:
        charge = Charge.PHI
    return CorrectionPlan(moves, charge, residual, root_vertex, root_plaquette)


def _home_of(frame: FrameState, region: GaugeRegion):
    homes = _homes_inside(frame, region.box)
    return homes[0] if homes else None


def plan_correction(frame: FrameState, region: GaugeRegion) -> CorrectionPlan:
    """
    Deterministic in-region pairing

    e and m charges are fused first, greedily, each one carried to its nearest charged neighbour
    across the membrane as it stands; then the mu anyons are paired, the one nearest a
    computational home being walked back to it.
    Computed on a copy.
    """
    _require_ungauged(frame, region)
    return _plan(frame.copy(), region.box, _home_of(frame, region))


def evaluate_neutrality(frame: FrameState, region: GaugeRegion) -> Charge:
    """Total charge of an ungauged region; eta is excluded and decoded globally."""
    return plan_correction(frame, region).charge


def _execute(frame: FrameState, move):
    kind = move[0]
    if kind == 'membrane':
        frame.toggle_membrane(move[1])
    elif kind == 'e':
        frame.move_e(move[1], move[2], move[3])
    else:
        frame.move_m(move[1], move[2], move[3])


def apply_correction(frame: FrameState, region: GaugeRegion, plan: CorrectionPlan | None = None,
                     force: bool = False) -> CorrectionPlan:
    """
    Carry out a correction plan on the frame

    With `force`, a non-neutral plan is executed anyway (temporal boundary of the run).

    Raises:
        RegionError: region not ungauged
        NeutralityError: the plan does not leave exactly the expected charge
    """
    _require_ungauged(frame, region)
    plan = plan or plan_correction(frame, region)
    expected = region.expected_charge or Charge.VACUUM
    if not force and plan.charge != expected:
        msg = f"pairing leaves {plan.charge} in region {region.region_id}, expected {expected}"
        raise NeutralityError(msg)
    for move in plan.moves:
        _execute(frame, move)
    if not force and _visible_charge(frame, region):
        msg = f"correction left visible charge in region {region.region_id}"
        raise NeutralityError(msg)
    logger.debug("corrected region %d with %d moves", region.region_id, len(plan.moves))
    return plan


def _visible_charge(frame: FrameState, region: GaugeRegion) -> bool:
    mask = region.mask()
    return bool((frame.e_charge[mask] != 0).any() or (frame.m_charge[mask] != 0).any())


def regauge_region(frame: FrameState, region: GaugeRegion, t: int, rng=None, force: bool = False) -> list:
    """
    Return a corrected region to the S3 phase

    Each boundary edge emits an eta pair with probability frame.eta_probability when an rng
    is given.

    Returns:
        list: boundary edges whose qubitZ value was toggled

    Raises:
        RegionError: called before the dwell deadline
        NeutralityError: charge left inside (unless `force`)
    """
    if t < region.dwell_deadline:
        msg = f"region {region.region_id} regauged at t={t} before its deadline {region.dwell_deadline}"
        raise RegionError(msg)
    mask = region.mask()
    if not force:
        mus = sum(1 for p in frame.mu_sites() if mask[p[1], p[0]])
        allowed = 1 if region.expected_charge == Charge.MU else 0
        if _visible_charge(frame, region) or mus != allowed:
            msg = f"region {region.region_id} is not neutral at regauge"
            raise NeutralityError(msg)
    frame.z3[mask] = False
    emitted = []
    if rng is not None and frame.eta_probability > 0:
        for edge in region.box.boundary_edges(frame.torus):
            if rng.random() < frame.eta_probability:
                d, x, y = edge
                frame.qubit_z[d, y, x] ^= 1
                emitted.append(edge)
    frame.absorb()
    frame.regions.pop(region.region_id, None)
    logger.debug("regauged region %d at t=%d, %d eta emissions", region.region_id, t, len(emitted))
    return emitted


def pair_boxes(frame: FrameState) -> dict[str, Box]:
    boxes = {}
    homes = {a.name: a.home for a in frame.anyons}
    for pair, (first, second) in PAIRS.items():
        if first in homes and second in homes:
            boxes[pair] = pair_box(homes[first], homes[second], frame.L)
    return boxes


def logical_charges(frame: FrameState) -> dict[str, Charge]:
    """
    Fusion channel of each computational pair, read by ungauging its enclosing box on a copy

    Raises:
        RegionError: the two pair boxes overlap
    """
    boxes = pair_boxes(frame)
    if len(boxes) == 2 and boxes['A'].overlaps(boxes['B']):
        msg = "readout regions of the two computational pairs overlap"
        raise RegionError(msg)
    work = frame.copy()
    for box in boxes.values():
        _flip_to_z3(work, box.cells())
    charges = {}
    for pair, box in boxes.items():
        plan = _plan(work, box, None)
        total = plan.residual + frame.pair_charges.get(pair, MicroCharge())
        charges[pair] = plan.charge if plan.charge in (Charge.MU, Charge.PHI) else orbit_of(total)
    return charges


def pair_bits(frame: FrameState) -> dict[str, int]:
    """Bit read from each pair: 0 for vacuum or eta, 1 otherwise."""
    return {pair: 0 if charge in (Charge.VACUUM, Charge.ETA) else 1
            for pair, charge in logical_charges(frame).items()}


def readout_logical(frame: FrameState) -> int | None:
    """The bit both pairs agree on, None when they disagree."""
    bits = set(pair_bits(frame).values())
    return bits.pop() if len(bits) == 1 else None
