"""
Stabilizer readings of a frame, with the hiding rule, and the detectors of the gauging boundary
"""
from __future__ import annotations

import logging
from typing import Iterable

import numpy as np

from anyonsim.spacetime_model import MASKED, DetectorEvent, Fault, Readings

from .frame import FrameState

logger = logging.getLogger(__name__)


def measure_round(frame: FrameState, t: int, meas_faults: Iterable[Fault] = ()) -> Readings:
    """
    Read every stabilizer family for round t

    beta and alpha are read everywhere (alpha reads 0 on Z3 cells, where it is not part of the
    measured group). Vertex and plaquette terms report 0/1 on S3 cells and MASKED next to an
    S3-phase mu; on Z3 cells they report the Z3 charge 0..2.
    Only faults with kind measFlip and time t are applied.
    """
    beta = np.where(frame.mu_mask(), -1, 1)
    alpha = np.where(frame.eta_mask(), -1, 1)
    alpha[frame.z3] = 0
    hidden = frame.hiding_mask()
    vertex = np.where(frame.z3, frame.e_charge, (frame.e_charge != 0).astype(int))
    plaquette = np.where(frame.z3, frame.m_charge, (frame.m_charge != 0).astype(int))
    vertex[hidden] = MASKED
    plaquette[hidden] = MASKED

    for fault in meas_faults:
        if fault.kind != 'measFlip' or fault.t != t:
            continue
        x, y = frame.torus.wrap(fault.x, fault.y)
        if fault.family == 'beta':
            beta[y, x] = -beta[y, x]
        elif fault.family == 'alpha':
            alpha[y, x] = -alpha[y, x]
        else:
            reading = vertex if fault.family == 'vertex' else plaquette
            if frame.z3[y, x]:
                reading[y, x] = (reading[y, x] + fault.power) % 3
            elif reading[y, x] != MASKED:
                reading[y, x] = 1 - reading[y, x]
    return Readings(beta, alpha, vertex, plaquette, frame.z3.copy())


def boundary_events(previous: Readings, current: Readings, t: int) -> list[DetectorEvent]:
    """
    Detectors of cells whose phase changed between two consecutive rounds

    D^mu compares the two beta readings. D^e and D^m compare the charge status of the S3
    reading with the Z3 reading; masked readings give no detector.
    """
    changed = previous.z3 != current.z3
    events = []
    for y, x in np.argwhere(changed & (previous.beta != current.beta)):
        events.append(DetectorEvent(t, 'μ', (int(x), int(y)), boundary=True))
    for name, species in (('vertex', 'e'), ('plaquette', 'm')):
        before, after = previous.family(name), current.family(name)
        for y, x in np.argwhere(changed & (before != MASKED) & (after != MASKED)):
            if bool(before[y, x]) != bool(after[y, x]):
                value = int(after[y, x]) if current.z3[y, x] else int(before[y, x])
                events.append(DetectorEvent(t, species, (int(x), int(y)), boundary=True, value=value))
    if events:
        logger.debug("%d boundary events at t=%d", len(events), t)
    return sorted(events)
