"""
Engineered decoder traces, driven by `verify pipeline`
"""
import numpy as np

from anyonsim.components.lattice import H, V, Box
from anyonsim.jit_decoder import DecoderState
from anyonsim.sim_engine import FrameState, encode_logical, measure_round, readout_logical
from anyonsim.spacetime_model import ErrorConfiguration, Fault

TRACE_L = 24
TRACE_START = 3


def drive(frame, decoder, faults, rounds, start=1):
    """Faults, readings and decoding for `rounds` rounds; first idle round after the last fault, or None."""
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


def engineered_cluster(d, x, y, direction, t, L=TRACE_L):
    """e string of length d from (x, y); d = 0 is a lone vertex measurement flip."""
    if d == 0:
        return [Fault(t, x, y, 'measFlip', family='vertex')], [(x, y)]
    if direction == H:
        faults = [Fault(t, (x + i) % L, y, 'qutritZ', direction=H) for i in range(d)]
        return faults, [(x, y), ((x + d) % L, y)]
    faults = [Fault(t, x, (y + i) % L, 'qutritZ', direction=V) for i in range(d)]
    return faults, [(x, y), (x, (y + d) % L)]


def isolated_cluster_trace(d, rng, measurement_flip=False, L=TRACE_L):
    x, y = (int(v) for v in rng.integers(0, L, size=2))
    direction = int(rng.integers(0, 2))
    faults, support = engineered_cluster(d, x, y, direction, TRACE_START, L)
    if measurement_flip:
        faults.append(Fault(TRACE_START + 1, x, y, 'measFlip', family='vertex'))
    frame = FrameState(L)
    decoder = DecoderState(L)
    finished = drive(frame, decoder, faults, 5 * (d + 2) + 6)
    reach = 0
    for action in decoder.actions:
        if action['action'] in ('ungauge', 'widen'):
            box = Box(L=L, **action['region'])
            reach = max([reach] + [min(frame.torus.distance(c, s) for s in support) for c in box.cells()])
    lifetime = None if finished is None else finished - TRACE_START
    clean = not frame.e_charge.any() and not frame.m_charge.any() and not frame.z3.any()
    return {
        'd': d,
        'origin': [x, y],
        'measurement_flip': measurement_flip,
        'lifetime': lifetime,
        'reach': reach,
        'pass': clean and lifetime is not None and lifetime < 5 * (d + 2) and reach <= 4 * d + 7,
    }


def hiding_trace(L=16, d=4):
    """Pair created next to a computational mu, one half hidden, revealed when the region reaches the home."""
    frame = encode_logical(FrameState(L), 0, d)
    home = sorted(frame.homes())[0]
    decoder = DecoderState(L, homes=frame.homes())
    frame.apply_fault(Fault(1, home[0] - 2, home[1], 'qutritZ', direction=H))
    hidden = sum(len(charges) for charges in frame.bound.values())
    for t in range(1, 6 * (d + 2)):
        decoder.step(frame, measure_round(frame, t), t)
    return {
        'hidden': hidden,
        'actions': [a['action'] for a in decoder.actions],
        'readout': readout_logical(frame),
        'pass': (hidden == 1 and decoder.idle and not frame.bound
                 and not frame.e_charge.any() and readout_logical(frame) == 0),
    }


def run_pipeline_suite(placements=100, seed=0, max_d=6):
    records = []
    for d in range(max_d + 1):
        for measurement_flip in (False, True):
            rng = np.random.default_rng([seed, d, int(measurement_flip)])
            traces = [isolated_cluster_trace(d, rng, measurement_flip) for _ in range(placements)]
            failed = [t for t in traces if not t['pass']]
            records.append({
                'check': f'isolated-cluster-d{d}' + ('-flip' if measurement_flip else ''),
                'placements': placements,
                'max_lifetime': max((t['lifetime'] or 0) for t in traces),
                'max_reach': max(t['reach'] for t in traces),
                'failed': failed[:5],
                'pass': not failed,
            })
    hiding = hiding_trace()
    records.append({'check': 'hiding-and-reveal', **hiding})
    return {'suite': 'pipeline', 'records': records, 'passed': all(r['pass'] for r in records)}
