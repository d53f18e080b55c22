"""
Memory experiment: encode, evolve with just-in-time decoding, decode eta globally, read out
"""
from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from anyonsim.components.reporting import show_progress, to_json, wilson_interval
from anyonsim.errors import ConfigError, DecoderEscalationError
from anyonsim.jit_decoder import DecoderState, apply_eta_correction, eta_is_trivial, global_eta_decode
from anyonsim.sim_engine import FrameState, boundary_events, encode_logical, measure_round, readout_logical
from anyonsim.spacetime_model import cube_failure_prob, sample_errors

from .run_config import RunConfig, coerce

logger = logging.getLogger(__name__)


def shot_rng(config: RunConfig, shot_index: int):
    return np.random.default_rng([config.master_seed, shot_index])


def _decode_round(frame, decoder, faults, t, previous):
    frame.apply_faults(faults)
    readings = measure_round(frame, t, faults)
    wall = boundary_events(previous, readings, t)
    actions = decoder.step(frame, readings, t)
    return readings, wall, actions


def run_shot(config: RunConfig, shot_index: int, errors=None, keep_log: bool = False,
             dump_frames: bool = False) -> dict:
    """
    One shot of the memory experiment

    The shot draws its bit (shot_index mod 2) and its faults from its own generator, so a shot
    can be replayed alone. `errors` replaces the sampled configuration. Clusters still open
    after the flush are routed to the temporal boundary and the shot is scored on its readout.
    An escalated shot has lost its bit: the output is a guess from the shot generator, wrong
    half the time.

    Returns:
        dict: outcome with bit_in, bit_out, failure, reasons, escalated and decoder stats; `actions`
            (and `frames`) when asked for
    """
    started = time.perf_counter()
    rng = shot_rng(config, shot_index)
    bit = shot_index % 2
    frame = FrameState(config.L, eta_probability=config.eta_probability if config.eta_emission else 0.0)
    encode_logical(frame, bit, config.separation)
    decoder = DecoderState(config.L, homes=frame.homes(), rng=rng if config.eta_emission else None)
    if errors is None:
        p = cube_failure_prob(config.eps, config.N)
        errors = sample_errors(p, config.L, config.T, rng, measurement_noise=config.measurement_noise)

    reasons = []
    frames = []
    wall_events = 0
    escalated = False
    t = 0
    previous = measure_round(frame, t)
    try:
        for t in range(1, config.T + 1):
            previous, wall, _ = _decode_round(frame, decoder, errors.at(t), t, previous)
            wall_events += len(wall)
            if dump_frames:
                frames.append({'t': t, 'frame': frame.to_json()})
        for _ in range(config.flush_cap):
            t += 1
            previous, wall, _ = _decode_round(frame, decoder, (), t, previous)
            wall_events += len(wall)
            if dump_frames:
                frames.append({'t': t, 'frame': frame.to_json()})
            if decoder.idle:
                break
        decoder.finish(frame, t)
        t += 1
        decoder.record_eta(measure_round(frame, t), t)
    except DecoderEscalationError as exc:
        logger.debug("shot %d escalated: %s", shot_index, exc)
        escalated = True

    if escalated:
        # the decoder gave the bit up; the harness guesses it
        bit_out = int(rng.integers(0, 2))
        if bit_out != bit:
            reasons.append('escalation')
    else:
        eta = global_eta_decode(decoder.eta_events, config.L, t_end=t)
        apply_eta_correction(frame, eta['pairs'])
        if not eta_is_trivial(frame):
            reasons.append('eta-homology')
        bit_out = readout_logical(frame)
        if bit_out is None:
            reasons.append('pair-mismatch')
        elif bit_out != bit:
            reasons.append('readout')

    outcome = {
        'shot': shot_index,
        'bit_in': bit,
        'bit_out': bit_out,
        'failure': bool(reasons),
        'reasons': reasons,
        'escalated': escalated,
        'faults': len(errors),
        'rounds': t,
        'stats': {**decoder.stats(), 'wall_events': wall_events},
        'runtime_ms': (time.perf_counter() - started) * 1000.0,
    }
    if keep_log:
        outcome['actions'] = decoder.actions
    if dump_frames:
        outcome['frames'] = frames
    return outcome


@dataclass
class RunReport:
    config: RunConfig
    outcomes: list = field(default_factory=list)

    @property
    def shots(self) -> int:
        return len(self.outcomes)

    @property
    def failures(self) -> int:
        return sum(1 for o in self.outcomes if o['failure'])

    @property
    def fail_rate(self) -> float:
        return self.failures / self.shots if self.shots else 0.0

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.failures, self.shots)

    @property
    def mean_max_level(self) -> float:
        return float(np.mean([o['stats']['max_level'] for o in self.outcomes])) if self.outcomes else 0.0

    @property
    def mean_runtime_ms(self) -> float:
        return float(np.mean([o['runtime_ms'] for o in self.outcomes])) if self.outcomes else 0.0

    def as_dict(self, timing: bool = False) -> dict:
        """Report payload; timing is left out unless asked for so that the bytes replay exactly."""
        skip = () if timing else ('runtime_ms',)
        ci_lo, ci_hi = self.interval
        return {
            'config': self.config.as_dict(),
            'shots': self.shots,
            'failures': self.failures,
            'fail_rate': self.fail_rate,
            'ci': [ci_lo, ci_hi],
            'outcomes': [{k: v for k, v in o.items() if k not in skip} for o in self.outcomes],
        }

    def to_json(self) -> str:
        return to_json(self.as_dict())


def run_memory(config: RunConfig, workers: int = 1, quiet: bool = True) -> RunReport:
    """All shots of a config; the fold over shots is ordered by shot index whatever the worker count."""
    shots = tqdm(range(config.shots), desc=f'L={config.L} eps={config.eps:g}', disable=not show_progress(quiet))
    outcomes = Parallel(n_jobs=workers)(delayed(run_shot)(config, i) for i in shots)
    report = RunReport(config, list(outcomes))
    logger.info("L=%d eps=%g: %d/%d failures", config.L, config.eps, report.failures, report.shots)
    return report


def load_report(file_path: str) -> RunReport:
    try:
        with open(file_path, encoding='utf-8') as handle:
            payload = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        msg = f"cannot read report {file_path}: {exc}"
        raise ConfigError(msg) from None
    return RunReport(RunConfig(**coerce(payload['config'])), payload.get('outcomes', []))
