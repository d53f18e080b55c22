from .frame import ComputationalAnyon, FrameState, apply_fault, default_positions, encode_logical, pair_box
from .gauging import (CorrectionPlan, GaugeRegion, apply_correction, evaluate_neutrality, extend_region,
                      logical_charges, pair_bits, plan_correction, readout_logical, regauge_region,
                      ungauge_region)
from .measurement import boundary_events, measure_round


def total_charge(frame: FrameState):
    return frame.total_charge()


__all__ = [
    'ComputationalAnyon', 'FrameState', 'apply_fault', 'default_positions', 'encode_logical', 'pair_box',
    'CorrectionPlan', 'GaugeRegion', 'apply_correction', 'evaluate_neutrality', 'extend_region', 'logical_charges',
    'pair_bits', 'plan_correction', 'readout_logical', 'regauge_region', 'ungauge_region', 'boundary_events',
    'measure_round', 'total_charge',
]
