from .clusters import BASE_TIER, ClusterRecord, ClusterStatus, age_rule, cluster_events
from .decoder import DecoderState
from .eta import apply_eta_correction, eta_homology, eta_is_trivial, global_eta_decode

__all__ = [
    'BASE_TIER', 'ClusterRecord', 'ClusterStatus', 'age_rule', 'cluster_events', 'DecoderState',
    'apply_eta_correction', 'eta_homology', 'eta_is_trivial', 'global_eta_decode',
]
