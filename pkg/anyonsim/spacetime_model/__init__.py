from .detectors import (MASKED, SPECIES, DetectorEvent, Readings, SyndromeStream, detect_round,
                        detectors_from_readings, expected_mu_sites)
from .faults import (FAMILIES, FAULT_KINDS, SPATIAL_KINDS, ErrorConfiguration, Fault, cube_failure_prob, dump_errors,
                     load_errors, sample_errors)
from .geometry import Absorber, AbsorberKind, SpacetimePoint, diameter, distance, r_components

__all__ = [
    'MASKED', 'SPECIES', 'DetectorEvent', 'Readings', 'SyndromeStream', 'detect_round', 'detectors_from_readings',
    'expected_mu_sites', 'FAMILIES', 'FAULT_KINDS', 'SPATIAL_KINDS', 'ErrorConfiguration', 'Fault',
    'cube_failure_prob', 'dump_errors', 'load_errors', 'sample_errors', 'Absorber', 'AbsorberKind',
    'SpacetimePoint', 'diameter', 'distance', 'r_components',
]
