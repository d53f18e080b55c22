from .charges import (ALL_MICRO_CHARGES, CHARGES, DIMENSIONS, PARAFERMION_CONVENTION, VACUUM_MICRO, Charge,
                      MicroCharge, conjugate, orbit_of, quantum_dim)
from .fusion import (LISTED_RULES, FusionTable, complete_fusion_table, fuse, fusion_table, is_neutralizable,
                     possible_total_charges, total_dimension)

__all__ = [
    'ALL_MICRO_CHARGES', 'CHARGES', 'DIMENSIONS', 'PARAFERMION_CONVENTION', 'VACUUM_MICRO', 'Charge',
    'MicroCharge', 'conjugate', 'orbit_of', 'quantum_dim', 'LISTED_RULES', 'FusionTable',
    'complete_fusion_table', 'fuse', 'fusion_table', 'is_neutralizable', 'possible_total_charges',
    'total_dimension',
]
