from .checks import (check_gauging_round_trip, check_global_conjugation, check_identity, check_kappa_forms,
                     check_mutual_commutation, check_projector_completeness, check_spectrum,
                     check_ungauge_projection, prepare_ground_state, run_stabilizer_suite)
from .operators import (IDENTITY, OMEGA, Factor, LinearCombination, OperatorWord, SmallState, apply, basis_state,
                        commutator, random_state)
from .stabilizers import KINDS, LATTICES, SmallLattice, build_stabilizer

__all__ = [
    'check_gauging_round_trip', 'check_global_conjugation', 'check_identity', 'check_kappa_forms',
    'check_mutual_commutation', 'check_projector_completeness', 'check_spectrum', 'check_ungauge_projection',
    'prepare_ground_state', 'run_stabilizer_suite', 'IDENTITY', 'OMEGA', 'Factor', 'LinearCombination',
    'OperatorWord', 'SmallState', 'apply', 'basis_state', 'commutator', 'random_state', 'KINDS', 'LATTICES',
    'SmallLattice', 'build_stabilizer',
]
