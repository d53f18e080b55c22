from .chunks import (ChunkDecomposition, chunk_bound, cluster_statistics, decompose, fit_double_exponential,
                     separation_bound, verify_nugget_separation)
from .constants import INEQUALITIES, KNOWN_DISCREPANCIES, constants_table, minimal_Q, threshold_estimate
from .linking import (Cluster, LinkedTree, build_linked_trees, clusters_from_decomposition, generate_placements,
                      linking_radius, linking_violations, tree_diameter_bound, tree_violations)

__all__ = [
    'ChunkDecomposition', 'chunk_bound', 'cluster_statistics', 'decompose', 'fit_double_exponential',
    'separation_bound', 'verify_nugget_separation', 'INEQUALITIES', 'KNOWN_DISCREPANCIES', 'constants_table',
    'minimal_Q', 'threshold_estimate', 'Cluster', 'LinkedTree', 'build_linked_trees', 'clusters_from_decomposition',
    'generate_placements', 'linking_radius', 'linking_violations', 'tree_diameter_bound', 'tree_violations',
]
