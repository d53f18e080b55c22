import logging

import click
import numpy as np
from joblib import Parallel, delayed

from config import BaseConfig

from anyonsim.components.reporting import to_json
from anyonsim.spacetime_model import sample_errors

from .chunks import cluster_statistics, decompose, fit_double_exponential, verify_nugget_separation
from .constants import constants_table
from .linking import build_linked_trees, generate_placements, linking_violations, tree_violations

logger = logging.getLogger(__name__)

PLACEMENT_Q = 60


def _separation_shot(seed, index, p, L, T, Q):
    rng = np.random.default_rng([seed, index])
    report = verify_nugget_separation(decompose(sample_errors(p, L, T, rng), Q, L))
    return report['genuine'], report['overlap'], report['displayed_form_pairs'], report['violations'][:1]


def placement_report(samples, seed, Q=PLACEMENT_Q):
    totals = {'same_level': 0, 'several_parents': 0, 'shared_size': 0, 'diameter': 0, 'separation': 0}
    for index in range(samples):
        rng = np.random.default_rng([seed, index, 1])
        clusters = generate_placements(Q, rng)
        for key, found in linking_violations(clusters, Q).items():
            totals[key] += len(found)
        for key, found in tree_violations(build_linked_trees(clusters, Q), clusters, Q).items():
            totals[key] += len(found)
    return {'Q': Q, 'samples': samples, 'violations': totals, 'passed': not any(totals.values())}


def register_commands_chunk_analysis(verify):

    @verify.command('chunks')
    @click.option('--Q', 'Q', default=6, show_default=True, help='Chunk scale factor.')
    @click.option('--samples', default=10000, show_default=True)
    @click.option('--p', default=0.05, show_default=True, help='Unit-cube failure probability.')
    @click.option('--L', 'L', default=20, show_default=True, help='Spatial period.')
    @click.option('--T', 'T', default=20, show_default=True, help='Rounds.')
    @click.option('--seed', default=0, show_default=True)
    @click.option('--workers', default=BaseConfig.WORKERS, show_default=True)
    @click.option('--placements', default=200, show_default=True, help='Adversarial cluster placements at Q=60.')
    def verify_chunks(Q, samples, p, L, T, seed, workers, placements):
        """Nugget separation on random configurations and linking checks on adversarial placements."""
        shots = Parallel(n_jobs=workers)(
            delayed(_separation_shot)(seed, i, p, L, T, Q) for i in range(samples))
        genuine = sum(s[0] for s in shots)
        examples = [example for s in shots for example in s[3] if example['kind'] == 'genuine'][:5]
        separation = {
            'samples': samples, 'Q': Q, 'p': p, 'volume': [L, L, T],
            'genuine': genuine,
            'overlap': sum(s[1] for s in shots),
            'displayed_form_pairs': sum(s[2] for s in shots),
            'genuine_examples': examples,
        }
        logger.info("nugget separation: %d genuine, %d overlap over %d samples",
                    genuine, separation['overlap'], samples)
        statistics = cluster_statistics(min(samples, 200), p, L, T, Q, np.random.default_rng([seed, 2]))
        statistics['fit'] = fit_double_exponential(statistics)
        linking = placement_report(placements, seed)
        report = {
            'separation': separation,
            'statistics': statistics,
            'linking': linking,
            'passed': genuine == 0 and linking['passed'],
        }
        click.echo(to_json(report), nl=False)
        raise SystemExit(0 if report['passed'] else 1)

    @verify.command('constants')
    def verify_constants():
        """Smallest Q for each inequality of the constant chain."""
        report = constants_table()
        click.echo(to_json(report), nl=False)
        raise SystemExit(0 if report['passed'] else 1)
