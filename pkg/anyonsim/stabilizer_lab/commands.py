import click

from anyonsim.components.reporting import to_json

from .checks import run_stabilizer_suite
from .stabilizers import LATTICES


def register_commands_stabilizer_lab(verify):

    @verify.command('stabilizers')
    @click.option('--lattice', type=click.Choice(sorted(LATTICES)), default='3x3-patch', show_default=True)
    @click.option('--trials', default=20, show_default=True, help='Random states per placement.')
    @click.option('--seed', default=0, show_default=True)
    def verify_stabilizers(lattice, trials, seed):
        """Commutator identities, spectra and the gauging round trip."""
        report = run_stabilizer_suite(lattice=lattice, trials=trials, seed=seed)
        click.echo(to_json(report), nl=False)
        raise SystemExit(0 if report['passed'] else 1)
