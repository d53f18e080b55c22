import click

from anyonsim.components.reporting import to_json

from .checks import run_algebra_suite


def register_commands_anyon_algebra(verify):

    @verify.command('algebra')
    @click.option('--dump', is_flag=True, help='Include the full 8x8 fusion table.')
    @click.option('--seed', default=0, show_default=True)
    def verify_algebra(dump, seed):
        """Exhaustive fusion-ring checks."""
        report = run_algebra_suite(dump=dump, seed=seed)
        click.echo(to_json(report), nl=False)
        raise SystemExit(0 if report['passed'] else 1)
