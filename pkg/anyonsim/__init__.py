import click

from config import BaseConfig

from anyonsim.components.reporting import configure_logging
from anyonsim.errors import ConfigError, UnknownSuiteError


class AnyonSimGroup(click.Group):
    """Root group: configuration errors leave with exit code 2."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (ConfigError, UnknownSuiteError) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(2)


class SuiteGroup(click.Group):

    def get_command(self, ctx, name):
        command = super().get_command(ctx, name)
        if command is None:
            msg = f"unknown suite {name!r}, choose from {', '.join(sorted(self.commands))}"
            raise UnknownSuiteError(msg)
        return command


def create_app():

    @click.group(cls=AnyonSimGroup)
    @click.option('--log-level', default=BaseConfig.LOG_LEVEL, show_default=True)
    @click.option('--quiet', is_flag=True, help='No progress bars.')
    @click.pass_context
    def cli(ctx, log_level, quiet):
        """Simulator and just-in-time decoder for the D(S3) quantum double."""
        configure_logging(log_level)
        ctx.obj = {'quiet': quiet}

    @cli.group(cls=SuiteGroup)
    def verify():
        """Acceptance suites; exit code 1 when a check fails."""

    register_commands(cli, verify)
    return cli


def register_commands(cli, verify):

    from anyonsim.anyon_algebra.commands import register_commands_anyon_algebra
    from anyonsim.chunk_analysis.commands import register_commands_chunk_analysis
    from anyonsim.harness_cli.commands import register_commands_harness_cli
    from anyonsim.stabilizer_lab.commands import register_commands_stabilizer_lab

    register_commands_anyon_algebra(verify)
    register_commands_stabilizer_lab(verify)
    register_commands_chunk_analysis(verify)
    register_commands_harness_cli(cli, verify)
