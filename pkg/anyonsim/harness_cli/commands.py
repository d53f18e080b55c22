import json
import logging
import os

import click

from config import BaseConfig

from anyonsim.components.reporting import to_json, write_json

from .checks import run_pipeline_suite
from .pipeline import load_report, run_memory, run_shot
from .run_config import load_config, load_grid
from .sweep import plot_fail_rate_html, plot_fail_rate_svg, run_sweep, write_csv

logger = logging.getLogger(__name__)


def register_commands_harness_cli(cli, verify):

    @cli.command('simulate')
    @click.option('--config', 'config_file', type=click.Path(dir_okay=False), help='key=value or JSON config file.')
    @click.option('--L', 'L', type=int)
    @click.option('--T', 'T', type=int)
    @click.option('--eps', type=float)
    @click.option('--N', 'N', type=int)
    @click.option('--Q', 'Q', type=int)
    @click.option('--d', type=int)
    @click.option('--shots', type=int)
    @click.option('--seed', 'master_seed', type=int)
    @click.option('--workers', default=BaseConfig.WORKERS, show_default=True)
    @click.option('--output', default=None, help='Report path (default: <output dir>/report.json).')
    @click.option('--dump-frames', type=click.Path(dir_okay=False), help='Write the frame of every round of shot 0.')
    @click.pass_context
    def simulate(ctx, config_file, workers, output, dump_frames, **overrides):
        """Memory experiment; writes a RunReport and prints the aggregate."""
        config = load_config(config_file, **overrides)
        report = run_memory(config, workers=workers, quiet=ctx.obj['quiet'])
        output = output or os.path.join(BaseConfig.OUTPUT_DIR, 'report.json')
        write_json(report.as_dict(), output)
        if dump_frames:
            write_json(run_shot(config, 0, dump_frames=True)['frames'], dump_frames)
        ci_lo, ci_hi = report.interval
        click.echo(to_json({'report': output, 'shots': report.shots, 'failures': report.failures,
                            'fail_rate': report.fail_rate, 'ci': [ci_lo, ci_hi]}), nl=False)

    @cli.command('sweep')
    @click.option('--grid', 'grid_file', required=True, type=click.Path(dir_okay=False))
    @click.option('--workers', default=BaseConfig.WORKERS, show_default=True)
    @click.option('--output', default=None, help='CSV path (default: <output dir>/sweep.csv).')
    @click.option('--svg', 'svg_file', default=None, help='Also draw the fail-rate chart as SVG.')
    @click.option('--html', 'html_file', default=None, help='Also draw the fail-rate chart as HTML.')
    @click.pass_context
    def sweep(ctx, grid_file, workers, output, svg_file, html_file):
        """One CSV row per config of a grid file."""
        configs = load_grid(grid_file)
        df = run_sweep(configs, workers=workers, quiet=ctx.obj['quiet'])
        output = output or os.path.join(BaseConfig.OUTPUT_DIR, 'sweep.csv')
        write_csv(df, output)
        if svg_file:
            plot_fail_rate_svg(df, svg_file)
        if html_file:
            plot_fail_rate_html(df, html_file)
        click.echo(output)

    @cli.command('replay')
    @click.option('--report', 'report_file', required=True, type=click.Path(dir_okay=False))
    @click.option('--shot', type=int, required=True)
    def replay(report_file, shot):
        """Re-run one shot of a report and print its outcome and action log."""
        report = load_report(report_file)
        outcome = run_shot(report.config, shot, keep_log=True)
        actions = outcome.pop('actions')
        outcome.pop('runtime_ms')
        recorded = next((o for o in report.outcomes if o.get('shot') == shot), None)
        matches = recorded is None or all(recorded.get(k) == v for k, v in outcome.items())
        click.echo(to_json({'outcome': outcome, 'matches_report': matches}), nl=False)
        for action in actions:
            click.echo(json.dumps(action, sort_keys=True))
        raise SystemExit(0 if matches else 1)

    @verify.command('pipeline')
    @click.option('--placements', default=100, show_default=True, help='Random placements per cluster size.')
    @click.option('--seed', default=0, show_default=True)
    def verify_pipeline(placements, seed):
        """Engineered isolated-cluster traces and the hiding-and-reveal scenario."""
        report = run_pipeline_suite(placements=placements, seed=seed)
        click.echo(to_json(report), nl=False)
        raise SystemExit(0 if report['passed'] else 1)
