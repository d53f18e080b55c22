from .checks import hiding_trace, isolated_cluster_trace, run_pipeline_suite
from .pipeline import RunReport, load_report, run_memory, run_shot
from .run_config import RunConfig, expand_grid, load_config, load_grid, parse_config_text
from .sweep import COLUMNS, plot_fail_rate_html, plot_fail_rate_svg, run_sweep, sweep_row, write_csv

__all__ = [
    'hiding_trace', 'isolated_cluster_trace', 'run_pipeline_suite', 'RunReport', 'load_report', 'run_memory',
    'run_shot', 'RunConfig', 'expand_grid', 'load_config', 'load_grid', 'parse_config_text', 'COLUMNS',
    'plot_fail_rate_html', 'plot_fail_rate_svg', 'run_sweep', 'sweep_row', 'write_csv',
]
