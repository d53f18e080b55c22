"""
Parameter sweeps: one CSV row per config, plus the fail-rate charts drawn from it
"""
import logging
import os

import matplotlib
import pandas as pd

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import plotly.express as px  # noqa: E402
import seaborn as sns  # noqa: E402

from .pipeline import run_memory  # noqa: E402

logger = logging.getLogger(__name__)

COLUMNS = ['L', 'T', 'eps', 'N', 'Q', 'd', 'shots', 'seed', 'fail_rate', 'ci_lo', 'ci_hi',
           'mean_max_level', 'mean_runtime_ms']


def sweep_row(report) -> dict:
    config = report.config
    ci_lo, ci_hi = report.interval
    return {
        'L': config.L, 'T': config.T, 'eps': config.eps, 'N': config.N, 'Q': config.Q, 'd': config.separation,
        'shots': report.shots, 'seed': config.master_seed,
        'fail_rate': report.fail_rate, 'ci_lo': ci_lo, 'ci_hi': ci_hi,
        'mean_max_level': report.mean_max_level, 'mean_runtime_ms': report.mean_runtime_ms,
    }


def run_sweep(configs, workers=1, quiet=True) -> pd.DataFrame:
    rows = [sweep_row(run_memory(config, workers=workers, quiet=quiet)) for config in configs]
    return pd.DataFrame(rows, columns=COLUMNS)


def write_csv(df: pd.DataFrame, file_path: str) -> str:
    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    df.to_csv(file_path, index=False, columns=COLUMNS)
    logger.info("wrote %d rows to %s", len(df), file_path)
    return file_path


def plot_fail_rate_svg(df: pd.DataFrame, file_path: str) -> str:
    """Fail rate against eps, one line per L, with the Wilson interval as error bars."""
    sns.set_style('whitegrid')
    fig, ax = plt.subplots(figsize=(7, 5))
    for L, group in df.sort_values('eps').groupby('L'):
        ax.errorbar(group['eps'], group['fail_rate'],
                    yerr=[group['fail_rate'] - group['ci_lo'], group['ci_hi'] - group['fail_rate']],
                    marker='o', capsize=3, label=f'L={L}')
    if (df['eps'] > 0).all() and len(df):
        ax.set_xscale('log')
    ax.set_xlabel('eps')
    ax.set_ylabel('logical failure rate')
    ax.legend()
    fig.tight_layout()
    fig.savefig(file_path, format='svg')
    plt.close(fig)
    return file_path


def plot_fail_rate_html(df: pd.DataFrame, file_path: str) -> str:
    chart = df.sort_values('eps').assign(lattice=lambda f: 'L=' + f['L'].astype(str))
    fig = px.line(chart, x='eps', y='fail_rate', color='lattice', markers=True)
    fig.write_html(file_path, include_plotlyjs='cdn')
    return file_path
