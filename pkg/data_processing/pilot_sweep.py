#!/usr/bin/env python3
"""
Pilot sweep for the memory suppression test
Runs L=8 and L=16 over a log grid of eps and picks the rate one decade below the crossing
"""
import os
import sys

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import BaseConfig  # noqa: E402

from anyonsim.harness_cli import RunConfig, run_sweep, write_csv  # noqa: E402

SIZES = (8, 16)
RATES = np.logspace(-4, -1, 7)
SHOTS = 200


def find_crossing(df):
    """Smallest eps where the larger lattice stops doing better, None if it never does."""
    table = df.pivot_table(index='eps', columns='L', values='fail_rate')
    for eps, row in table.sort_index().iterrows():
        if row[max(SIZES)] >= row[min(SIZES)] and row[min(SIZES)] > 0:
            return float(eps)
    return None


def pilot_sweep(shots=SHOTS, workers=BaseConfig.WORKERS):
    """Run the pilot grid and report the suggested suppression-test rate"""

    print("=== Pilot sweep ===")
    print(f"Sizes: {SIZES}, rates: {', '.join(f'{r:.1e}' for r in RATES)}, shots per point: {shots}")

    configs = [RunConfig(L=L, T=L, eps=float(eps), shots=shots) for L in SIZES for eps in RATES]
    df = run_sweep(configs, workers=workers, quiet=False)
    output = write_csv(df, os.path.join(BaseConfig.OUTPUT_DIR, 'pilot_sweep.csv'))

    print(f"\nResults written to {output}")
    for _, row in df.iterrows():
        print(f"L={int(row['L']):>3} eps={row['eps']:.1e} fail={row['fail_rate']:.4f} "
              f"[{row['ci_lo']:.4f}, {row['ci_hi']:.4f}]")

    crossing = find_crossing(df)
    if crossing is None:
        print("\nNo crossing inside the grid: L=16 beats L=8 everywhere, widen the grid upwards")
        return None
    suggested = crossing / 10
    print(f"\nEmpirical crossing near eps={crossing:.1e}")
    print(f"Suggested suppression-test eps: {suggested:.1e}")
    return suggested


if __name__ == "__main__":
    pilot_sweep()
