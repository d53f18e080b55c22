from __future__ import annotations

import json

import numpy as np
import pytest

from config import BaseConfig
from hypothesis import given, settings
from hypothesis import strategies as st

from anyonsim.components.lattice import H, V
from anyonsim.errors import ConfigError, DecoderEscalationError
from anyonsim.harness_cli import (COLUMNS, RunConfig, expand_grid, hiding_trace, isolated_cluster_trace, load_config,
                                  load_report, plot_fail_rate_svg, run_memory, run_pipeline_suite, run_shot, run_sweep,
                                  write_csv)
from anyonsim.jit_decoder import DecoderState
from anyonsim.spacetime_model import FAMILIES, SPATIAL_KINDS, ErrorConfiguration, Fault, cube_failure_prob

GRID = """
# three sizes, three rates
L = 8, 12, 16
eps = 1e-3, 3e-3, 1e-2
T = 1
shots = 1
"""


# =============================================================================
# Configuration
# =============================================================================

class TestRunConfig:

    def test_defaults(self):
        config = RunConfig()
        assert (config.L, config.T, config.separation, config.shots) == (8, 8, 4, 100)
        assert config.d is None
        assert config.master_seed == BaseConfig.MASTER_SEED
        assert config.flush_cap == 40

    @pytest.mark.parametrize('L, separation', [(8, 4), (12, 6), (16, 8)])
    def test_separation_grows_with_lattice(self, L, separation):
        assert RunConfig(L=L).separation == separation
        assert RunConfig(L=8).replace(L=L).separation == separation

    def test_explicit_separation(self):
        assert RunConfig(L=16, d=4).separation == 4

    @pytest.mark.parametrize('overrides', [
        {'d': 3},
        {'shots': 0},
        {'L': 7},
        {'eps': 1.5},
        {'boundaries': 'open'},
        {'eta_probability': -0.1},
    ])
    def test_rejected(self, overrides):
        with pytest.raises(ConfigError):
            RunConfig(**overrides)

    def test_key_value_file_and_overrides(self, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text("L=12\n# comment\n\neps = 0.001\nmeasurement_noise=false\nT=9\n")
        config = load_config(str(path), T=5, shots=None)
        assert config.L == 12
        assert config.eps == pytest.approx(0.001)
        assert config.measurement_noise is False
        assert config.T == 5
        assert config.shots == 100

    def test_json_file(self, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text(json.dumps({'L': 10, 'd': 5, 'flush_rounds': 7}))
        config = load_config(str(path))
        assert (config.L, config.d, config.flush_cap) == (10, 5, 7)

    @pytest.mark.parametrize('text', ['colour=blue', 'L 8', 'L=eight'])
    def test_bad_file(self, tmp_path, text):
        path = tmp_path / 'run.cfg'
        path.write_text(text)
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / 'absent.cfg'))

    def test_grid_expansion(self):
        configs = expand_grid(GRID)
        assert len(configs) == 9
        assert [(c.L, c.eps) for c in configs[:2]] == [(8, 1e-3), (8, 3e-3)]
        assert configs[-1].L == 16

    def test_empty_grid(self):
        assert expand_grid('# nothing yet\n') == []


# =============================================================================
# Shots and reports
# =============================================================================

class TestRunShot:

    def test_noiseless_never_fails(self, small_config):
        report = run_memory(small_config)
        assert report.failures == 0
        assert [o['bit_in'] for o in report.outcomes] == [0, 1, 0, 1]
        assert all(o['bit_out'] == o['bit_in'] for o in report.outcomes)
        assert report.interval[0] == pytest.approx(0.0, abs=1e-12)

    def test_charge_hidden_next_to_computational_anyon(self):
        config = RunConfig(L=16, T=4, d=4, shots=1)
        errors = ErrorConfiguration.of([Fault(1, 2, 4, 'qutritZ', direction=H)])
        outcome = run_shot(config, 0, errors=errors, keep_log=True)
        assert not outcome['failure'], outcome['reasons']
        assert 'widen' in [a['action'] for a in outcome['actions']]

    def test_report_bytes_replay(self):
        config = RunConfig(L=8, T=3, eps=0.01, N=2, shots=3, master_seed=11)
        assert run_memory(config).to_json() == run_memory(config).to_json()

    def test_timing_left_out(self, small_config):
        payload = run_memory(small_config).as_dict()
        assert all('runtime_ms' not in o for o in payload['outcomes'])
        assert payload['shots'] == payload['config']['shots']

    def test_frames_dumped(self, small_config):
        outcome = run_shot(small_config, 0, dump_frames=True)
        assert outcome['frames'][0]['t'] == 1
        assert len(outcome['frames'][0]['frame']['mu']) == 4


@st.composite
def single_faults(draw, L):
    t = draw(st.integers(1, 2))
    x, y = draw(st.integers(0, L - 1)), draw(st.integers(0, L - 1))
    kind = draw(st.sampled_from(SPATIAL_KINDS + ('measFlip',)))
    if kind == 'measFlip':
        return Fault(t, x, y, kind, family=draw(st.sampled_from(FAMILIES)), power=draw(st.integers(1, 2)))
    return Fault(t, x, y, kind, direction=draw(st.sampled_from((H, V))), power=draw(st.integers(1, 2)))


class TestScoring:

    @pytest.mark.parametrize('L', [8, 12])
    @pytest.mark.parametrize('bit', [0, 1])
    @given(data=st.data())
    @settings(max_examples=40, deadline=None)
    def test_single_fault_is_corrected(self, L, bit, data):
        fault = data.draw(single_faults(L))
        config = RunConfig(L=L, T=2, shots=1)
        outcome = run_shot(config, bit, errors=ErrorConfiguration.of([fault]))
        assert not outcome['failure'], (fault, outcome['reasons'])
        assert not outcome['escalated']

    def test_saturated_noise_scores_near_one_half(self):
        eps = 1.0 - 0.5 ** (1 / 10)
        assert cube_failure_prob(eps, 10) == pytest.approx(0.5)
        report = run_memory(RunConfig(L=8, T=4, eps=eps, N=10, shots=40, master_seed=5))
        assert 0.25 <= report.failures / 40 <= 0.75

    def test_escalated_shot_is_a_guess(self, monkeypatch):
        def give_up(self, frame, readings, t):
            raise DecoderEscalationError("region would hold two computational anyons", 0)

        monkeypatch.setattr(DecoderState, 'step', give_up)
        config = RunConfig(L=8, T=2, shots=8, master_seed=3)
        outcomes = [run_shot(config, shot) for shot in range(8)]
        for outcome in outcomes:
            assert outcome['escalated']
            assert outcome['failure'] == (outcome['bit_out'] != outcome['bit_in'])
            assert outcome['reasons'] == (['escalation'] if outcome['failure'] else [])
        assert [o['bit_out'] for o in outcomes] == [run_shot(config, shot)['bit_out'] for shot in range(8)]


# =============================================================================
# Sweeps
# =============================================================================

class TestSweep:

    def test_empty_sweep_is_header_only(self, tmp_path):
        path = write_csv(run_sweep([]), str(tmp_path / 'sweep.csv'))
        with open(path, encoding='utf-8') as handle:
            assert handle.read().strip() == ','.join(COLUMNS)

    def test_grid_rows(self):
        df = run_sweep(expand_grid(GRID))
        assert len(df) == 9
        assert list(df.columns) == COLUMNS

    def test_duplicate_configs_give_identical_rows(self):
        config = RunConfig(L=8, T=2, eps=0.01, N=2, shots=2, master_seed=3)
        df = run_sweep([config, config]).drop(columns=['mean_runtime_ms'])
        assert df.iloc[0].to_dict() == df.iloc[1].to_dict()

    def test_svg_chart(self, tmp_path):
        df = run_sweep([RunConfig(L=8, T=1, eps=1e-3, shots=1)])
        path = plot_fail_rate_svg(df, str(tmp_path / 'fail.svg'))
        with open(path, encoding='utf-8') as handle:
            assert '<svg' in handle.read()


# =============================================================================
# Engineered traces
# =============================================================================

class TestPipelineSuite:

    def test_hiding_trace(self):
        trace = hiding_trace()
        assert trace['pass']
        assert trace['hidden'] == 1

    def test_isolated_trace_reports_bounds(self):
        trace = isolated_cluster_trace(3, np.random.default_rng(0))
        assert trace['pass']
        assert trace['lifetime'] < 25
        assert trace['reach'] <= 19

    def test_suite_passes(self):
        report = run_pipeline_suite(placements=2, seed=1)
        assert report['passed'], [r['check'] for r in report['records'] if not r['pass']]


# =============================================================================
# Command line
# =============================================================================

class TestCommands:

    def test_unknown_suite(self, cli, runner):
        result = runner.invoke(cli, ['verify', 'nonsense'])
        assert result.exit_code == 2

    def test_config_error_exit_code(self, cli, runner):
        result = runner.invoke(cli, ['--quiet', 'simulate', '--d', '3', '--shots', '1'])
        assert result.exit_code == 2

    def test_simulate_then_replay(self, cli, runner, tmp_path):
        report_path = str(tmp_path / 'report.json')
        result = runner.invoke(cli, ['--quiet', 'simulate', '--L', '8', '--T', '2', '--eps', '0.01', '--N', '2',
                                     '--shots', '2', '--seed', '5', '--output', report_path])
        assert result.exit_code == 0, result.output
        assert load_report(report_path).shots == 2

        result = runner.invoke(cli, ['replay', '--report', report_path, '--shot', '1'])
        assert result.exit_code == 0, result.output
        assert '"matches_report": true' in result.stdout

    def test_sweep_command(self, cli, runner, tmp_path):
        grid = tmp_path / 'grid.cfg'
        grid.write_text("L=8\neps=0.0,0.001\nT=1\nshots=1\n")
        output = str(tmp_path / 'sweep.csv')
        result = runner.invoke(cli, ['--quiet', 'sweep', '--grid', str(grid), '--output', output])
        assert result.exit_code == 0, result.output
        with open(output, encoding='utf-8') as handle:
            assert len(handle.read().strip().splitlines()) == 3

    def test_verify_algebra(self, cli, runner):
        result = runner.invoke(cli, ['--log-level', 'WARNING', 'verify', 'algebra'])
        assert result.exit_code == 0
        assert json.loads(result.stdout)['passed']
