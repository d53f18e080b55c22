import pytest
from click.testing import CliRunner

from anyonsim import create_app
from anyonsim.harness_cli import RunConfig


@pytest.fixture
def cli():
    return create_app()


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def small_config():
    return RunConfig(L=8, T=3, eps=0.0, shots=4, master_seed=7)
