"""Shared fixtures. The default-configuration states and report are expensive
(about a million amplitudes), so they are built once per session."""
import pytest

from kalamidas import (
    ExperimentConfig,
    HilbertSpec,
    MODES,
    evolve,
    initial_state_bare,
    initial_state_with_coherent,
    reduce_left,
    run_experiment,
)


@pytest.fixture(scope="session")
def default_config():
    return ExperimentConfig()


@pytest.fixture(scope="session")
def default_report(default_config):
    return run_experiment(default_config)


@pytest.fixture(scope="session")
def evolved_states(default_config):
    psi_with = evolve(initial_state_with_coherent(default_config), default_config)
    psi_bare = evolve(initial_state_bare(default_config), default_config)
    return psi_with, psi_bare


@pytest.fixture(scope="session")
def reduced_pair(evolved_states):
    psi_with, psi_bare = evolved_states
    return reduce_left(psi_with), reduce_left(psi_bare)


@pytest.fixture()
def quick_spec():
    return HilbertSpec(MODES, (1, 1, 2, 2, 2, 2))


@pytest.fixture()
def small_spec():
    return HilbertSpec(MODES, (1, 1, 1, 1, 1, 1))
