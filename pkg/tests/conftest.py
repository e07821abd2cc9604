import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # makes oracle importable

from autometric import (
    build_dilemma_architecture,
    build_takeover_architecture,
    canonical_dilemma_schedule,
    canonical_takeover_schedule,
    label_dilemma,
    label_takeover,
    run_simulation,
)


@pytest.fixture(scope="session")
def takeover_arch():
    return build_takeover_architecture()


@pytest.fixture(scope="session")
def dilemma_arch():
    return build_dilemma_architecture()


@pytest.fixture(scope="session")
def canonical_takeover_run(takeover_arch):
    """The labelled default takeover dataset, computed once per session."""
    return label_takeover(run_simulation(takeover_arch, canonical_takeover_schedule()))


@pytest.fixture(scope="session")
def canonical_dilemma_run(dilemma_arch):
    """(labelled dataset, median) for the default dilemma run."""
    return label_dilemma(run_simulation(dilemma_arch, canonical_dilemma_schedule()))
