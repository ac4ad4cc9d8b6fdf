"""Shared fixtures.  BLAS thread pools are pinned to one thread before numpy
loads so timing-sensitive acceptance checks measure single-threaded runs and
outputs stay bit-reproducible.
"""

import os

for _var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")

import pytest

from biphoton_eraser import (
    biphoton_map,
    biphoton_source,
    default_grid,
    erase_arm,
    imaging_arm,
    paper_setup,
    read_arm,
    signal_arm,
)


@pytest.fixture(scope="session")
def setup1():
    return paper_setup(1)


@pytest.fixture(scope="session")
def setup2():
    return paper_setup(2)


@pytest.fixture(scope="session")
def grid1k(setup1):
    return default_grid(setup1, 1024)


@pytest.fixture(scope="session")
def grid2k(setup1):
    return default_grid(setup1, 2048)


@pytest.fixture(scope="session")
def source1k(setup1, grid1k):
    return biphoton_source(setup1, grid1k)


@pytest.fixture(scope="session")
def source2k(setup1, grid2k):
    return biphoton_source(setup1, grid2k)


@pytest.fixture(scope="session")
def map_erase_2k(setup1, grid2k, source2k):
    """Joint map of the erasing configuration, full Fourier plane exposed."""
    return biphoton_map(signal_arm(setup1, grid2k),
                        erase_arm(setup1, grid2k), source2k)


@pytest.fixture(scope="session")
def map_read_2k(setup1, grid2k, source2k):
    return biphoton_map(signal_arm(setup1, grid2k),
                        read_arm(setup1, grid2k), source2k)


@pytest.fixture(scope="session")
def map_ghost_2k(setup1, grid2k, source2k):
    return biphoton_map(signal_arm(setup1, grid2k),
                        imaging_arm(setup1, grid2k), source2k)
