import sys

import numpy as np
import pytest
from loguru import logger

from cv_entanglement.step_01_phase_space.methods.states import two_mode_squeezed


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def tms():
    return two_mode_squeezed(0.5)


@pytest.fixture(autouse=True)
def reset_logger():
    # The CLI binds loguru to the stderr of the test that ran it
    yield
    logger.remove()
    logger.add(lambda message: sys.stderr.write(message), level="WARNING")
