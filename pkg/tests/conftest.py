import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mixedts import MixedTsParams

# Residual-fit parameter column for the broad-market fund, used as a realistic
# generator throughout the suite.
VFIAX = MixedTsParams(mu0=-0.0681, mu=0.0601, sigma=1.0530, a=1.1670,
                      lambda_plus=1.0280, lambda_minus=1.0311, alpha=1.4717)


@pytest.fixture
def vfiax_params():
    return VFIAX
