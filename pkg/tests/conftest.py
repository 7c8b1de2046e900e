import time

import pytest
from hypothesis import settings

from horizonlab.complexity import incompressibility_census

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

CENSUS_N = 10
CENSUS_BITS = 33
CENSUS_CAP = 1000


@pytest.fixture(scope="session")
def census10():
    """All 10-bit strings searched to 33 bits. Slow (about a minute), so shared."""
    start = time.perf_counter()
    census = incompressibility_census(CENSUS_N, CENSUS_BITS, CENSUS_CAP)
    return census, time.perf_counter() - start
