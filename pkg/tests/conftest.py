import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from benchmarks import pharm_chem_dataset  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def pharm_chem():
    return pharm_chem_dataset()


@pytest.fixture(scope="session")
def pharm_chem_scores(pharm_chem):
    from bibdea import evaluate_sds

    return evaluate_sds(pharm_chem)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
