import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))  # expose oracles.py

from hypmet.triangulation import build_complex, load_triangulation

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def fig8():
    return build_complex(load_triangulation(FIXTURES / "fig8.json"))


@pytest.fixture(scope="session")
def double_tet():
    return build_complex(load_triangulation(FIXTURES / "double_tet.json"))


@pytest.fixture(scope="session")
def single_tet():
    from hypmet.triangulation import GluingSpec

    return build_complex(GluingSpec.from_dict({"tets": 1, "gluings": []}))
