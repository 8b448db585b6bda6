import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from expansion_engine import ExpansionEngine  # noqa: E402
from koszul_engine import KoszulEngine  # noqa: E402
from normal_form_engine import NormalFormEngine  # noqa: E402


@pytest.fixture(scope="session")
def expansion():
    return ExpansionEngine()


@pytest.fixture(scope="session")
def koszul(expansion):
    return KoszulEngine(expansion)


@pytest.fixture(scope="session")
def normal_forms(expansion):
    return NormalFormEngine(expansion)
