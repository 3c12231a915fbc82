import json
from pathlib import Path

import pytest
from hypothesis import settings

from core.factories import CuspCurveFactory, SmoothModelFactory
from curves.models import make_curve

settings.register_profile("koppelman", deadline=None, max_examples=50)
settings.load_profile("koppelman")

FIXTURES = Path(__file__).resolve().parent / "curves" / "fixtures"


@pytest.fixture
def cusp23():
    return CuspCurveFactory()


@pytest.fixture
def smooth():
    return SmoothModelFactory()


@pytest.fixture
def intro_curve():
    return make_curve(json.loads((FIXTURES / "intro_curve.json").read_text()))
