"""Shared fixtures: repository root on sys.path, geometries and seeded generators"""
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from ambient import Geometry, GeometryKind  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=list(GeometryKind), ids=lambda kind: kind.value)
def kind(request):
    return request.param


@pytest.fixture
def plane(kind):
    """E^2, S^2 or H^2"""
    return Geometry(kind, 2)


@pytest.fixture
def space(kind):
    """E^3, S^3 or H^3"""
    return Geometry(kind, 3)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in list(os.environ):
        if key.startswith('MCENTER_'):
            monkeypatch.delenv(key, raising=False)
