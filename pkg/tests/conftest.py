"""Seeded stream fixtures."""

import pytest

from tests.strategies import make_stream


@pytest.fixture
def uniform_stream():
    return make_stream()


@pytest.fixture
def short_stream():
    return make_stream(d=3, T=40, seed=7)
