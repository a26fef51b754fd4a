import functools

import pytest

from altmon.engine import enumerate_kind
from altmon.green import green_classes


@functools.lru_cache(maxsize=None)
def monoid(kind, n):
    return enumerate_kind(kind, n)


@functools.lru_cache(maxsize=None)
def green(kind, n):
    return green_classes(monoid(kind, n))


@pytest.fixture
def M():
    return monoid


@pytest.fixture
def G():
    return green
