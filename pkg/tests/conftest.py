import pytest

from ckwork import fixtures


@pytest.fixture
def o2():
    return fixtures.load("o2")


@pytest.fixture
def golden():
    return fixtures.load("golden_mean")


@pytest.fixture
def perm2():
    return fixtures.load("permutation2")


@pytest.fixture
def all_ones():
    return fixtures.load("all_ones_infinite")


@pytest.fixture
def three_tracks():
    return fixtures.load("three_tracks")
