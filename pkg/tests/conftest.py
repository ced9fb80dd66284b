import pytest
from hypothesis import settings

from inexgames.core import Structure
from inexgames.fixtures import STRUCTURES, load_evil

settings.register_profile("repo", max_examples=40, deadline=None)
settings.load_profile("repo")


@pytest.fixture
def ab():
    return Structure(["a", "b"], {"P": [("a",)]})


@pytest.fixture
def fork():
    return STRUCTURES["fork3"]


@pytest.fixture(scope="session")
def evil():
    return load_evil()
