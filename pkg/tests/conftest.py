import pytest

from repositories.example_repo import ExampleRepository
from services.canonical_service import CanonicalService
from services.decompose_service import DecomposeService
from services.genfun_service import GenFunService
from services.lie_service import LieService
from services.nambu_service import NambuService
from symbolic.domain import Domain


@pytest.fixture(scope="session")
def repo():
    return ExampleRepository()


@pytest.fixture
def nambu():
    return NambuService()


@pytest.fixture
def canonical(nambu):
    return CanonicalService(nambu)


@pytest.fixture
def genfun():
    return GenFunService()


@pytest.fixture
def lie(nambu):
    return LieService(nambu)


@pytest.fixture
def decompose(nambu):
    return DecomposeService(nambu)


@pytest.fixture
def domain():
    return Domain(samples=32)
