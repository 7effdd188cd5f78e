import pytest

from altperm.oracle import Oracle, OracleConfig


@pytest.fixture(scope="session")
def oracle():
    return Oracle(OracleConfig(cap=10))
