import pytest


@pytest.fixture(scope="session")
def scf_cache():
    """Share converged SCF solutions across tests; they are expensive."""
    return {}
