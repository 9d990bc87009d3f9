import pytest

from nimtower import builtin_factor_table


@pytest.fixture(scope="session")
def table():
    return builtin_factor_table()
