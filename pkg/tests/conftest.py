import pytest

from zetamean.zeros import find_zeros, validate_zero_list


@pytest.fixture(scope="session")
def zeros1000():
    """Validated zero list up to height 1000, shared by the sum tests."""
    return validate_zero_list(find_zeros(1000.0))
