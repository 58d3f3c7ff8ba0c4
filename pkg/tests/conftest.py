import pytest

from cubal import models
from cubal.thin import thin_set


@pytest.fixture(scope="session")
def z2():
    return models.cyclic_group(2)


@pytest.fixture(scope="session")
def zz2(z2):
    return models.square_model(z2)


@pytest.fixture(scope="session")
def zz2_thin(zz2):
    return thin_set(zz2)


@pytest.fixture(scope="session")
def shift2(z2):
    return models.shift_model(z2)


@pytest.fixture(scope="session")
def box_ind2():
    return models.square_model(models.indiscrete_groupoid(2))


@pytest.fixture(scope="session")
def box_ind3():
    return models.square_model(models.indiscrete_groupoid(3))


@pytest.fixture(scope="session")
def corpus(z2):
    """The pinned generator corpus of commuting-square models."""
    return {
        "z2": models.square_model(z2),
        "z3": models.square_model(models.cyclic_group(3)),
        "z2xz2": models.square_model(models.product(z2, z2)),
        "ind2": models.square_model(models.indiscrete_groupoid(2)),
        "ind3": models.square_model(models.indiscrete_groupoid(3)),
        "z2+z3": models.square_model(
            models.disjoint_union(z2, models.cyclic_group(3))
        ),
    }
