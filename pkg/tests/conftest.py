import pytest

from gvp2.vertex import Pipeline


@pytest.fixture(scope="session")
def pipeline10():
    return Pipeline(10)


@pytest.fixture(scope="session")
def tables10(pipeline10):
    return {t.d: t for t in pipeline10.tables()}
