import pytest

from brownlevi import groups, harness, reductive


@pytest.fixture(scope="session")
def gl24():
    return harness.build_instance("gl:n=2,q=4")[1]


@pytest.fixture(scope="session")
def gl25():
    return harness.build_instance("gl:n=2,q=5")[1]


@pytest.fixture(scope="session")
def gl32():
    return harness.build_instance("gl:n=3,q=2")[1]


@pytest.fixture(scope="session")
def gl33():
    return harness.build_instance("gl:n=3,q=3")[1]


@pytest.fixture(scope="session")
def gl42():
    return harness.build_instance("gl:n=4,q=2")[1]


@pytest.fixture(scope="session")
def gl28():
    return reductive.GLContext(2, 8)


@pytest.fixture(scope="session")
def s3():
    return harness.build_instance("perm:sym=3")[0]


@pytest.fixture(scope="session")
def s4():
    return harness.build_instance("perm:sym=4")[0]


@pytest.fixture(scope="session")
def s5():
    return harness.build_instance("perm:sym=5")[0]


@pytest.fixture(scope="session")
def q8():
    return groups.quaternion_group()
