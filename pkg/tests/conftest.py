import pytest

import cavitymem as cm


@pytest.fixture(scope="session")
def params():
    return cm.reference_params()


@pytest.fixture(scope="session")
def T_c():
    return 0.5


@pytest.fixture(scope="session")
def T(T_c):
    return cm.sech_T_for_coherence_time(T_c)


@pytest.fixture(scope="session")
def ctrl(params, T):
    return cm.optimal_control_sech(params, T)


@pytest.fixture(scope="session")
def grid(T_c):
    return cm.default_grid(T_c)
