import pytest

from powersde import PrototypeParams, make_prototype


@pytest.fixture
def cir_params():
    return PrototypeParams(kind="cir", kappa=1.0, lam=1.0, theta=1.0, x0=1.0)


@pytest.fixture
def cir_model(cir_params):
    return make_prototype(cir_params)


@pytest.fixture
def wf_params():
    return PrototypeParams(kind="wf", kappa=2.0, lam=0.5, theta=1.0, x0=0.5)


@pytest.fixture
def wf_model(wf_params):
    return make_prototype(wf_params)
