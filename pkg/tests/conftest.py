import numpy as np
import pytest

from memfuzz import (
    DeviceParams,
    PulseTrainSpec,
    ReadoutConfig,
    fresh_state,
    pulse_train,
    simulate,
)


@pytest.fixture(scope="session")
def params() -> DeviceParams:
    return DeviceParams()


@pytest.fixture(scope="session")
def write_tpl() -> PulseTrainSpec:
    return PulseTrainSpec(amplitude=1.2, width=0.05, period=0.1, count=0)


@pytest.fixture(scope="session")
def readout() -> ReadoutConfig:
    return ReadoutConfig(r_f=62000.0, v_read=0.2)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernel():
    # First kernel call may trigger a JIT compile; pay it here so
    # timed acceptance blocks measure steady-state speed.
    p = DeviceParams()
    wf = pulse_train(PulseTrainSpec(1.2, 0.05, 0.1, 1), 5e-3)
    simulate(p, fresh_state(p), wf)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260817)
