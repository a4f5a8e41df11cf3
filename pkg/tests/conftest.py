import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qubitcap import ChannelParams, amplitude_damping, extremal_channel, shifted_depolarizing

settings.register_profile(
    "default",
    deadline=None,
    max_examples=200,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def density_matrix_relative_entropy(r, q):
    """D(rho || psi) in bits from 2x2 matrices by eigendecomposition."""
    paulis = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])
    rho = 0.5 * (np.eye(2) + np.tensordot(np.asarray(r, float), paulis, axes=1))
    psi = 0.5 * (np.eye(2) + np.tensordot(np.asarray(q, float), paulis, axes=1))
    wr, vr = np.linalg.eigh(rho)
    ws, vs = np.linalg.eigh(psi)
    log_rho = vr @ np.diag([np.log2(w) if w > 1e-300 else 0.0 for w in wr]) @ vr.conj().T
    log_psi = vs @ np.diag(np.log2(ws)) @ vs.conj().T
    return float(np.real(np.trace(rho @ log_rho) - np.trace(rho @ log_psi)))


@pytest.fixture
def sdep():
    return shifted_depolarizing(0.5)


@pytest.fixture
def ad():
    return amplitude_damping(0.5)


@pytest.fixture
def three_state_a():
    return ChannelParams(0.6, 0.6, 0.5, 0.5)


@pytest.fixture
def three_state_b():
    return ChannelParams(0.5, 0.435, 0.435, 0.5)


EXAMPLE_CHANNELS = {
    "shifted_depolarizing": shifted_depolarizing(0.5),
    "amplitude_damping": amplitude_damping(0.5),
    "three_state_a": ChannelParams(0.6, 0.6, 0.5, 0.5),
    "three_state_b": ChannelParams(0.5, 0.435, 0.435, 0.5),
    "extremal": extremal_channel(0.7, 1.1),
}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
