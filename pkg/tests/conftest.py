import numpy as np
import pytest
from hypothesis import strategies as st

from splopo import DetectionChain, MeasurementRecord, ModeTransform, OpoParams


@pytest.fixture
def benchmark_params():
    """Strong coupling, on resonance, lossless escape."""
    return OpoParams(sigma=0.9, coupling=1.5, omega=0.0, kappa=0.025, kappa_prime=0.025)


@pytest.fixture
def detection_params():
    """No coupling, finite analysis frequency, realistic intracavity loss."""
    return OpoParams(sigma=0.9, coupling=0.0, omega=0.1, kappa=0.025, kappa_prime=0.03)


@pytest.fixture
def detection_chain():
    return DetectionChain(quantum_efficiency=0.95, visibility=0.97, propagation=0.99)


@pytest.fixture
def measured_record(detection_chain):
    return MeasurementRecord(
        squeezed_plus_db=-4.7,
        squeezed_minus_db=-4.9,
        individual_noise_db=8.2,
        chain=detection_chain,
    )


@st.composite
def opo_params(draw, max_sigma=0.97):
    """Operating points spanning the below-threshold region."""
    sigma = draw(st.floats(0.0, max_sigma))
    coupling = draw(st.floats(0.0, 2.0))
    omega = draw(st.floats(0.0, 3.0))
    ratio = draw(st.floats(0.3, 1.0))
    return OpoParams(sigma, coupling, omega, kappa=ratio * 0.03, kappa_prime=0.03)


@st.composite
def mode_unitaries(draw):
    """Haar-ish random 2x2 unitaries via the exponential map."""
    from scipy.linalg import expm

    entries = [draw(st.floats(-3.0, 3.0)) for _ in range(4)]
    h = np.array(
        [
            [entries[0], entries[2] + 1j * entries[3]],
            [entries[2] - 1j * entries[3], entries[1]],
        ]
    )
    u = expm(1j * h)
    # re-unitarise to kill the expm truncation error before the strict gate
    q, r = np.linalg.qr(u)
    return ModeTransform(q * (np.diag(r) / np.abs(np.diag(r))))
