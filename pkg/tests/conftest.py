import os

import numpy as np
import pytest

# Property-suite seed; override with OBITLAB_TEST_SEED for a different draw.
SEED = int(os.environ.get("OBITLAB_TEST_SEED", "20240611"))


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_orthogonal(rng, d):
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def random_unitary(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, max_norm=5.0):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    h = (a + a.conj().T) / 2
    h *= rng.uniform(0.1, max_norm) / np.max(np.abs(np.linalg.eigvalsh(h)))
    # exact Hermitian symmetry after scaling
    h = (h + h.conj().T) / 2
    return h


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
