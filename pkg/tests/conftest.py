import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SINGULAR = np.array([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]], dtype=float)
WORKED = np.array([[2, 4], [0.5, 2]], dtype=float)
SYM = np.array([[3, 1], [1, 3]], dtype=float)


def random_complex(rng, n, scale_diag=True):
    """Entries uniform in the unit disk, rows scaled by a random diagonal."""
    r = np.sqrt(rng.uniform(0, 1, (n, n)))
    t = rng.uniform(0, 2 * np.pi, (n, n))
    a = r * np.exp(1j * t)
    if scale_diag:
        a = np.diag(10 ** rng.uniform(-1, 1, n)) @ a
    return a


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# Zero or a magnitude in [1e-6, 10]; subnormal entries only exercise underflow, not the mathematics.
finite = st.one_of(st.just(0.0), st.floats(1e-6, 10), st.floats(-10, -1e-6))


@st.composite
def complex_matrices(draw, min_n=1, max_n=6, sparsity=True):
    n = draw(st.integers(min_n, max_n))
    re = draw(arrays(float, (n, n), elements=finite))
    im = draw(arrays(float, (n, n), elements=finite))
    a = re + 1j * im
    if sparsity:
        mask = draw(arrays(bool, (n, n)))
        a = np.where(mask, a, 0)
    return a


# One line per acceptance criterion, filled in by tests/test_acceptance.py.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
