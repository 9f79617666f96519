import numpy as np
import pytest
from hypothesis import settings

from qlcwt.quaternion import Grid2D, QSignal2D

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def random_signal(rng, n=16, length=8.0, decay=4.0):
    """Random quaternion field with a Gaussian envelope so it decays at the window edge."""
    g = Grid2D.centered(n, length)
    x1, x2 = g.mesh()
    env = np.exp(-(x1**2 + x2**2) / decay)
    return QSignal2D(g, rng.normal(size=(n, n, 4)) * env[..., None])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
