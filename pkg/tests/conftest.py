import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def ball_points(rng, count, n, radius=1.0):
    g = rng.standard_normal((count, 2 * n))
    d = g[:, :n] + 1j * g[:, n:]
    d /= np.linalg.norm(d, axis=1)[:, None]
    return d * (radius * rng.random(count) ** (1.0 / (2 * n)))[:, None]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.REPORT):
            terminalreporter.write_line(line)
