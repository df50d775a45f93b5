import numpy as np
import pytest

from fovlap.camera import FootprintPolygon

ACCEPTANCE_LINES = []


def record(criterion, passed, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


def random_convex_quad(rng, scale=1.0):
    """Four sorted points on a circle under a random orientation-preserving affine map."""
    ang = np.sort(rng.uniform(0, 2 * np.pi, 4))
    while np.min(np.diff(np.r_[ang, ang[0] + 2 * np.pi])) < 0.2:
        ang = np.sort(rng.uniform(0, 2 * np.pi, 4))
    pts = np.c_[np.cos(ang), np.sin(ang)]
    a = rng.normal(size=(2, 2))
    if np.linalg.det(a) < 0:
        a[:, 0] *= -1
    while abs(np.linalg.det(a)) < 0.2:
        a = rng.normal(size=(2, 2))
        if np.linalg.det(a) < 0:
            a[:, 0] *= -1
    pts = pts @ a.T * scale + rng.uniform(-0.7, 0.7, 2) * scale
    return FootprintPolygon(tuple(map(tuple, pts.tolist())), True)


def square(x0, y0, side):
    return FootprintPolygon(((x0, y0), (x0 + side, y0), (x0 + side, y0 + side),
                             (x0, y0 + side)), True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
