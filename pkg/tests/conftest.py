import pytest
from hypothesis import settings

from homcode.complex_core import (
    circle,
    interval,
    projective_plane_min,
    sphere_cube,
    square_grid,
    torus_grid,
)

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FIXTURES = {
    "circle3": lambda: circle(3),
    "circle4": lambda: circle(4),
    "interval3": lambda: interval(3),
    "torus22": lambda: torus_grid(2, 2),
    "torus33": lambda: torus_grid(3, 3),
    "torus23": lambda: torus_grid(2, 3),
    "square22": lambda: square_grid(2, 2),
    "cube": sphere_cube,
    "rp2": projective_plane_min,
}

CLOSED_SURFACES = ["torus22", "torus33", "torus23", "cube", "rp2"]

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=sorted(FIXTURES))
def any_complex(request):
    return FIXTURES[request.param]()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
