from pathlib import Path

import pytest

from gridsign.grid import GridDiagram

DATA = Path(__file__).parent / "data"

GRIDS = {
    "unknot2": ([1, 2], [2, 1]),
    "unknot3": ([1, 2, 3], [2, 3, 1]),
    "unlink4": ([1, 2, 3, 4], [2, 1, 4, 3]),
    "trefoil5": ([4, 5, 1, 2, 3], [2, 3, 4, 5, 1]),
}


def grid(name: str) -> GridDiagram:
    o, x = GRIDS[name]
    return GridDiagram.from_one_indexed(o, x)


@pytest.fixture
def unknot2():
    return grid("unknot2")


@pytest.fixture
def unknot3():
    return grid("unknot3")


@pytest.fixture
def unlink4():
    return grid("unlink4")


@pytest.fixture
def trefoil5():
    return grid("trefoil5")


@pytest.fixture(params=sorted(GRIDS))
def any_grid(request):
    return grid(request.param)


@pytest.fixture
def data_dir():
    return DATA



ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
