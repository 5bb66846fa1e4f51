import pytest

from qfed.stack import Layer, LayerStack

CAVITY_D = 10.005546

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def cavity_stack(d=CAVITY_D, temps=(300.0, 200.0, 100.0), loss=(0.4, 0.2, 0.5)):
    return LayerStack((
        Layer(complex(2.5, loss[0]), None, temps[0]),
        Layer(complex(1.2, loss[1]), d, temps[1]),
        Layer(complex(1.5, loss[2]), None, temps[2]),
    ))


def uniform_stack(n, T=300.0):
    return LayerStack((Layer(n, None, T), Layer(n, None, T)))


@pytest.fixture
def cavity():
    return cavity_stack()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
