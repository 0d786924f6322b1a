import pytest

from rsg import words as W
from rsg.actions import FreeGroupTreeAction
from rsg.sampling import make_rng
from rsg.semidirect import SemidirectProduct


@pytest.fixture
def ab():
    return W.Alphabet("ab")


@pytest.fixture
def act(ab):
    return FreeGroupTreeAction(ab)


@pytest.fixture
def sd(act):
    return SemidirectProduct(act)


@pytest.fixture
def rng():
    return make_rng(12345)


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion():
    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE[number] = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
