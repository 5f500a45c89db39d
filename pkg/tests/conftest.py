import pytest
from hypothesis import HealthCheck, settings

from symcubic import classify, enumerate_comajors
from symcubic.circle import Chord

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def atlas7():
    return enumerate_comajors(7, period_mode="upto")


@pytest.fixture(scope="session")
def type_b():
    return classify(Chord("5/48", "7/48"))


@pytest.fixture(scope="session")
def type_d():
    return classify(Chord("7/78", "4/39"))


@pytest.fixture(scope="session")
def main_record():
    return classify(Chord("1/6", "1/3"))


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    def record(label: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE.append((label, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
