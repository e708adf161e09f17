import pytest
from hypothesis import strategies as st

from photonic_ssp import SSPInstance

ACCEPTANCE_RESULTS: list[tuple[str, str, str]] = []


def instances(max_n: int = 8, max_element: int = 20, min_n: int = 1):
    return st.lists(
        st.integers(min_value=1, max_value=max_element), min_size=min_n, max_size=max_n
    ).map(lambda els: SSPInstance(tuple(els)))


@pytest.fixture
def acceptance_record():
    def record(criterion: str, ok, detail: str = "") -> None:
        status = ok if isinstance(ok, str) else ("PASS" if ok else "FAIL")
        ACCEPTANCE_RESULTS.append((criterion, status, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, status, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{status}] {criterion}: {detail}")
