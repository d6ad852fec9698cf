import pytest

#: (criterion number, passed, detail) recorded by the acceptance suite
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def record():
    def _record(num: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append((num, bool(ok), detail))
        print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return _record
