import pytest

ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def criterion():
    """Record an acceptance outcome: ``criterion(number, ok, detail)``."""

    def record(number: int, ok: bool, detail: str = "") -> None:
        ACCEPTANCE.setdefault(number, []).append((bool(ok), detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[number]
        ok = all(p for p, _ in parts)
        failed = [d for p, d in parts if not p]
        detail = "; ".join(failed) if failed else "; ".join(d for _, d in parts if d)
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
