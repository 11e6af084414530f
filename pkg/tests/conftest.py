import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion.

    Usage: ``criterion("3", ok, "detail")`` then ``assert ok``.
    """

    def record(key: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE[key] = (bool(ok), detail)
        line = f"criterion {key}: {'PASS' if ok else 'FAIL'} {detail}".rstrip()
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k)):
        ok, detail = _ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key:>2}  {detail}")
