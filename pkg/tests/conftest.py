import time
from contextlib import contextmanager

import pytest

_RESULTS: dict[int, tuple[str, bool, float, float]] = {}


@pytest.fixture
def acceptance():
    """Context manager that times one acceptance criterion and records its outcome."""

    @contextmanager
    def run(number: int, title: str, limit: float):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            ok = ok and elapsed < limit
            _RESULTS[number] = (title, ok, elapsed, limit)
            print(f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'} {title} ({elapsed:.2f}s, limit {limit:g}s)")
        assert elapsed < limit, f"runtime {elapsed:.2f}s exceeds {limit:g}s"

    return run


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok, elapsed, limit = _RESULTS[number]
        terminalreporter.write_line(
            f"ACCEPTANCE {number:2d} {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s / {limit:g}s)"
        )
