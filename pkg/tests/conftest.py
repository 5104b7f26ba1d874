import pytest

from seslab.constructions import sp_group
from seslab.verify import sp_orders


@pytest.fixture(scope="session")
def spectrum_cache(tmp_path_factory):
    return tmp_path_factory.mktemp("sp-cache")


@pytest.fixture(scope="session")
def sp62_report(spectrum_cache):
    """Sp6(2) spectrum computed once per session into a fresh cache."""
    import time
    t0 = time.perf_counter()
    rep = sp_orders(6, 2, cache_dir=spectrum_cache)
    rep["_seconds"] = time.perf_counter() - t0
    return rep


@pytest.fixture(scope="session")
def sp43():
    return sp_group(4, 3)


ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def criterion():
    """Record and print one pass/fail line per acceptance criterion."""
    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE[number] = (title, bool(ok), detail)
        print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title} {detail}".rstrip())
        assert ok, f"criterion {number} failed: {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {title} {detail}".rstrip())
