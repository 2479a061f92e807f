import pytest

_CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_CRITERIA] = {}


@pytest.fixture
def criterion(request):
    """``criterion(number, ok, detail)`` records one check and prints its verdict."""
    log = request.config.stash[_CRITERIA]

    def record(number, ok, detail):
        log.setdefault(number, []).append((bool(ok), detail))
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_CRITERIA, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(log):
        checks = log[number]
        ok = all(passed for passed, _ in checks)
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}")
        for passed, detail in checks:
            terminalreporter.write_line(f"    [{'ok' if passed else 'xx'}] {detail}")
