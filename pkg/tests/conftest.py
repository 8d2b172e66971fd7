import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_RESULTS = pytest.StashKey[dict]()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


class CriterionReport:
    """Collects named sub-checks of one acceptance criterion."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.checks = []

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append((name, bool(ok), detail))
        return bool(ok)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)

    def line(self) -> str:
        failed = [f"{n} ({d})" if d else n for n, ok, d in self.checks if not ok]
        status = "PASS" if self.passed else "FAIL"
        tail = f"failed: {'; '.join(failed)}" if failed else f"{len(self.checks)} checks"
        return f"{status} criterion {self.number}: {self.title} | {tail}"

    def assert_passed(self):
        assert self.passed, self.line()


@pytest.fixture
def criterion(request):
    results = request.config.stash.setdefault(_RESULTS, {})

    def make(number: int, title: str) -> CriterionReport:
        # parametrized tests of one criterion share a report
        if number not in results:
            results[number] = CriterionReport(number, title)
        return results[number]

    yield make


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        rep = results[number]
        terminalreporter.write_line(rep.line())
        for name, ok, detail in rep.checks:
            terminalreporter.write_line(f"    {'ok  ' if ok else 'FAIL'} {name}: {detail}")
