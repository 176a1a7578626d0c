import random

import pytest

from scmsbke import kernels


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    previous = kernels.BACKEND
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


_ACCEPTANCE = {}


@pytest.fixture
def record_criterion():
    """Record one acceptance line; returns ``ok`` so the caller can assert on it."""

    def record(number, title, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}" + (f" ({detail})" if detail else "")
        _ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
