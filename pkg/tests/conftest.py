import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from necroswap import kernels  # noqa: E402

BACKENDS = kernels.available_backends()
ACCEPTANCE = {}


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Route every kernel call through one backend for the test's duration."""
    mod = BACKENDS[request.param]
    for name in ("apply_1q", "apply_2q", "canonical_quantize"):
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    monkeypatch.setattr(kernels, "BACKEND", mod.BACKEND)
    return request.param


@pytest.fixture
def record_criterion():
    def record(number, name, passed, detail=""):
        ACCEPTANCE[number] = (name, bool(passed), detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        name, passed, detail = ACCEPTANCE[number]
        line = f"criterion {number} {name}: {'PASS' if passed else 'FAIL'}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
