import os

import pytest

_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one line per acceptance criterion for the terminal summary."""

    def record(key, title, passed, detail):
        status = "PASS" if passed else "FAIL"
        line = f"{key:<5} {status}  {title}: {detail}"
        _ACCEPTANCE.append((key, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE, key=lambda kv: int(kv[0][2:])):
        terminalreporter.write_line(line)


@pytest.fixture(params=["cython", "python"])
def kernel_module(request):
    from qbarrier._backend import compiled_kernels, python_kernels

    if request.param == "python":
        return python_kernels
    mod = compiled_kernels()
    if mod is None:
        pytest.skip("compiled extension not built")
    return mod


@pytest.fixture
def golden_dir():
    return os.path.join(os.path.dirname(__file__), "golden")
