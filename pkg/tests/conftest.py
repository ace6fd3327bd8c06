import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fibercavity import fiber, specfun  # noqa: E402

LAMBDA0 = 0.778

CRITERIA = {
    1: "holey-fiber row (beta, n_eff, FSR)",
    2: "SMF830 row (beta = n_core k0, FSR)",
    3: "mode-volume argmin near 440 nm, linear in L",
    4: "HE11 power in air at 440 nm = 0.49 +/- 0.03",
    5: "Q(R, A) shape and closed form vs Airy linewidth",
    6: "multimode at 1.5 um, single mode at 0.44 um",
    7: "oracle equivalence suites",
    8: "invariance suite",
}


_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    for n in (m.args[0] for m in item.iter_markers("criterion")):
        ok = _OUTCOMES.get(n, True)
        if report.when == "call":
            _OUTCOMES[n] = ok and report.passed
        elif report.failed:
            _OUTCOMES[n] = False


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n not in _OUTCOMES:
            status = "NOT RUN"
        else:
            status = "PASS" if _OUTCOMES[n] else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status} - {CRITERIA[n]}")


@pytest.fixture(params=specfun.available_backends())
def backend(request):
    """Run a test once per available kernel backend."""
    previous = specfun.kernels.NAME
    specfun.set_backend(request.param)
    yield specfun.get_backend(request.param)
    specfun.set_backend(previous)


@pytest.fixture(scope="session")
def ctx():
    return fiber.WavelengthContext(LAMBDA0)


@pytest.fixture(scope="session")
def holey(ctx):
    return fiber.FiberGeometry.silica_rod(1.5, ctx.lambda0)


@pytest.fixture(scope="session")
def holey_he11(holey, ctx):
    return fiber.fundamental_mode(holey, ctx)
