import pytest

from grigorchuk.groups import ETA, XI, build_group

ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, text): exit criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, text = mark.args
        status = "PASS" if rep.outcome == "passed" else "FAIL"
        extra = ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}"
                          for k, v in rep.user_properties)
        ACCEPTANCE.append((number, item.name, status, text + (f"; {extra}" if extra else "")))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, status, text in sorted(ACCEPTANCE, key=lambda r: (r[0], r[1])):
        terminalreporter.write_line(f"[{status}] criterion {number:>2}: {text} ({name})")


@pytest.fixture(scope="session")
def ctx_xi():
    return build_group(XI)


@pytest.fixture(scope="session")
def ctx_eta():
    return build_group(ETA)
