import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CRITERIA = {
    1: "bijection round trip",
    2: "SL2 example coefficient identities",
    3: "Heisenberg counterexample counts",
    4: "distribution algebra identities",
    5: "exponential-map axioms",
    6: "BCH group law and epsilon_P",
    7: "prime predicates",
    8: "saturation",
    9: "CLI determinism",
}

_outcomes: dict[int, list[tuple[str, bool]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _outcomes.setdefault(marker.args[0], []).append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number, title in CRITERIA.items():
        results = _outcomes.get(number)
        if results is None:
            tr.write_line("criterion %d (%s): NOT RUN" % (number, title))
            continue
        failed = [name for name, ok in results if not ok]
        status = "PASS" if not failed else "FAIL"
        line = "criterion %d (%s): %s" % (number, title, status)
        if failed:
            line += "  [failing: %s]" % ", ".join(failed)
        tr.write_line(line)
