import pytest

_OUTCOMES: dict[int, list[tuple[str, str]]] = {}
_NAMES = {
    1: "entropy closed forms vs quadrature",
    2: "Renyi Hessian",
    3: "Tsallis form",
    4: "Fisher metric vs numeric Fisher information",
    5: "Csiszar divergences induce scaled Fisher",
    6: "metric canonicalization",
    7: "closed-form geodesics",
    8: "distances",
    9: "curvature",
    10: "extended-Gaussian scalar curvature",
    11: "maximum entropy",
    12: "Kubo-Mori and largest metrics",
}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _OUTCOMES.setdefault(mark.args[0], []).append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        for name, status in _OUTCOMES[number]:
            tr.write_line(f"  {status}  [{number}] {name}")
    tr.write_line("")
    for number in sorted(_OUTCOMES):
        subs = _OUTCOMES[number]
        failed = sum(s == "FAIL" for _, s in subs)
        verdict = "FAIL" if failed else "PASS"
        tr.write_line(f"{verdict}  criterion {number:2d}: {_NAMES.get(number, '')} "
                      f"({len(subs) - failed}/{len(subs)} sub-checks passed)")
