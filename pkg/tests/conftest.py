from __future__ import annotations

from collections import OrderedDict

_results: dict[int, dict] = OrderedDict()


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            cid, text = mark.args
            _results.setdefault(cid, {"text": text, "outcomes": []})
            item.user_properties.append(("acceptance", cid))


def pytest_runtest_logreport(report):
    cid = dict(report.user_properties).get("acceptance")
    if cid is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _results[cid]["outcomes"].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_results):
        entry = _results[cid]
        outcomes = entry["outcomes"]
        if not outcomes:
            verdict = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        terminalreporter.write_line(f"[{verdict:>7}] criterion {cid:2d}: {entry['text']}")
