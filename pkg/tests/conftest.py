import warnings

import pytest

from bandcert.geometry import DiskCrystal
from bandcert.limit_spectra import assemble_limit_spectra

_CRITERIA: dict[int, str] = {}


@pytest.fixture(scope="session")
def disk():
    return DiskCrystal(1, 0.3, 0.45)


@pytest.fixture(scope="session")
def disk_spectra(disk):
    return assemble_limit_spectra(disk, n_max=8, k_max=8, j_max=8)


@pytest.fixture(autouse=True)
def _strict_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("error", RuntimeWarning)
        yield


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            number, title = marker.args
            _CRITERIA[number] = title
            item.user_properties.append(("criterion", number))


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion; a criterion fails if any
    of its tests fails in setup, call or teardown."""
    if not _CRITERIA or terminalreporter.config.option.collectonly:
        return
    status: dict[int, str] = {}
    for reports in terminalreporter.stats.values():
        for rep in reports:
            number = dict(getattr(rep, "user_properties", ()) or ()).get("criterion")
            if number is None:
                continue
            if rep.outcome == "failed":
                status[number] = "FAIL"
            elif rep.outcome == "skipped":
                status.setdefault(number, "SKIP")
            elif rep.when == "call" and status.get(number) != "FAIL":
                status[number] = "PASS"
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        verdict = status.get(number, "NOT RUN")
        terminalreporter.write_line(f"criterion {number:>2}: {verdict:<7} {_CRITERIA[number]}")
