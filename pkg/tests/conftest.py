from pathlib import Path

import pytest

from huipminer import UtilityTable, to_c_database
from huipminer.ingest import parse_esequence_db, parse_utility_table

DATA = Path(__file__).parent / "data"

# expected C-database dump of table1.tsv, one row per sid
TABLE2 = {
    "1": "(A,8)(∅,2)(B,3)(∅,3)(C,1)({C,E},2)(C,1)",
    "2": "(A,4)(∅,3)(C,1)({C,E,F},3)(C,2)",
    "3": "(B,1)({A,B},5)(A,2)(C,2)({C,E},2)(C,2)",
    "4": "(B,3)({A,B,D},2)({A,D},3)(D,2)(∅,4)(C,2)({C,E},2)(C,2)",
}


@pytest.fixture(scope="session")
def table1():
    db, _ = parse_esequence_db((DATA / "table1.tsv").read_text())
    return db


@pytest.fixture(scope="session")
def table2(table1):
    return to_c_database(table1)


@pytest.fixture
def table4():
    return parse_utility_table((DATA / "table4_utilities.tsv").read_text())


@pytest.fixture
def ones():
    return UtilityTable({l: 1 for l in "ABCDEF"})


@pytest.fixture
def cseq(table2):
    return {c.sid: c for c in table2}


_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.skipped):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            prev = _criteria.get(value, "PASS")
            outcome = "SKIP" if report.skipped else ("PASS" if report.passed else "FAIL")
            _criteria[value] = "FAIL" if "FAIL" in (prev, outcome) else outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        terminalreporter.write_line(f"criterion {n}: {_criteria[n]}")


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            item.user_properties.append(("criterion", marker.args[0]))
