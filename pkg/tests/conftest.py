import pytest

from fanoverify.field import FieldSpec

FIELDS = [FieldSpec(0), FieldSpec(2), FieldSpec(3), FieldSpec(5), FieldSpec(7), FieldSpec(101)]


@pytest.fixture(params=FIELDS, ids=lambda f: f.name)
def field(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
