import pytest
from hypothesis import settings

from invforge.gf import field_of_order

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fields():
    return {q: field_of_order(q) for q in (2, 3, 4, 5, 7, 8, 9)}


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
