from collections import OrderedDict

import pytest

from qesmatch import matcher
from qesmatch.reference import CASES

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = OrderedDict()


@pytest.fixture(scope="session")
def solved():
    """Exact matches for the four published correspondences, keyed by case name."""
    return {name: matcher.match(c.n, c.r, c.N, c.sign_b) for name, c in CASES.items()}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
