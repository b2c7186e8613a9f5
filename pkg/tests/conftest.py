import random

import pytest
from gmpy2 import mpq
from hypothesis import settings
from hypothesis import strategies as st

from localpn.model import LambdaConfig
from localpn.scalars import Cyclo, Poly

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

small_ints = st.integers(min_value=-9, max_value=9)
rationals = st.builds(lambda a, b: mpq(a, b), small_ints, st.integers(min_value=1, max_value=7))
nonzero_rationals = rationals.filter(bool)
cyclo3 = st.builds(lambda a, b: Cyclo(3, [a, b]), rationals, rationals)
nonzero_cyclo3 = cyclo3.filter(bool)
scalars = st.one_of(rationals, cyclo3)


def polys(coeff=rationals, max_deg=4):
    return st.lists(coeff, min_size=1, max_size=max_deg + 1).map(Poly)


nonzero_polys = polys().filter(bool)


def random_rational_pair(rng: random.Random, n: int = 1):
    """n+1 distinct nonzero small rationals."""
    while True:
        lams = [mpq(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n + 1)]
        if all(lams) and len(set(lams)) == n + 1:
            try:
                return LambdaConfig(n, tuple(lams))
            except ArithmeticError:
                continue


@pytest.fixture
def rng():
    return random.Random(20261018)


@pytest.fixture(scope="session")
def p1():
    return LambdaConfig.parse(1, "1,2")


@pytest.fixture(scope="session")
def spl2():
    return LambdaConfig.spl2_canonical()


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_c" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.rsplit("::", 1)[1]] = report.outcome
    elif "test_acceptance.py::test_c" in report.nodeid and report.failed:
        _acceptance[report.nodeid.rsplit("::", 1)[1]] = "failed"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        number = int(name[len("test_c"):len("test_c") + 2])
        label = name[len("test_c") + 3:].replace("_", " ")
        status = "PASS" if _acceptance[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} ({label}): {status}")
