from pathlib import Path

import pytest

from lorlie import exact as ex
from lorlie.corpus import heisenberg
from lorlie.lie import LieAlgebra
from lorlie.metric import PseudoEuclideanLieAlgebra
from lorlie.pseudo import MetricTensor

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "lorlie" / "fixtures"


def pe(alg, g):
    return PseudoEuclideanLieAlgebra(alg, MetricTensor(ex.mat(g)))


def r2():
    return LieAlgebra.from_brackets(2, {(0, 1): [0, 1]})


@pytest.fixture
def h3_euclid():
    return pe(heisenberg(1), ex.eye(3))


@pytest.fixture
def r2_euclid():
    return pe(r2(), ex.eye(2))


def pytest_sessionstart(session):
    import time

    import acceptance_log

    acceptance_log.SESSION_START[0] = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import time

    import acceptance_log

    if not acceptance_log.RESULTS:
        return
    elapsed = time.perf_counter() - acceptance_log.SESSION_START[0]
    ok = elapsed < acceptance_log.RUNTIME_LIMIT
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance_log.RESULTS):
        terminalreporter.write_line(acceptance_log.RESULTS[number])
    terminalreporter.write_line(
        f"suite runtime {'PASS' if ok else 'FAIL'}  {elapsed:.1f} s (limit {acceptance_log.RUNTIME_LIMIT:.0f} s)")


def pytest_sessionfinish(session, exitstatus):
    import time

    import acceptance_log

    if acceptance_log.RESULTS and time.perf_counter() - acceptance_log.SESSION_START[0] >= acceptance_log.RUNTIME_LIMIT:
        session.exitstatus = 1
