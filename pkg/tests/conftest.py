import functools

import pytest
from hypothesis import HealthCheck, settings

from stabletwist.algebra import QuiverPresentation, quiver_algebra
from stabletwist.config import load
from stabletwist.exactcore import make_field

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# Quiver of the basic algebra of kS4 in characteristic 2: alpha: 1 -> 2,
# beta: 2 -> 1, loops delta at 1 and gamma at 2.
LAMBDA_ARROWS = [("alpha", "1", "2"), ("beta", "2", "1"), ("delta", "1", "1"), ("gamma", "2", "2")]
LAMBDA_LITERAL = ["alpha*beta", "delta^2", "gamma*alpha", "gamma*beta", "alpha*delta*beta - gamma^2"]
LAMBDA_RELATIONS = [
    "alpha*beta",
    "delta^2",
    "gamma*alpha",
    "beta*gamma",
    "alpha*delta*beta - gamma^2",
    "delta*beta*alpha - beta*alpha*delta",
]
BRAUER_ARROWS = [("alpha", "1", "1"), ("gamma", "1", "2"), ("delta", "2", "1"), ("beta", "2", "2")]


def brauer_relations(n):
    a, b = "*".join(["alpha*delta*beta*gamma"] * n), "*".join(["delta*beta*gamma*alpha"] * n)
    c, d = "*".join(["beta*gamma*alpha*delta"] * n), "*".join(["gamma*alpha*delta*beta"] * n)
    return [f"{a} - {b}", f"{c} - {d}", "alpha^2", "delta*gamma", "beta^2", "gamma*delta"]


@functools.lru_cache(maxsize=None)
def experiment(name):
    return load(name, seed=0)


@pytest.fixture(scope="session")
def F2():
    return make_field(2)


@pytest.fixture(scope="session")
def F4():
    return make_field(2, 2, [1, 1, 1])


@pytest.fixture(scope="session")
def lam(F4):
    return quiver_algebra(F4, QuiverPresentation(["1", "2"], LAMBDA_ARROWS, LAMBDA_RELATIONS, 6))


@pytest.fixture(scope="session")
def brauer(F2):
    return quiver_algebra(F2, QuiverPresentation(["1", "2"], BRAUER_ARROWS, brauer_relations(2), 8))


@pytest.fixture(scope="session")
def exp():
    return experiment


# criterion number -> "Criterion N: PASS/FAIL ..." line, filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
