import numpy as np
import pytest

from ddgraph.algebra import ring_make
from ddgraph.designs import affine_from_ag
from ddgraph.symdesigns import symdesign_null_polarity
from ddgraph.symplectic import symplectic_graph


@pytest.fixture(scope="session")
def ag32():
    return affine_from_ag(2, 3)


@pytest.fixture(scope="session")
def np15():
    return symdesign_null_polarity(2, 2)


@pytest.fixture(scope="session")
def symp():
    """X and Y over both local rings of order 4, keyed like ("Y", "z_p2")."""
    out = {}
    for kind in ("z_p2", "fq_x2"):
        ring = ring_make(kind, 2)
        for variant in ("X", "Y"):
            out[variant, kind] = symplectic_graph(variant, 2, ring)
    return out


def random_graph(rng: np.random.Generator, v: int, p: float = 0.5) -> np.ndarray:
    upper = np.triu(rng.random((v, v)) < p, 1)
    return upper | upper.T


_ACCEPTANCE: list[str] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    detail = dict(item.user_properties).get("detail", "")
    status = "PASS" if rep.passed else "FAIL"
    line = f"criterion {marker.args[0]} [{status}] {marker.args[1]} ({call.duration:.1f}s) {detail}".rstrip()
    _ACCEPTANCE.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
