from __future__ import annotations

import sys

import numpy as np
import pytest

from floquetsim.presets import SX, SZ, driven_qubit, hubbard2


@pytest.fixture(scope="session")
def qubit():
    return driven_qubit()


@pytest.fixture(scope="session")
def hubbard():
    return hubbard2()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_state(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_hermitian(rng, d, scale=1.0):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (a + a.conj().T) / 2


__all__ = ["SX", "SZ", "random_state", "random_hermitian"]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", [])
    if lines:
        terminalreporter.section("acceptance")
        for line in sorted(lines):
            terminalreporter.write_line(line)
