from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings, strategies as st

from floquetsim.bounds import (REGIMES, BoundReport, floquet_magnus, fm_first_order, fm_first_order_quadrature,
                               lr_bound, lr_bound_exp, lr_bound_stirling, premise_error, prop1_threshold,
                               resource_table, resources, stirling_holds, symmetry_bound, symmetry_tail,
                               taylor_tail, truncation_bound, truncation_bound_exp, truncation_bound_split)
from floquetsim.errors import IndexOutOfRange, InvalidEpsilon, ValidationError
from floquetsim.hamiltonian import from_components
from floquetsim.presets import SZ, driven_qubit
from floquetsim.propagator import exact_propagator
from floquetsim.sambe import exp_constants


def test_lr_examples():
    assert lr_bound(4, 1.0, 0.5, 1) == pytest.approx(0.005208333333333333)
    assert lr_bound(3, 0.0, 1.0, 1) == 0.0
    assert lr_bound(4, 1.0, 0.5, 1).premise_ok
    assert not lr_bound(1, 1.0, 2.0, 1).premise_ok


@settings(max_examples=50, deadline=None)
@given(dl=st.integers(1, 60), x=st.floats(0.01, 10), m=st.integers(1, 3))
def test_stirling_form_dominates(dl, x, m):
    assert lr_bound(dl, x, 1.0, m) <= lr_bound_stirling(dl, x, 1.0, m) * (1 + 1e-12) or lr_bound(dl, x, 1.0, m) == 1.0


def test_lr_exp_examples():
    beta, zp = exp_constants(1.0)
    a = lr_bound_exp(5, 1.0, 1.0, 0.3)
    # shifting dl by zeta' multiplies by 1/e (exponent is linear in dl)
    f = lambda dl: -(dl - 2 * beta * zp * 0.3) / zp + 2 / beta  # noqa: E731
    assert math.log(a) == pytest.approx(f(5))
    assert f(5 + zp) - f(5) == pytest.approx(-1.0)


def test_truncation_examples():
    assert truncation_bound(5, 1.0, 1.0, 1) == pytest.approx(20 / 120)
    assert truncation_bound(5, 0.0, 1.0, 1) == 0.0
    e1, e2 = truncation_bound_split(5, 1.0, 1.0, 1)
    assert e1 + e2 == pytest.approx(truncation_bound(5, 1.0, 1.0, 1))


def test_truncation_monotone():
    vals = [truncation_bound(L, 1.0, 2.0, 1) for L in range(4, 30)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def test_truncation_exp_decreasing():
    vals = [truncation_bound_exp(L, 1.0, 1.0, 1.0) for L in range(5, 30)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_prop1_threshold():
    x = prop1_threshold(1.0, 1e-6)
    assert x == pytest.approx(math.e + 4 * math.log(1e6) / math.log(math.e + math.log(1e6)))
    for k, eta in [(1.0, 1e-6), (3.0, 1e-3), (0.2, 1e-9)]:
        xs = prop1_threshold(k, eta)
        for x in (xs, 2 * xs):
            assert (k / x) ** x <= eta
    assert prop1_threshold(2.0, 1 - 1e-12) == pytest.approx(2 * math.e, rel=1e-6)
    with pytest.raises(ValidationError):
        prop1_threshold(1.0, 2.0)


def test_stirling_helper():
    assert all(stirling_holds(n) for n in range(1, 171))


def test_taylor_tail():
    assert taylor_tail(1.0, 0) == pytest.approx(math.e)
    assert taylor_tail(1.0, 2) == pytest.approx(math.e - 2)


def test_premise_error_vs_bound():
    for L in range(3, 30):
        assert truncation_bound(L, 1.0, 1.0, 1) <= premise_error(L, 1.0, 1.0, 1) * (1 + 1e-12) or L < 2


def test_symmetry_examples():
    b = symmetry_bound(0, 0, 6, 1.0, 1.0, 1)
    assert 0 < b < 1e-50
    assert symmetry_bound(3, 1, 6, 0.0, 1.0, 1) == 0.0
    assert symmetry_tail(0, 0, 4, 1.0, 1.0, 1) <= symmetry_bound(0, 0, 4, 1.0, 1.0, 1)
    with pytest.raises(IndexOutOfRange):
        symmetry_bound(0, 7, 6, 1.0, 1.0, 1)
    with pytest.raises(IndexOutOfRange):
        symmetry_bound(25, 0, 6, 1.0, 1.0, 1)


def test_bound_report():
    r = BoundReport("x", 1.0, 0.5)
    assert r.slack == 0.5 and r.ok
    assert not BoundReport("x", 1.0, 1.1).ok


def test_resource_table_rows():
    rows = resource_table(1.0, 1.0, 1.0, 1.0, 1e-3)
    assert [r.regime for r in rows] == list(REGIMES)
    assert all(r.scaling_only and r.query_complexity >= 0 and r.ancilla_qubits >= 0 for r in rows)


def test_resources_long_time_beats_dyson():
    lt = resources("LongTime", 100, 100, 1, 100, 1e-3)
    dy = resources("TruncatedDyson", 100, 100, 1, 100, 1e-3)
    assert lt.query_complexity < dy.query_complexity
    assert lt.extra["crossover_time"] == pytest.approx(math.exp(100))
    assert lt.extra["high_frequency"] is False
    assert resources("LongTime", 1, 1, 2, 10, 1e-3, lam=1.0).extra["high_frequency"] is True


def test_resources_adiabatic_additive():
    a = resources("Adiabatic", 1, 1, 1, 1, 1e-3).query_complexity
    b = resources("Adiabatic", 1, 1, 1, 1, 1e-6).query_complexity
    assert b - a <= 2 * math.log(1e3)


def test_resources_ancilla_formula():
    r = resources("Adiabatic", 1, 1, 1, 1, 1e-3, n_a=3, l_max=29)
    assert r.ancilla_qubits == 3 + math.ceil(math.log2(8 * 29))


@pytest.mark.parametrize("regime", REGIMES)
def test_resources_monotone(regime):
    q = lambda t, e: resources(regime, 2.0, 1.0, 1.0, t, e).query_complexity  # noqa: E731
    assert q(2.0, 1e-3) >= q(1.0, 1e-3)
    assert q(1.0, 1e-6) >= q(1.0, 1e-3)


def test_resources_errors():
    with pytest.raises(InvalidEpsilon):
        resources("Adiabatic", 1, 1, 1, 1, 0.0)
    with pytest.raises(ValidationError):
        resources("Nope", 1, 1, 1, 1, 0.1)


def test_fm_static():
    H = from_components(1.0, {0: SZ})
    assert np.allclose(fm_first_order(H), 0)
    assert np.allclose(floquet_magnus(H, 0).H_FM, SZ)


@pytest.mark.parametrize("phase", [0.0, math.pi / 2, 1.0])
def test_fm_closed_form_vs_quadrature(phase):
    H = driven_qubit(phase=phase).H
    assert np.max(np.abs(fm_first_order(H) - fm_first_order_quadrature(H))) <= 1e-8


def test_fm_hermitian():
    H = from_components(2.0, {0: SZ, 1: np.array([[0.3, 1j], [0.2, -0.1]]), 2: np.array([[0, 0.5], [0, 0]])})
    h = floquet_magnus(H, 1).H_FM
    assert np.max(np.abs(h - h.conj().T)) <= 1e-12
    assert np.max(np.abs(fm_first_order(H) - fm_first_order_quadrature(H))) <= 1e-8


def test_fm_error_grows_with_n():
    H = driven_qubit(omega=12.0, phase=math.pi / 2).H
    U1 = exact_propagator(H, H.period, 1e-12)
    hfm = floquet_magnus(H, 1).H_FM
    errs = [np.linalg.norm(np.linalg.matrix_power(U1, n) - sla.expm(-1j * hfm * n * H.period), 2)
            for n in (1, 2, 4)]
    assert errs[0] < errs[1] < errs[2]
