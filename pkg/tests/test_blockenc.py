from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from floquetsim.blockenc import (BlockEncoding, chebyshev_error, comparator, encode_effective, encode_lcu,
                                 encode_linear_potential, g_coef, jacobi_anger_tails, lp_oracle_direct,
                                 lp_oracle_via_comparator, lp_signs, query_closed_form, query_degree, reorder,
                                 walk_eigenphases, walk_operator)
from floquetsim.errors import (AllZero, InvalidEpsilon, MissingModeEncoding, NegativeCoefficient, NonHermitian,
                               NonUnitaryTerm)
from floquetsim.hamiltonian import LCUDecomposition, from_components
from floquetsim.presets import SX, SZ, adiabatic_mode_oracle, adiabatic_prep, gaussian_amplitude, gaussian_packet
from floquetsim.sambe import build_effective_pbc, build_linear_potential


def test_single_term():
    be = encode_lcu([(1.0, SX)])
    assert be.alpha == 1.0
    assert np.allclose(be.encoded(), SX)


def test_two_terms():
    be = encode_lcu([(0.5, SZ), (0.5, SX)])
    assert be.alpha == pytest.approx(1.0)
    assert be.residual() <= 1e-12
    assert np.allclose(be.encoded(), 0.5 * SZ + 0.5 * SX)


def test_lcu_errors():
    with pytest.raises(NegativeCoefficient):
        encode_lcu([(-1.0, SX)])
    with pytest.raises(NonUnitaryTerm):
        encode_lcu([(1.0, 2 * SX)])


def test_adiabatic_mode_oracles():
    m = adiabatic_prep()
    for sign in (1, -1):
        O, G = adiabatic_mode_oracle(m, sign)
        g = np.kron(G[:, None], np.eye(2))
        enc = g.T @ O @ g
        ref = 2 * m.H.component(sign) / (m.extras["abar0"] + m.extras["abar1"])
        assert np.max(np.abs(enc - ref)) <= 1e-10
        assert np.allclose(O.conj().T @ O, np.eye(4))
    for mode in (1, -1):
        assert encode_lcu(m.lcu, mode).residual() <= 1e-10


def test_comparator_examples():
    c = comparator(2)
    n = 4

    def idx(l, lp, b):
        return (l * n + lp) * 2 + b

    e = np.zeros(2 * n * n)
    e[idx(0, 0, 0)] = 1
    assert (c @ e)[idx(0, 0, 0)] == 1
    e[:] = 0
    e[idx(1, 0, 0)] = 1
    assert (c @ e)[idx(1, 0, 1)] == 1
    assert abs(c.T @ c - sp.identity(2 * n * n)).max() == 0


@pytest.mark.parametrize("L", [1, 2, 4, 8])
def test_comparator_matches_direct(L):
    ref = sp.kron(lp_oracle_direct(L), sp.diags([1.0, -1.0]))
    assert abs(lp_oracle_via_comparator(L) - ref).max() <= 1e-12


def test_lp_signs_are_pm_one():
    assert set(np.unique(lp_signs(3))) == {-1.0, 1.0}


def test_linear_potential_l1():
    be = encode_linear_potential(1, 2.0)
    assert be.alpha == pytest.approx(4.0)
    assert np.allclose(be.encoded(), np.diag([0.0, 2.0]) / 4.0)


@pytest.mark.parametrize("L", [1, 2, 3, 5, 8])
def test_linear_potential_encodes(L):
    be = encode_linear_potential(L, 0.7, d=2)
    ref = build_linear_potential(L, 0.7, 2).toarray() / (2 * L * 0.7)
    assert np.max(np.abs(be.encoded() - ref)) <= 1e-12
    assert be.unitarity_error() <= 1e-12
    assert be.state_norm_error() <= 1e-12


def test_linear_potential_unpadded():
    be = encode_linear_potential(3, 1.0, padded=False)
    assert be.alpha == pytest.approx(3.0)
    assert be.residual() <= 1e-12


@pytest.mark.parametrize("L", [2, 4])
def test_effective_matches_pbc(qubit, L):
    be = encode_effective(qubit.H, L, qubit.lcu)
    ref = build_effective_pbc(qubit.H, L).toarray() / (qubit.lcu.alpha + 2 * L * qubit.H.omega)
    assert np.max(np.abs(be.encoded() - ref)) <= 1e-10
    assert be.unitarity_error() <= 1e-12
    assert be.alpha >= np.linalg.norm(ref * be.alpha, 2)


def test_effective_state_weights(qubit):
    L = 2
    be = encode_effective(qubit.H, L, qubit.lcu)
    a = qubit.lcu.alpha + 2 * L * qubit.H.omega
    half = be.oracle_state.size // 2
    w0, w1 = be.oracle_state[:half], be.oracle_state[half:]
    assert np.linalg.norm(w0) ** 2 == pytest.approx(qubit.lcu.alpha / a)
    assert np.linalg.norm(w1) ** 2 == pytest.approx(2 * L * qubit.H.omega / a)


def test_effective_static_only():
    H = from_components(1.0, {0: SZ})
    be = encode_effective(H, 2, LCUDecomposition({0: [(1.0, SZ)]}))
    assert be.residual() <= 1e-12


def test_effective_missing_mode(qubit):
    with pytest.raises(MissingModeEncoding):
        encode_effective(qubit.H, 2, LCUDecomposition({0: qubit.lcu.terms[0]}))


def test_g_coef():
    assert np.allclose(g_coef([0, 3, 0]), [0, 1, 0])
    assert np.allclose(g_coef([1, 2, 1]), [0.5, 1 / math.sqrt(2), 0.5])
    with pytest.raises(AllZero):
        g_coef([0, 0])
    with pytest.raises(NegativeCoefficient):
        g_coef([1, -1])


def test_g_coef_gaussian():
    g = gaussian_packet()
    amps = [g.lcu.alphas[m] for m in range(-6, 7) if m in g.lcu.alphas]
    v = g_coef(amps)
    assert abs(np.linalg.norm(v) - 1) <= 1e-12
    ref = [gaussian_amplitude(m, 2, 1.0) for m in range(1, 7)]
    assert np.allclose([g.lcu.alphas[m] for m in range(1, 7)], ref, atol=1e-12)


def _walk_err(be):
    return max(c.error for c in walk_eigenphases(walk_operator(be)))


def test_walk_trivial_targets():
    be = encode_lcu([(1.0, np.eye(2, dtype=complex))])
    checks = walk_eigenphases(walk_operator(be))
    assert all(c.expected == 0 and c.error <= 1e-8 for c in checks)
    be = encode_lcu([(0.5, np.eye(2, dtype=complex)), (0.5, -np.eye(2, dtype=complex))])
    checks = walk_eigenphases(walk_operator(be))
    assert all(abs(c.expected - math.pi / 2) < 1e-12 and c.error <= 1e-8 for c in checks)


def test_walk_effective(qubit):
    w = walk_operator(encode_effective(qubit.H, 2, qubit.lcu))
    assert w.hermitized
    assert _walk_err(w.source) <= 1e-8
    assert np.allclose(w.matrix.conj().T @ w.matrix, np.eye(w.matrix.shape[0]), atol=1e-12)


def test_walk_rejects_non_hermitian_target():
    m = adiabatic_prep()
    with pytest.raises(NonHermitian):
        walk_eigenphases(walk_operator(encode_lcu(m.lcu, 1)))


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_walk_random_hermitian(seed):
    from floquetsim.hamiltonian import lcu_decompose

    rng = np.random.default_rng(seed)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    be = encode_lcu(lcu_decompose(a + a.conj().T))
    assert _walk_err(be) <= 1e-8


def test_reorder_swaps_factors(rng):
    a = rng.normal(size=(2, 2))
    b = rng.normal(size=(3, 3))
    out = reorder(sp.csr_matrix(np.kron(a, b)), (2, 3), (1, 0)).toarray()
    assert np.allclose(out, np.kron(b, a))


def test_query_degree_small_tau():
    assert query_degree(0.0, 1e-6).q <= 1


@pytest.mark.parametrize("tau", [1.0, 5.0, 20.0])
@pytest.mark.parametrize("eps", [1e-6, 1e-10])
def test_query_degree_certified(tau, eps):
    qd = query_degree(tau, eps)
    assert qd.tail <= eps
    assert chebyshev_error(tau, qd.q) <= eps
    assert qd.within_envelope
    assert query_degree(tau, eps / 10).q >= qd.q


def test_query_degree_doubling():
    a, b = query_degree(10.0, 1e-8), query_degree(20.0, 1e-8)
    assert b.q > a.q
    assert b.q <= 4 * query_closed_form(20.0, 1e-8)


@pytest.mark.parametrize("tau", [1.0, 5.0, 20.0])
def test_tail_decays_like_e_tau_over_2q(tau):
    # the certified tail obeys the Bessel envelope 2 (e tau / 2q)^q / (1 - e tau/2q)
    for q in range(int(2 * tau), int(2 * tau) + 15):
        tails, _ = jacobi_anger_tails(tau, 1e-300)
        if q + 1 >= len(tails):
            break
        x = math.e * tau / (2 * (q + 1))
        assert tails[q] <= 2 * x ** (q + 1) / (1 - x) + 1e-300


def test_query_degree_invalid():
    with pytest.raises(InvalidEpsilon):
        query_degree(1.0, 0.0)
