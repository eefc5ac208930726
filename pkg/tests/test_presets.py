from __future__ import annotations

import math

import numpy as np
import pytest

from floquetsim.errors import ValidationError
from floquetsim.hamiltonian import evaluate_at
from floquetsim.presets import (SX, SZ, adiabatic_prep, driven_qubit, hubbard2,
                                jw_annihilators)


def _lcu_matrix(terms):
    return sum(c * u for c, u in terms)


def test_jw_anticommutation():
    a = jw_annihilators(3)
    I = np.eye(8)
    for i in range(3):
        for j in range(3):
            assert np.allclose(a[i] @ a[j].conj().T + a[j].conj().T @ a[i], I * (i == j))
            assert np.allclose(a[i] @ a[j] + a[j] @ a[i], 0)


def test_hubbard_lcu_matches_direct():
    m = hubbard2()
    assert m.H.dim == 16
    for k, terms in m.lcu.terms.items():
        assert np.max(np.abs(_lcu_matrix(terms) - m.H.component(k))) <= 1e-12
        for _, u in terms:
            assert np.allclose(u @ u.conj().T, np.eye(16))


def test_hubbard_alphas():
    m = hubbard2()
    assert m.alphas[0] == pytest.approx(8.0)
    assert m.alphas[1] == pytest.approx(2.0) and m.alphas[-1] == pytest.approx(2.0)


def test_hubbard_custom_bands():
    m = hubbard2(eps=(0.5, 1.5), U=1.0, V=(0.3, 0.7))
    for k, terms in m.lcu.terms.items():
        assert np.max(np.abs(_lcu_matrix(terms) - m.H.component(k))) <= 1e-12
    with pytest.raises(ValidationError):
        hubbard2(eps=(-1.0, 1.0))


def test_hubbard_conserves_particle_number():
    m = hubbard2()
    N = sum(x.conj().T @ x for x in jw_annihilators(4))
    for k in (0, 1):
        c = m.H.component(k)
        assert np.allclose(c @ N, N @ c)


@pytest.mark.parametrize("phase", [0.0, 0.7, math.pi / 2])
def test_driven_qubit_lcu(phase):
    m = driven_qubit(delta=-0.6, V=1.3, phase=phase)
    for k, terms in m.lcu.terms.items():
        assert np.max(np.abs(_lcu_matrix(terms) - m.H.component(k))) <= 1e-14


def test_adiabatic_schedule():
    m = adiabatic_prep(omega=0.1)
    for t in (0.0, 3.0, 10.0):
        s = math.sin(0.1 * t)
        assert np.allclose(evaluate_at(m.H, t), SZ * (1 - s) + SX * s)
    for k, terms in m.lcu.terms.items():
        assert np.max(np.abs(_lcu_matrix(terms) - m.H.component(k))) <= 1e-14
