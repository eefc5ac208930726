"""Amplification by translation symmetry, oblivious amplitude amplification and the
two end-to-end pipelines (short evolution and stroboscopic long-time evolution).

All circuits act on C^(2 L_total) (x) C^d with the ancilla |0> being Sambe label 0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .errors import ValidationError
from .hamiltonian import FourierHamiltonian, energy_scales
from .propagator import exact_evolve, sambe_initial, unitary
from .sambe import (SambeOperator, SambeSpace, Regime, build_effective, build_effective_pbc,
                    build_linear_potential, choose_l_max_for)

# Exponentials are materialized as dense unitaries up to this total dimension.
DENSE_CIRCUIT_LIMIT = 512


def uniform_state(L_in: int, L_total: int) -> np.ndarray:
    """|a^{L_in}> embedded in C^(2 L_total)."""
    if not 1 <= L_in <= L_total:
        raise ValidationError("need 1 <= L_in <= L_total")
    a = np.zeros(2 * L_total)
    lo = L_total - L_in  # slot of label -L_in + 1
    a[lo:lo + 2 * L_in] = 1.0 / math.sqrt(2 * L_in)
    return a


def u_ini(L_in: int, L_total: int) -> np.ndarray:
    """Householder reflection sending |0> to |a^{L_in}>."""
    a = uniform_state(L_in, L_total)
    e0 = np.zeros_like(a)
    e0[L_total - 1] = 1.0
    w = e0 - a
    return np.eye(2 * L_total) - 2.0 * np.outer(w, w) / (w @ w)


def reflection(L_total: int, d: int) -> np.ndarray:
    """Diagonal of R = (2|0><0| - I) (x) I_d."""
    diag = -np.ones(2 * L_total)
    diag[L_total - 1] = 1.0
    return np.repeat(diag, d)


@dataclass
class Stage:
    """One factor of a circuit; `apply(v, adjoint)` acts on column stacks."""

    name: str
    apply: Callable[[np.ndarray, bool], np.ndarray]


def _ancilla_stage(name: str, u: np.ndarray, d: int) -> Stage:
    def apply(v, adjoint):
        m = u.conj().T if adjoint else u
        k = v.shape[1]
        return (m @ v.reshape(u.shape[0], d * k)).reshape(-1, k)
    return Stage(name, apply)


def _diag_stage(name: str, diag: np.ndarray) -> Stage:
    def apply(v, adjoint):
        return (diag.conj() if adjoint else diag)[:, None] * v
    return Stage(name, apply)


def _exp_stage(name: str, op: SambeOperator, t: float, dense: bool) -> Stage:
    if dense:
        u = unitary(op.toarray(), t)

        def apply(v, adjoint):
            return (u.conj().T if adjoint else u) @ v
    else:
        a = op.matrix.tocsc() if sp.issparse(op.matrix) else sp.csc_matrix(op.matrix)
        tr = complex(a.diagonal().sum())

        def apply(v, adjoint):
            s = 1j * t if adjoint else -1j * t
            return expm_multiply(s * a, v, traceA=s * tr)
    return Stage(name, apply)


def _neg_stage() -> Stage:
    return Stage("-I", lambda v, adjoint: -v)


@dataclass
class AmplifierCircuit:
    space: SambeSpace
    stages: list[Stage]
    l_max_inner: int
    pbc: bool
    kind: str
    t: float
    queries: int = 1
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.space.dim_total

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        out = v.reshape(self.dim, -1)
        for st in self.stages:
            out = st.apply(out, False)
        return out.reshape(v.shape)

    def apply_adjoint(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        out = v.reshape(self.dim, -1)
        for st in reversed(self.stages):
            out = st.apply(out, True)
        return out.reshape(v.shape)

    def matrix(self) -> np.ndarray:
        return self.apply(np.eye(self.dim, dtype=complex))

    def zero_block(self) -> np.ndarray:
        """<0| U |0> as a d x d matrix."""
        sp_ = self.space
        e = np.zeros((self.dim, sp_.d), dtype=complex)
        e[sp_.block(0), :] = np.eye(sp_.d)
        return self.apply(e)[sp_.block(0), :]

    def stage_names(self) -> list[str]:
        return [s.name for s in self.stages]


def _adjoint_stages(stages: list[Stage]) -> list[Stage]:
    return [Stage(s.name + "^dag", (lambda f: (lambda v, adj: f(v, not adj)))(s.apply))
            for s in reversed(stages)]


def _circuit_dense(D: int, dense: bool | None) -> bool:
    return D <= DENSE_CIRCUIT_LIMIT if dense is None else dense


def naive(H: FourierHamiltonian, l_max: int, t: float, dense: bool | None = None) -> AmplifierCircuit:
    """(U_ini^{l_max})^dag e^{-i H_LP t} e^{-i H_eff t} on the l_max space."""
    space = SambeSpace(l_max, H.dim)
    dn = _circuit_dense(space.dim_total, dense)
    lp = np.exp(-1j * t * np.repeat(H.omega * space.labels, H.dim))
    stages = [
        _exp_stage("exp(-i H_eff t)", build_effective(H, l_max), t, dn),
        _diag_stage("exp(-i H_LP t)", lp),
        _ancilla_stage("U_ini^dag", u_ini(l_max, l_max).T, H.dim),
    ]
    return AmplifierCircuit(space, stages, l_max, False, "naive", t)


def amp1(H: FourierHamiltonian, l_max: int, t: float, pbc: bool = True,
         dense: bool | None = None) -> AmplifierCircuit:
    """(U_ini^{4l})^dag e^{-i H_LP t} e^{-i H_eff^{(pbc)} t} U_ini^{l} on D^{4 l_max}."""
    L = 4 * l_max
    space = SambeSpace(L, H.dim)
    dn = _circuit_dense(space.dim_total, dense)
    op = build_effective_pbc(H, L) if pbc else build_effective(H, L)
    lp = np.exp(-1j * t * np.repeat(H.omega * space.labels, H.dim))
    stages = [
        _ancilla_stage("U_ini^{l_max}", u_ini(l_max, L), H.dim),
        _exp_stage("exp(-i H_eff,pbc t)" if pbc else "exp(-i H_eff t)", op, t, dn),
        _diag_stage("exp(-i H_LP t)", lp),
        _ancilla_stage("U_ini^{4l_max}^dag", u_ini(L, L).T, H.dim),
    ]
    return AmplifierCircuit(space, stages, l_max, pbc, "amp1", t)


def oblivious(base: AmplifierCircuit, kind: str = "amp2") -> AmplifierCircuit:
    """-U R U^dag R U for a circuit U whose |0> block is close to half a unitary."""
    r = _diag_stage("R", reflection(base.space.L, base.space.d).astype(complex))
    stages = [*base.stages, r, *_adjoint_stages(base.stages), r, *base.stages, _neg_stage()]
    return AmplifierCircuit(base.space, stages, base.l_max_inner, base.pbc, kind, base.t,
                            queries=3 * base.queries)


def amp2(H: FourierHamiltonian, l_max: int, t: float, pbc: bool = True,
         dense: bool | None = None) -> AmplifierCircuit:
    return oblivious(amp1(H, l_max, t, pbc, dense))


def iterated_amplification(base: AmplifierCircuit, p: int) -> AmplifierCircuit:
    """(-U R U^dag R)^p U; diagnostic only."""
    r = _diag_stage("R", reflection(base.space.L, base.space.d).astype(complex))
    stages = list(base.stages)
    for _ in range(p):
        stages = [*stages, r, *_adjoint_stages(base.stages), r, *base.stages, _neg_stage()]
    return AmplifierCircuit(base.space, stages, base.l_max_inner, base.pbc, f"amp2^{p}", base.t,
                            queries=(2 * p + 1) * base.queries)


def success_probability(circuit: AmplifierCircuit, psi0: np.ndarray) -> float:
    v = circuit.apply(sambe_initial(circuit.space, np.asarray(psi0, dtype=complex)))
    return float(np.linalg.norm(v[circuit.space.block(0)]) ** 2)


def sample_success(circuit: AmplifierCircuit, psi0: np.ndarray, shots: int,
                   rng: np.random.Generator) -> float:
    """Empirical success frequency from Bernoulli draws."""
    p = success_probability(circuit, psi0)
    return float(rng.binomial(shots, min(max(p, 0.0), 1.0)) / shots)


@dataclass
class PipelineResult:
    state: np.ndarray            # projected system state, renormalized
    full_output: np.ndarray      # ancilla (x) system vector
    diagnostics: dict


def _zero_embed(space: SambeSpace, psi: np.ndarray) -> np.ndarray:
    return sambe_initial(space, psi)


def _finish(space: SambeSpace, out: np.ndarray, H: FourierHamiltonian, psi0: np.ndarray, t: float,
            diag: dict, oracle: bool, tol: float) -> PipelineResult:
    block = out[space.block(0)]
    p = float(np.linalg.norm(block) ** 2)
    diag["success_probability"] = p
    state = block / math.sqrt(p) if p > 0 else block
    if oracle:
        exact = exact_evolve(H, psi0, t, tol).vector
        diag["deviation"] = float(np.linalg.norm(out - _zero_embed(space, exact)))
        diag["fidelity"] = float(abs(np.vdot(exact, state)))
    return PipelineResult(state, out, diag)


def _scales(H: FourierHamiltonian, alphas=None):
    s = energy_scales(H, alphas)
    return s, s.gamma_upper


def run_adiabatic(H: FourierHamiltonian, psi0: np.ndarray, t: float, epsilon: float,
                  pbc: bool = True, oracle: bool = True, tol: float = 1e-12,
                  alphas: dict | None = None, n_a: int = 1) -> PipelineResult:
    """Choose l_max, build the amplified circuit, apply it to |0, psi0> and project."""
    from .bounds import resources

    psi0 = np.asarray(psi0, dtype=complex)
    if H.omega * t > 4 * math.pi:
        warnings.warn("omega * t exceeds 4 pi; the long-time pipeline is better suited", stacklevel=2)
    scales, gamma = _scales(H, alphas)
    order = choose_l_max_for(H, gamma, t, epsilon, Regime.ADIABATIC)
    circ = amp2(H, order.l_max, t, pbc)
    out = circ.apply(_zero_embed(circ.space, psi0))
    diag = {
        "l_max": order.l_max,
        "queries_to_amp1": circ.queries,
        "gamma": gamma,
        "resources": resources("Adiabatic", scales.alpha, gamma, H.omega, t, epsilon, n_a, 1.0,
                               l_max=order.l_max),
    }
    return _finish(circ.space, out, H, psi0, t, diag, oracle, tol)


def split_time(t: float, T: float) -> tuple[int, float]:
    """t = (n + delta) T with integer n and delta in [0, 1)."""
    x = t / T
    n = int(math.floor(x + 1e-12))
    delta = x - n
    if abs(delta) < 1e-12:
        delta = 0.0
    return n, delta


def run_longtime(H: FourierHamiltonian, psi0: np.ndarray, t: float, epsilon: float,
                 pbc: bool = True, oracle: bool = True, tol: float = 1e-12,
                 alphas: dict | None = None, n_a: int = 1) -> PipelineResult:
    """Stroboscopic pipeline: one-period circuit applied n times, then the remainder."""
    from .bounds import resources

    psi0 = np.asarray(psi0, dtype=complex)
    T = H.period
    n, delta = split_time(t, T)
    if n < 1:
        raise ValidationError("run_longtime needs t >= T")
    scales, gamma = _scales(H, alphas)
    l_T = choose_l_max_for(H, gamma, T, epsilon / n, Regime.LONG_TIME).l_max
    l_d = choose_l_max_for(H, gamma, delta * T, epsilon, Regime.LONG_TIME).l_max if delta > 0 else 0
    l_max = max(l_T, l_d)
    circ = amp2(H, l_max, T, pbc)
    v = _zero_embed(circ.space, psi0)
    for _ in range(n):
        v = circ.apply(v)
    if delta > 0:
        v = amp2(H, l_max, delta * T, pbc).apply(v)
    diag = {
        "n_periods": n,
        "delta": delta,
        "l_max_T": l_T,
        "l_max_delta": l_d,
        "l_max": l_max,
        "gamma": gamma,
        "resources": resources("LongTime", scales.alpha, gamma, H.omega, t, epsilon, n_a, 1.0,
                               l_max=l_max),
    }
    return _finish(circ.space, v, H, psi0, t, diag, oracle, tol)
