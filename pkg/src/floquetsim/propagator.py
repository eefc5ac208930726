"""Reference time-ordered evolution and exponential action on Sambe operators."""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.sparse.linalg import expm_multiply

from .errors import NonHermitian, StepUnderflow, ValidationError
from .hamiltonian import FourierHamiltonian
from .sambe import SambeOperator, SambeSpace, build_effective

DEFAULT_TOL = 1e-10
EIG_LIMIT = 1024


@dataclass(frozen=True)
class SystemState:
    vector: np.ndarray
    time: float


@dataclass(frozen=True)
class SambeState:
    space: SambeSpace
    vector: np.ndarray

    def block(self, l: int) -> np.ndarray:
        return self.vector[self.space.block(l)]


def _rhs_factory(H: FourierHamiltonian):
    ms = np.array(list(H.components), dtype=float)
    stack = np.array(list(H.components.values()))

    def rhs(t, y):
        ht = np.tensordot(np.exp(-1j * ms * H.omega * t), stack, axes=1)
        return -1j * (ht @ y.reshape(H.dim, -1)).ravel()

    return rhs


def _integrate(H: FourierHamiltonian, y0: np.ndarray, t: float, tol: float, t0: float) -> np.ndarray:
    if not (1e-13 <= tol <= 1e-6):
        raise ValidationError("tol must lie in [1e-13, 1e-6]")
    if t == t0:
        return y0.copy()
    sol = solve_ivp(_rhs_factory(H), (t0, t), y0.ravel(), method="DOP853", rtol=tol, atol=tol)
    if sol.status != 0:
        raise StepUnderflow(f"integrator failed: {sol.message}")
    return sol.y[:, -1].reshape(y0.shape)


def exact_evolve(H: FourierHamiltonian, psi0: np.ndarray, t: float, tol: float = DEFAULT_TOL,
                 t0: float = 0.0) -> SystemState:
    """Solve i d psi/dt = H(t) psi with an adaptive order-8 Runge-Kutta scheme."""
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ValidationError("psi0 must be normalized")
    psi = _integrate(H, psi0, t, tol, t0)
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > 1e-9 * max(1.0, abs(t - t0)):
        psi = psi / nrm
    return SystemState(psi, float(t))


def exact_propagator(H: FourierHamiltonian, t: float, tol: float = DEFAULT_TOL, t0: float = 0.0) -> np.ndarray:
    """Full time-evolution operator U(t, t0) by integrating all basis columns."""
    return _integrate(H, np.eye(H.dim, dtype=complex), t, tol, t0)


def monodromy_quasienergies(H: FourierHamiltonian, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Quasienergies -arg(eig U(T))/T folded into [-omega/2, omega/2)."""
    U = exact_propagator(H, H.period, tol)
    eps = -np.angle(np.linalg.eigvals(U)) / H.period
    return np.sort(np.mod(eps + H.omega / 2, H.omega) - H.omega / 2)


class _EigCache:
    """Small LRU of eigendecompositions keyed by array identity; single writer."""

    def __init__(self, size: int = 8):
        self._size = size
        self._data: OrderedDict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = OrderedDict()
        self._lock = threading.Lock()

    def get(self, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        key = id(a)
        entry = self._data.get(key)
        if entry is not None and entry[0] is a:
            return entry[1], entry[2]
        with self._lock:
            entry = self._data.get(key)
            if entry is None or entry[0] is not a:
                w, v = np.linalg.eigh(a)
                entry = (a, w, v)
                self._data[key] = entry
                while len(self._data) > self._size:
                    self._data.popitem(last=False)
        return entry[1], entry[2]


_cache = _EigCache()


def _as_matrix(op):
    return op.matrix if isinstance(op, SambeOperator) else op


def check_hermitian(a, tol: float = 1e-12) -> None:
    if sp.issparse(a):
        diff = abs(a - a.conj().T).max() if a.nnz else 0.0
        scale = max(1.0, abs(a).max() if a.nnz else 0.0)
    else:
        diff = np.max(np.abs(a - a.conj().T), initial=0.0)
        scale = max(1.0, np.max(np.abs(a), initial=0.0))
    if diff > tol * scale:
        raise NonHermitian(f"matrix deviates from Hermitian by {diff:.3e}")


def expm_apply(op, v: np.ndarray, t: float, check: bool = True) -> np.ndarray:
    """exp(-i A t) v for Hermitian A (dense or sparse); v may hold several columns."""
    a = _as_matrix(op)
    if check:
        check_hermitian(a)
    v = np.asarray(v, dtype=complex)
    if t == 0:
        return v.copy()
    if sp.issparse(a):
        return expm_multiply(-1j * t * a.tocsc(), v, traceA=complex(-1j * t * a.diagonal().sum()))
    if a.shape[0] <= EIG_LIMIT:
        w, vecs = _cache.get(a)
        v2 = v.reshape(a.shape[0], -1)
        out = vecs @ (np.exp(-1j * w * t)[:, None] * (vecs.conj().T @ v2))
        return out.reshape(v.shape)
    return sla.expm(-1j * t * a) @ v


def unitary(op, t: float) -> np.ndarray:
    """Dense exp(-i A t)."""
    a = _as_matrix(op)
    a = a.toarray() if sp.issparse(a) else a
    check_hermitian(a)
    if a.shape[0] <= EIG_LIMIT:
        w, vecs = _cache.get(a)
        return (vecs * np.exp(-1j * w * t)) @ vecs.conj().T
    return sla.expm(-1j * t * a)


def sambe_initial(space: SambeSpace, psi0: np.ndarray, l: int = 0) -> np.ndarray:
    v = np.zeros(space.dim_total, dtype=complex)
    v[space.block(l)] = psi0
    return v


def fold_to_system(space: SambeSpace, vec: np.ndarray, omega: float, t: float) -> np.ndarray:
    """sum_l exp(-i l omega t) <l|vec>."""
    blocks = vec.reshape(space.n_modes, space.d)
    return np.exp(-1j * space.labels * omega * t) @ blocks


def sambe_extract(H: FourierHamiltonian, L: int, psi0: np.ndarray, t: float,
                  op: SambeOperator | None = None) -> np.ndarray:
    """Truncated-space approximation of psi(t); returned unnormalized."""
    op = build_effective(H, L) if op is None else op
    w = expm_apply(op, sambe_initial(op.space, np.asarray(psi0, dtype=complex)), t)
    return fold_to_system(op.space, w, H.omega, t)


def transition_block(op: SambeOperator, l: int, l_src: int, t: float) -> np.ndarray:
    """<l| exp(-i op t) |l_src> as a d x d block."""
    sp_ = op.space
    rows, cols = sp_.block(l), sp_.block(l_src)
    e = np.zeros((sp_.dim_total, sp_.d), dtype=complex)
    e[cols, :] = np.eye(sp_.d)
    return expm_apply(op, e, t)[rows, :]


def evolve_all(op: SambeOperator, t: float) -> np.ndarray:
    """Dense exp(-i op t), for block sweeps on a fixed operator."""
    return unitary(op, t)
