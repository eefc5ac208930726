"""Truncated Sambe (Floquet-Hilbert) space: index map, operators, truncation order.

Index set D^L = {-L+1, ..., L}; label l sits at slot l + L - 1.
Logarithms are natural throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sp

from .errors import IndexOutOfRange, LTooSmall, ValidationError, check_epsilon
from .hamiltonian import FourierHamiltonian

# Builders return dense matrices up to this total dimension, CSR beyond it.
DENSE_LIMIT = 4096


class Regime(str, Enum):
    ADIABATIC = "Adiabatic"
    LONG_TIME = "LongTime"


@dataclass(frozen=True)
class TruncationOrder:
    l_max: int
    regime: Regime
    epsilon_target: float


@dataclass(frozen=True)
class SambeSpace:
    L: int
    d: int = 1

    def __post_init__(self):
        if self.L < 1:
            raise ValidationError("L must be at least 1")

    @property
    def labels(self) -> np.ndarray:
        return np.arange(-self.L + 1, self.L + 1)

    @property
    def n_modes(self) -> int:
        return 2 * self.L

    @property
    def dim_total(self) -> int:
        return 2 * self.L * self.d

    def contains(self, l: int) -> bool:
        return -self.L + 1 <= l <= self.L

    def slot(self, l: int) -> int:
        if not self.contains(l):
            raise IndexOutOfRange(f"label {l} outside D^{self.L}")
        return l + self.L - 1

    def label(self, i: int) -> int:
        if not 0 <= i < 2 * self.L:
            raise IndexOutOfRange(f"slot {i} outside 0..{2 * self.L - 1}")
        return i - self.L + 1

    def block(self, l: int) -> slice:
        i = self.slot(l)
        return slice(i * self.d, (i + 1) * self.d)


class Kind(str, Enum):
    EFFECTIVE = "Effective"
    LINEAR_POTENTIAL = "LinearPotential"
    EFFECTIVE_PBC = "EffectivePBC"


@dataclass(frozen=True, eq=False)
class SambeOperator:
    space: SambeSpace
    matrix: np.ndarray | sp.csr_matrix
    kind: Kind

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray() if self.is_sparse else np.asarray(self.matrix)

    def block(self, l: int, lp: int) -> np.ndarray:
        r, c = self.space.block(l), self.space.block(lp)
        b = self.matrix[r, c]
        return b.toarray() if sp.issparse(b) else np.array(b)


def oplus(l: int, m: int, L: int) -> int:
    """Addition on D^L modulo 2L."""
    return (l + m + L - 1) % (2 * L) - L + 1


def ominus(l: int, m: int, L: int) -> int:
    return oplus(l, -m, L)


def adder(m: int, L: int) -> np.ndarray:
    """Permutation matrix Add_m |l> = |l (+) m> on C^(2L)."""
    n = 2 * L
    out = np.zeros((n, n))
    src = np.arange(n)
    out[(src + m) % n, src] = 1.0
    return out


def _finish(space: SambeSpace, mat: sp.spmatrix, kind: Kind, sparse: bool | None) -> SambeOperator:
    if sparse is None:
        sparse = space.dim_total > DENSE_LIMIT
    mat = mat.tocsr()
    return SambeOperator(space, mat if sparse else mat.toarray(), kind)


def _lp_diag(L: int, omega: float) -> np.ndarray:
    return omega * np.arange(-L + 1, L + 1, dtype=float)


def build_effective(H: FourierHamiltonian, L: int, sparse: bool | None = None) -> SambeOperator:
    """Blocks <l|.|l> = H_0 - l omega, <l|.|l+m> = H_{-m}, open boundaries."""
    space = SambeSpace(L, H.dim)
    n = 2 * L
    mat = sp.kron(sp.diags(-_lp_diag(L, H.omega)), sp.identity(H.dim), format="csr")
    for m, c in H.components.items():
        if abs(m) >= n or not np.any(c):
            continue
        mat = mat + sp.kron(sp.eye(n, k=-m), sp.csr_matrix(c))
    return _finish(space, mat, Kind.EFFECTIVE, sparse)


def build_linear_potential(L: int, omega: float, d: int = 1, sparse: bool | None = None) -> SambeOperator:
    space = SambeSpace(L, d)
    mat = sp.kron(sp.diags(_lp_diag(L, omega)), sp.identity(d), format="csr")
    return _finish(space, mat.astype(complex), Kind.LINEAR_POTENTIAL, sparse)


def build_effective_pbc(H: FourierHamiltonian, L: int, sparse: bool | None = None) -> SambeOperator:
    """sum_m Add_m (x) H_m - H_LP with cyclic wrap-around."""
    if L < H.m_max + 1:
        raise LTooSmall(f"PBC operator needs L >= m_max + 1 = {H.m_max + 1}, got {L}")
    space = SambeSpace(L, H.dim)
    mat = sp.kron(sp.diags(-_lp_diag(L, H.omega)), sp.identity(H.dim), format="csr")
    for m, c in H.components.items():
        if not np.any(c):
            continue
        mat = mat + sp.kron(sp.csr_matrix(adder(m, L)), sp.csr_matrix(c))
    return _finish(space, mat, Kind.EFFECTIVE_PBC, sparse)


def quasienergies(op: SambeOperator, omega: float, core_fraction: float = 0.5) -> list[tuple[float, float]]:
    """Folded eigenvalues with weights.

    The weight of each eigenvalue is the norm of its eigenvector on the core
    |l| <= core_fraction * L, so boundary-localized artefacts carry small weight.
    """
    if op.kind is not Kind.EFFECTIVE:
        raise ValidationError("quasienergies expects an Effective operator")
    vals, vecs = np.linalg.eigh(op.toarray())
    folded = np.mod(vals + omega / 2, omega) - omega / 2
    L, d = op.space.L, op.space.d
    core = np.abs(op.space.labels) <= core_fraction * L
    mask = np.repeat(core, d)
    weights = np.sum(np.abs(vecs[mask, :]) ** 2, axis=0)
    return [(float(e), float(w)) for e, w in zip(folded, weights)]


def choose_l_max(gamma: float, t: float, m_max: int, epsilon: float,
                 regime: Regime = Regime.ADIABATIC) -> TruncationOrder:
    """Truncation order guaranteeing the truncation error is at most epsilon."""
    check_epsilon(epsilon)
    if m_max < 1:
        raise ValidationError("m_max must be at least 1")
    gt = gamma * t
    if gt < 0:
        raise ValidationError("gamma * t must be non-negative")
    if gt == 0:
        return TruncationOrder(m_max + 1, regime, epsilon)
    lg = math.log(10 * m_max / epsilon)
    extra = math.e ** 2 * m_max * gt + 4 * m_max * lg / math.log(math.e + lg / (math.e * gt))
    return TruncationOrder(m_max + math.ceil(extra), regime, epsilon)


def exp_constants(zeta: float) -> tuple[float, float]:
    """(beta, zeta') for the exponential-decay profile."""
    beta = 1.0 / (1.0 - math.exp(-1.0 / zeta))
    zeta_p = 1.0 / (1.0 / zeta - 1.0 + math.exp(-1.0 / zeta))
    return beta, zeta_p


def choose_l_max_exp(h: float, zeta: float, t: float, epsilon: float,
                     regime: Regime = Regime.ADIABATIC) -> TruncationOrder:
    check_epsilon(epsilon)
    if h <= 0 or zeta <= 0:
        raise ValidationError("h and zeta must be positive")
    beta, zp = exp_constants(zeta)
    val = 2 * beta * zp * h * t + zp * math.log(1 / epsilon) + zp * math.log(4 * zp) + 2 * zp / beta + 1
    return TruncationOrder(math.ceil(val), regime, epsilon)


def choose_l_max_for(H: FourierHamiltonian, gamma: float, t: float, epsilon: float,
                     regime: Regime = Regime.ADIABATIC) -> TruncationOrder:
    """Dispatch on the decay profile of H; never returns less than m_max + 1."""
    from .hamiltonian import ExponentialDecay

    if isinstance(H.profile, ExponentialDecay):
        order = choose_l_max_exp(H.profile.h, H.profile.zeta, t, epsilon, regime)
    else:
        order = choose_l_max(gamma, t, max(H.m_max, 1), epsilon, regime)
    if order.l_max < H.m_max + 1:
        order = TruncationOrder(H.m_max + 1, order.regime, epsilon)
    return order
