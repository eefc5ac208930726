"""Matrix-level block-encodings, the qubitization walk operator and query degrees.

Oracles are stored as sparse matrices on (ancilla registers) (x) (system).  The
composite effective-Hamiltonian oracle uses the register order
(d, c, b, p, a) (x) Sambe (x) physical, where p is a one-qubit padding register of
the linear-potential branch (see `encode_linear_potential`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.special import jv

from .errors import AllZero, MissingModeEncoding, NegativeCoefficient, NonHermitian, NonUnitaryTerm, ValidationError, check_epsilon
from .hamiltonian import FourierHamiltonian, LCUDecomposition, Term, is_unitary, lcu_for
from .sambe import adder, build_effective_pbc, build_linear_potential


def _csr(a) -> sp.csr_matrix:
    return a.tocsr() if sp.issparse(a) else sp.csr_matrix(np.asarray(a))


def _max_abs(a) -> float:
    if sp.issparse(a):
        return float(abs(a).max()) if a.nnz else 0.0
    return float(np.max(np.abs(a), initial=0.0))


def reorder(mat, dims: Sequence[int], perm: Sequence[int]) -> sp.csr_matrix:
    """Relabel tensor factors: an operator on dims[0] x dims[1] x ... becomes one on
    dims[perm[0]] x dims[perm[1]] x ..."""
    coo = _csr(mat).tocoo()
    dims = tuple(dims)
    new_dims = tuple(dims[i] for i in perm)

    def move(idx):
        parts = np.unravel_index(idx, dims)
        return np.ravel_multi_index(tuple(parts[i] for i in perm), new_dims)

    n = int(np.prod(dims))
    return sp.csr_matrix((coo.data, (move(coo.row), move(coo.col))), shape=(n, n))


@dataclass(frozen=True, eq=False)
class BlockEncoding:
    oracle: sp.csr_matrix
    oracle_state: np.ndarray
    alpha: float
    target: np.ndarray | sp.csr_matrix
    anc_registers: tuple[tuple[str, int], ...] = ()
    meta: dict = field(default_factory=dict)

    @property
    def anc_dim(self) -> int:
        return self.oracle_state.shape[0]

    @property
    def sys_dim(self) -> int:
        return self.oracle.shape[0] // self.anc_dim

    def _lift(self, g: np.ndarray) -> sp.csr_matrix:
        return sp.kron(sp.csr_matrix(g.reshape(-1, 1)), sp.identity(self.sys_dim), format="csr")

    def encoded(self) -> np.ndarray:
        """(<G| x I) O (|G> x I)."""
        g = self._lift(self.oracle_state)
        return (g.conj().T @ self.oracle @ g).toarray()

    def residual(self) -> float:
        tgt = self.target.toarray() if sp.issparse(self.target) else self.target
        return float(np.max(np.abs(self.encoded() - tgt / self.alpha), initial=0.0))

    def unitarity_error(self) -> float:
        o = self.oracle
        return _max_abs(o.conj().T @ o - sp.identity(o.shape[0], format="csr"))

    def state_norm_error(self) -> float:
        return abs(float(np.linalg.norm(self.oracle_state)) - 1.0)

    def is_hermitian_oracle(self, tol: float = 1e-12) -> bool:
        return _max_abs(self.oracle - self.oracle.conj().T) <= tol


def _lcu_oracle(terms: list[Term], n_anc: int | None = None) -> tuple[sp.csr_matrix, np.ndarray, float]:
    """Sum_j |j><j| (x) U_j padded with identities up to n_anc ancilla states."""
    if not terms:
        raise MissingModeEncoding("empty LCU")
    d = terms[0][1].shape[0]
    n_anc = len(terms) if n_anc is None else n_anc
    alpha = float(sum(c for c, _ in terms))
    blocks = [sp.csr_matrix(u) for _, u in terms] + [sp.identity(d, format="csr")] * (n_anc - len(terms))
    g = np.zeros(n_anc)
    g[:len(terms)] = [math.sqrt(c / alpha) for c, _ in terms]
    return sp.block_diag(blocks, format="csr"), g, alpha


def encode_lcu(terms: list[Term] | LCUDecomposition, mode: int | None = None) -> BlockEncoding:
    """O = sum_j |j><j| (x) U_j, |G> = sum_j sqrt(c_j / alpha) |j>."""
    if isinstance(terms, LCUDecomposition):
        if mode is None:
            if len(terms.terms) != 1:
                raise ValidationError("specify the Fourier mode to encode")
            mode = next(iter(terms.terms))
        terms = terms.terms[mode]
    for c, u in terms:
        if c < 0:
            raise NegativeCoefficient("LCU coefficients must be non-negative")
        if not is_unitary(u):
            raise NonUnitaryTerm("LCU term is not unitary")
    o, g, alpha = _lcu_oracle(list(terms))
    if alpha <= 0:
        raise AllZero("LCU has zero total weight")
    target = sum(c * u for c, u in terms)
    return BlockEncoding(o, g.astype(complex), alpha, target, (("a", len(terms)),))


def comparator(L: int) -> sp.csr_matrix:
    """|l, l'>|b> -> |l, l'>|b xor [l' < l]> on C^(2L) (x) C^(2L) (x) C^2."""
    n = 2 * L
    l, lp, b = np.meshgrid(np.arange(n), np.arange(n), np.arange(2), indexing="ij")
    src = np.ravel_multi_index((l, lp, b), (n, n, 2)).ravel()
    dst = np.ravel_multi_index((l, lp, b ^ (lp < l).astype(int)), (n, n, 2)).ravel()
    return sp.csr_matrix((np.ones(src.size), (dst, src)), shape=(2 * n * n, 2 * n * n))


def lp_signs(L: int) -> np.ndarray:
    """Diagonal of O_LP = sum_l |l><l|_b (x) V_l, indexed (l_b, l')."""
    n = 2 * L
    idx = np.arange(n)
    return np.where(idx[None, :] >= idx[:, None], 1.0, -1.0).ravel()


def lp_oracle_direct(L: int) -> sp.csr_matrix:
    return sp.diags(lp_signs(L), format="csr")


def lp_oracle_via_comparator(L: int) -> sp.csr_matrix:
    """Comp^dag Z_b' Comp; acts as O_LP (x) Z on the b' qubit."""
    comp = comparator(L)
    z = sp.kron(sp.identity(4 * L * L), sp.diags([1.0, -1.0]), format="csr")
    return (comp.T @ z @ comp).tocsr()


def _padding_signs(L: int) -> np.ndarray:
    """s_l = +1 for l >= 1 and -1 for l <= 0; sums to zero over D^L."""
    return np.where(np.arange(-L + 1, L + 1) >= 1, 1.0, -1.0)


def _lp_branch_diag(L: int, padded: bool) -> np.ndarray:
    """Diagonal of the (b, p, Sambe) linear-potential oracle."""
    n = 2 * L
    v = lp_signs(L).reshape(n, 1, n)
    if not padded:
        return v.ravel()
    s = np.broadcast_to(_padding_signs(L)[:, None, None], (n, 1, n))
    return np.concatenate([v, s], axis=1).ravel()


def encode_linear_potential(L: int, omega: float, d: int = 1, padded: bool = True) -> BlockEncoding:
    """Block-encoding of H_LP on D^L.

    The bare comparator oracle with |a^L>_b encodes H_LP / (L omega).  With
    `padded`, a qubit p in |+> selects between O_LP and a sign oracle whose
    weights cancel, giving the normalization 2 L omega.
    """
    n = 2 * L
    diag = _lp_branch_diag(L, padded)
    oracle = sp.kron(sp.diags(diag), sp.identity(d), format="csr")
    g_b = np.full(n, 1.0 / math.sqrt(n))
    g = np.kron(g_b, np.full(2, 1 / math.sqrt(2))) if padded else g_b
    alpha = (2 if padded else 1) * L * omega
    target = build_linear_potential(L, omega, d, sparse=True).matrix
    regs = (("b", n), ("p", 2)) if padded else (("b", n),)
    return BlockEncoding(oracle, g.astype(complex), alpha, target, regs, {"padded": padded})


def g_coef(alphas) -> np.ndarray:
    """sum_m sqrt(alpha_m / alpha) |m>; 2-D input is flattened over (m, j)."""
    a = np.asarray(alphas, dtype=float).ravel()
    if np.any(a < 0):
        raise NegativeCoefficient("coefficients must be non-negative")
    s = a.sum()
    if s <= 0:
        raise AllZero("all coefficients vanish")
    return np.sqrt(a / s)


def encode_effective(H: FourierHamiltonian, L: int, lcu: LCUDecomposition | None = None,
                     padded: bool = True) -> BlockEncoding:
    """Composite oracle for sum_m Add_m (x) H_m - H_LP on D^L."""
    lcu = lcu_for(H) if lcu is None else lcu
    modes = [m for m in H.modes if np.any(H.component(m))]
    for m in modes:
        if m not in lcu.terms or not lcu.terms[m]:
            raise MissingModeEncoding(f"no LCU for Fourier mode {m}")
    if 0 not in modes:
        modes = sorted(modes + [0])
    terms = {m: lcu.terms.get(m, []) for m in modes}
    n_a = max(len(ts) for ts in terms.values())
    d, n = H.dim, 2 * L
    Dc, Dp = len(modes), (2 if padded else 1)
    alphas = {m: float(sum(c for c, _ in ts)) for m, ts in terms.items()}
    alpha = sum(alphas.values())
    w_lp = (2 if padded else 1) * L * H.omega
    alpha_enc = alpha + w_lp

    # d = 0 branch: sum_m |m><m|_c (x) I_b (x) I_p (x) [Add_m (x) O_m reordered to (a, Sambe, phys)]
    branch0 = None
    g0 = np.zeros((Dc, n, Dp, n_a), dtype=complex)
    g_b = np.full(n, 1.0 / math.sqrt(n))
    for ci, m in enumerate(modes):
        if terms[m]:
            o_m, g_m, _ = _lcu_oracle(terms[m], n_a)
        else:
            o_m, g_m = sp.identity(n_a * d, format="csr"), np.zeros(n_a)
        x_m = reorder(sp.kron(sp.csr_matrix(adder(m, L)), o_m), (n, n_a, d), (1, 0, 2))
        proj = sp.csr_matrix(([1.0], ([ci], [ci])), shape=(Dc, Dc))
        term = sp.kron(sp.kron(proj, sp.identity(n * Dp)), x_m, format="csr")
        branch0 = term if branch0 is None else branch0 + term
        g0[ci, :, 0, :] = math.sqrt(alphas[m] / alpha_enc) * np.outer(g_b, g_m)

    # d = 1 branch: -I_c (x) O_LP(b, p, Sambe) (x) I_a (x) I_phys, diagonal
    lp = _lp_branch_diag(L, padded).reshape(n, Dp, n)
    diag1 = -np.broadcast_to(lp[None, :, :, None, :, None], (Dc, n, Dp, n_a, n, d)).ravel()
    g1 = np.zeros((Dc, n, Dp, n_a), dtype=complex)
    g_p = np.full(Dp, 1.0 / math.sqrt(Dp))
    g1[modes.index(0), :, :, 0] = math.sqrt(w_lp / alpha_enc) * np.outer(g_b, g_p)

    oracle = sp.block_diag([branch0, sp.diags(diag1)], format="csr")
    state = np.concatenate([g0.ravel(), g1.ravel()])
    target = build_effective_pbc(H, L, sparse=True).matrix
    regs = (("d", 2), ("c", Dc), ("b", n), ("p", Dp), ("a", n_a))
    return BlockEncoding(oracle, state, alpha_enc, target, regs,
                         {"alpha": alpha, "alphas": alphas, "w_lp": w_lp, "modes": modes, "padded": padded})


# --- qubitization ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WalkOperator:
    matrix: np.ndarray
    source: BlockEncoding
    state: np.ndarray
    hermitized: bool


def walk_operator(be: BlockEncoding) -> WalkOperator:
    """W = ((2|G><G| - I) (x) I) O.

    A non-Hermitian oracle is first replaced by |0><1| (x) O + |1><0| (x) O^dag with
    state |+>|G>, which block-encodes the same Hermitian target.
    """
    o = be.oracle
    g = be.oracle_state
    herm = be.is_hermitian_oracle()
    if not herm:
        o = sp.bmat([[None, o], [o.conj().T, None]], format="csr")
        g = np.kron(np.full(2, 1 / math.sqrt(2)), g)
    refl = 2 * np.outer(g, g.conj()) - np.eye(g.size)
    w = sp.kron(sp.csr_matrix(refl), sp.identity(be.sys_dim), format="csr") @ o
    return WalkOperator(w.toarray(), be, g, not herm)


@dataclass(frozen=True)
class WalkCheck:
    eigenvalue: float
    expected: float          # arccos(lambda / alpha)
    phases: tuple[float, ...]
    invariance_residual: float

    @property
    def phase_error(self) -> float:
        return max(abs(abs(p) - self.expected) for p in self.phases)

    @property
    def cos_error(self) -> float:
        return max(abs(math.cos(p) - math.cos(self.expected)) for p in self.phases)

    @property
    def error(self) -> float:
        """Phase error; at |lambda/alpha| ~ 1 arccos amplifies rounding to sqrt(eps), so the cosine is compared."""
        if abs(math.cos(self.expected)) > 1 - 1e-6:
            return self.cos_error
        return self.phase_error


def walk_eigenphases(w: WalkOperator) -> list[WalkCheck]:
    """Restrict W to span{|G>v, W|G>v} for each target eigenpair (lambda, v)."""
    be = w.source
    tgt = be.target.toarray() if sp.issparse(be.target) else np.asarray(be.target)
    if np.max(np.abs(tgt - tgt.conj().T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(tgt))):
        raise NonHermitian("eigenphase relation needs a Hermitian target")
    lam, vecs = np.linalg.eigh(tgt)
    out = []
    for k in range(lam.size):
        x = float(np.clip(lam[k] / be.alpha, -1.0, 1.0))
        psi = np.kron(w.state, vecs[:, k])
        wpsi = w.matrix @ psi
        perp = wpsi - np.vdot(psi, wpsi) * psi
        if np.linalg.norm(perp) < 1e-10:
            q = psi[:, None]
        else:
            q = np.column_stack([psi, perp / np.linalg.norm(perp)])
        m = q.conj().T @ w.matrix @ q
        resid = float(np.linalg.norm(w.matrix @ q - q @ m))
        phases = tuple(float(p) for p in np.angle(np.linalg.eigvals(m)))
        out.append(WalkCheck(float(lam[k]), math.acos(x), phases, resid))
    return out


@dataclass(frozen=True)
class QueryDegree:
    q: int
    tau: float
    epsilon: float
    tail: float
    closed_form: float

    @property
    def within_envelope(self) -> bool:
        if self.tau == 0:
            return self.q <= 1
        return self.closed_form / 4 <= self.q <= 4 * self.closed_form


def query_closed_form(tau: float, epsilon: float) -> float:
    lg = math.log(1 / epsilon)
    if tau == 0:
        return 0.0
    return tau + lg / math.log(math.e + lg / tau)


def _bessel_remainder(tau: float, K: int) -> float:
    """Bound on sum_{k > K} 2|J_k(tau)| from |J_k(x)| <= (x/2)^k / k!."""
    if tau == 0:
        return 0.0
    r = tau / (2 * (K + 2))
    if r >= 1:
        return math.inf
    lead = math.exp((K + 1) * math.log(tau / 2) - math.lgamma(K + 2))
    return 2 * lead / (1 - r)


def jacobi_anger_tails(tau: float, epsilon: float) -> tuple[np.ndarray, float]:
    """Tails t_q = sum_{k>q} 2|J_k(tau)| (with certified remainder) for q = 0..K."""
    K = int(math.ceil(tau)) + 32
    while _bessel_remainder(tau, K) > 1e-6 * epsilon:
        K += 16
    rem = _bessel_remainder(tau, K)
    terms = 2 * np.abs(jv(np.arange(1, K + 1), tau))
    tails = np.concatenate([np.cumsum(terms[::-1])[::-1], [0.0]]) + rem
    return tails, rem


def query_degree(tau: float, epsilon: float) -> QueryDegree:
    """Smallest degree q whose Chebyshev (Jacobi-Anger) truncation error is <= epsilon."""
    check_epsilon(epsilon)
    if tau < 0:
        raise ValidationError("tau must be non-negative")
    tails, _ = jacobi_anger_tails(tau, epsilon)
    q = int(np.argmax(tails <= epsilon))
    return QueryDegree(q, tau, epsilon, float(tails[q]), query_closed_form(tau, epsilon))


def chebyshev_error(tau: float, q: int, n_grid: int = 1001) -> float:
    """max_x |exp(-i x tau) - sum_{k<=q} c_k T_k(x)| on a uniform grid of [-1, 1]."""
    x = np.linspace(-1.0, 1.0, n_grid)
    theta = np.arccos(x)
    approx = jv(0, tau) * np.ones_like(x, dtype=complex)
    for k in range(1, q + 1):
        approx += 2 * (-1j) ** k * jv(k, tau) * np.cos(k * theta)
    return float(np.max(np.abs(np.exp(-1j * x * tau) - approx)))
