"""Time-periodic Hamiltonians given by their Fourier components.

Convention: H(t) = sum_m H_m exp(-i m omega t), so that
H_m = (1/T) int_0^T H(t) exp(i m omega t) dt and H_{-m} = H_m^dagger.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import NegativeCoefficient, NonHermitianPair, NonUnitaryTerm, ProfileViolation, QuadratureResidual, ValidationError

HERM_TOL = 1e-12


@dataclass(frozen=True)
class Finite:
    """Components vanish for |m| > m_max."""

    m_max: int


@dataclass(frozen=True)
class ExponentialDecay:
    """||H_m|| <= h exp(-|m| / zeta) for every stored mode."""

    h: float
    zeta: float


Profile = Finite | ExponentialDecay


def spectral_norm(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, ord=2))


@dataclass(frozen=True)
class FourierHamiltonian:
    omega: float
    components: Mapping[int, np.ndarray]
    profile: Profile

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega

    T = period

    @property
    def dim(self) -> int:
        return next(iter(self.components.values())).shape[0]

    @property
    def modes(self) -> list[int]:
        return sorted(self.components)

    @property
    def m_max(self) -> int:
        """Largest |m| with a stored component (the hopping range in Sambe space)."""
        if isinstance(self.profile, Finite):
            return self.profile.m_max
        return max((abs(m) for m in self.components), default=0)

    def component(self, m: int) -> np.ndarray:
        c = self.components.get(m)
        if c is None:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return c

    def is_static(self) -> bool:
        return all(m == 0 or not np.any(c) for m, c in self.components.items())


def from_components(omega: float, components: Mapping[int, np.ndarray],
                    profile: Profile | None = None) -> FourierHamiltonian:
    """Validate Fourier data and complete missing Hermitian partners."""
    if not omega > 0:
        raise ValidationError(f"omega must be positive, got {omega!r}")
    if not components:
        raise ValidationError("at least one Fourier component is required")
    comps: dict[int, np.ndarray] = {}
    dim = None
    for m, mat in components.items():
        a = np.array(mat, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError(f"component {m} is not a square matrix")
        if dim is None:
            dim = a.shape[0]
        elif a.shape[0] != dim:
            raise ValidationError("components have unequal dimensions")
        comps[int(m)] = a
    if dim < 2:
        raise ValidationError("system dimension must be at least 2")
    for m in list(comps):
        if -m not in comps:
            comps[-m] = comps[m].conj().T.copy()
        elif np.max(np.abs(comps[-m] - comps[m].conj().T), initial=0.0) > HERM_TOL:
            raise NonHermitianPair(f"H_{{{-m}}} != H_{{{m}}}^dagger")
    comps.setdefault(0, np.zeros((dim, dim), dtype=complex))

    if profile is None:
        nz = [abs(m) for m, c in comps.items() if np.any(np.abs(c) > 0)]
        profile = Finite(max(nz, default=0))
    if isinstance(profile, Finite):
        if profile.m_max < 0:
            raise ProfileViolation("m_max must be non-negative")
        for m, c in comps.items():
            if abs(m) > profile.m_max and np.max(np.abs(c)) > 0:
                raise ProfileViolation(f"component {m} outside |m| <= {profile.m_max}")
    else:
        if profile.h <= 0 or profile.zeta <= 0:
            raise ProfileViolation("h and zeta must be positive")
        for m, c in comps.items():
            if spectral_norm(c) > profile.h * np.exp(-abs(m) / profile.zeta) + HERM_TOL:
                raise ProfileViolation(f"||H_{m}|| exceeds h exp(-|m|/zeta)")
    for a in comps.values():
        a.setflags(write=False)
    return FourierHamiltonian(float(omega), dict(sorted(comps.items())), profile)


def evaluate_at(H: FourierHamiltonian, t: float) -> np.ndarray:
    out = np.zeros((H.dim, H.dim), dtype=complex)
    for m, c in H.components.items():
        out += c * np.exp(-1j * m * H.omega * t)
    return 0.5 * (out + out.conj().T)


def fourier_from_signal(signal: Callable[[float], np.ndarray], omega: float, m_cut: int,
                        n_quad: int, profile: Profile | None = None,
                        tol: float | None = None) -> FourierHamiltonian:
    """Fourier components of a periodic matrix signal by the trapezoidal rule.

    `m_cut` is left to the caller; `tol`, when given, bounds the reconstruction
    error at n_quad midpoints between quadrature nodes.
    """
    if n_quad < 4 * m_cut:
        raise ValidationError("n_quad must be at least 4 * m_cut")
    T = 2.0 * np.pi / omega
    ts = np.arange(n_quad) * T / n_quad
    samples = np.array([np.asarray(signal(t), dtype=complex) for t in ts])
    raw = {}
    for m in range(-m_cut, m_cut + 1):
        raw[m] = np.tensordot(np.exp(1j * m * omega * ts), samples, axes=1) / n_quad
    comps = {m: 0.5 * (raw[m] + raw[-m].conj().T) for m in raw}
    if profile is None:
        profile = Finite(m_cut)
    H = from_components(omega, comps, profile)
    if tol is not None:
        mids = ts + 0.5 * T / n_quad
        worst = max(np.max(np.abs(evaluate_at(H, t) - np.asarray(signal(t)))) for t in mids)
        if worst > tol:
            raise QuadratureResidual(f"reconstruction residual {worst:.3e} exceeds {tol:.3e}")
    return H


@dataclass(frozen=True)
class EnergyScales:
    alpha: float
    gamma: float
    gamma_upper: float


def energy_scales(H: FourierHamiltonian, alphas: Mapping[int, float] | None = None,
                  n_grid: int = 256) -> EnergyScales:
    """gamma is a grid estimate of sup_t ||H(t) - H_0|| (a lower bound on the sup)."""
    if n_grid < 16:
        raise ValidationError("n_grid must be at least 16")
    norms = {m: spectral_norm(c) for m, c in H.components.items()}
    gamma_upper = sum(v for m, v in norms.items() if m != 0)
    gamma = 0.0
    if gamma_upper > 0:
        H0 = H.component(0)
        for t in np.arange(n_grid) * H.period / n_grid:
            gamma = max(gamma, spectral_norm(evaluate_at(H, t) - H0))
    gamma = min(gamma, gamma_upper)
    if alphas is None:
        alpha = sum(norms.values())
    else:
        alpha = sum(float(alphas.get(m, norms[m])) for m in H.components)
    return EnergyScales(float(alpha), float(gamma), float(gamma_upper))


# --- linear combinations of unitaries -------------------------------------------------

Term = tuple[float, np.ndarray]


def is_unitary(u: np.ndarray, tol: float = HERM_TOL) -> bool:
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])), initial=0.0) <= tol)


@dataclass(frozen=True)
class LCUDecomposition:
    """Per-mode lists of (coefficient >= 0, unitary) with H_m = sum_j c_j U_j."""

    terms: Mapping[int, list[Term]] = field(default_factory=dict)

    def __post_init__(self):
        for m, ts in self.terms.items():
            for c, u in ts:
                if c < 0:
                    raise NegativeCoefficient(f"negative LCU coefficient for mode {m}")
                if not is_unitary(u):
                    raise NonUnitaryTerm(f"non-unitary LCU term for mode {m}")

    @property
    def alphas(self) -> dict[int, float]:
        return {m: float(sum(c for c, _ in ts)) for m, ts in self.terms.items()}

    @property
    def alpha(self) -> float:
        return float(sum(self.alphas.values()))

    def reconstruct(self, m: int) -> np.ndarray:
        ts = self.terms[m]
        return sum(c * u for c, u in ts)

    def residual(self, H: FourierHamiltonian) -> float:
        return max(np.max(np.abs(self.reconstruct(m) - H.component(m))) for m in self.terms)


_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _kron_all(mats) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for a in mats:
        out = np.kron(out, a)
    return out


def _unitary_basis(d: int):
    """Pauli strings when d = 2^n, Weyl clock-shift operators otherwise."""
    n = d.bit_length() - 1
    if 1 << n == d:
        for labels in itertools.product("IXYZ", repeat=n):
            yield _kron_all(_PAULI[s] for s in labels)
    else:
        shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
        clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
        for a in range(d):
            for b in range(d):
                yield np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)


def lcu_decompose(mat: np.ndarray, cutoff: float = 1e-14) -> list[Term]:
    """Expand a matrix over an orthogonal unitary basis; phases go into the unitaries."""
    d = mat.shape[0]
    terms = []
    for P in _unitary_basis(d):
        c = np.trace(P.conj().T @ mat) / d
        if abs(c) > cutoff:
            terms.append((float(abs(c)), (c / abs(c)) * P))
    return terms


def lcu_for(H: FourierHamiltonian) -> LCUDecomposition:
    return LCUDecomposition({m: lcu_decompose(c) for m, c in H.components.items() if np.any(c)})
