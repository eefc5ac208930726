"""Model presets: driven qubit, two-site Hubbard chain under light, adiabatic
preparation schedule, and a Gaussian-packet drive with rapidly decaying modes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .hamiltonian import (ExponentialDecay, FourierHamiltonian, LCUDecomposition, fourier_from_signal,
                          from_components, spectral_norm)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class Model:
    name: str
    H: FourierHamiltonian
    lcu: LCUDecomposition
    extras: dict

    @property
    def alphas(self) -> dict[int, float]:
        return self.lcu.alphas


def driven_qubit(delta: float = 1.0, V: float = 1.0, omega: float = 1.0, phase: float = 0.0) -> Model:
    """H(t) = (delta/2) Z + V cos(omega t - phase) X."""
    h1 = 0.5 * V * np.exp(1j * phase) * SX
    H = from_components(omega, {0: 0.5 * delta * SZ, 1: h1})
    terms = {0: [(abs(delta) / 2, np.sign(delta or 1) * SZ)]}
    if V != 0:
        u = np.sign(V) * np.exp(1j * phase) * SX
        terms[1] = [(abs(V) / 2, u)]
        terms[-1] = [(abs(V) / 2, u.conj().T)]
    return Model("DrivenQubit", H, LCUDecomposition(terms), {"delta": delta, "V": V, "phase": phase})


# --- two-site Fermi-Hubbard under light ------------------------------------------------

def jw_annihilators(n_modes: int) -> list[np.ndarray]:
    """Jordan-Wigner annihilators with occupation n = (1 + Z)/2 (occupied = Z eigenvalue +1)."""
    lower = np.array([[0, 0], [1, 0]], dtype=complex)  # |occupied> = e0 -> |empty> = e1
    parity = -SZ                                       # (-1)^n = 1 - 2n = -Z
    ops = []
    for j in range(n_modes):
        mats = [parity] * j + [lower] + [I2] * (n_modes - j - 1)
        out = np.eye(1, dtype=complex)
        for a in mats:
            out = np.kron(out, a)
        ops.append(out)
    return ops


def _z_on(j: int, n_modes: int) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for k in range(n_modes):
        out = np.kron(out, SZ if k == j else I2)
    return out


def hubbard2(eps: tuple[float, float] | None = None, J: float = 1.0, U: float = 2.0,
             V: tuple[float, float] = (1.0, 1.0), omega: float = 2 * math.pi) -> Model:
    """Two-site Hubbard chain with a sinusoidal on-site drive, 4 spin-orbitals, d = 16.

    Spin-orbital index 2x + s (s = 0 up, 1 down).  Band energies eps_k come from
    diagonalizing the hopping matrix (shifted to be non-negative) unless given;
    the band orbitals are the hopping eigenvectors in either case.
    """
    N = 2
    hop = np.array([[0.0, -J], [-J, 0.0]])
    w, vecs = np.linalg.eigh(hop)
    eps_k = (w - w.min()) if eps is None else np.asarray(eps, dtype=float)
    if np.any(eps_k < 0):
        raise ValidationError("band energies must be non-negative")
    a = jw_annihilators(2 * N)
    num = [x.conj().T @ x for x in a]
    d = 16
    Id = np.eye(d, dtype=complex)

    # direct construction
    kinetic = np.zeros((d, d), dtype=complex)
    band_z = []
    for k in range(N):
        for s in range(2):
            ck = sum(vecs[x, k].conj() * a[2 * x + s] for x in range(N))
            nk = ck.conj().T @ ck
            kinetic += eps_k[k] * nk
            band_z.append((eps_k[k], 2 * nk - Id))
    onsite = sum(num[2 * x] @ num[2 * x + 1] for x in range(N))
    H_hub = kinetic + U * onsite
    drive = sum(V[x] * (num[2 * x] + num[2 * x + 1]) for x in range(N))

    H = from_components(omega, {0: H_hub, 1: 0.5j * drive})

    # LCU: n = (1 + Z)/2 in both the band and the site basis
    zs = [_z_on(j, 2 * N) for j in range(2 * N)]
    const = 0.5 * 2 * eps_k.sum() + N * U / 4
    t0 = [(const, Id)]
    t0 += [(e / 2, z) for e, z in band_z if e > 0]
    for x in range(N):
        t0 += [(U / 4, zs[2 * x]), (U / 4, zs[2 * x + 1]), (U / 4, zs[2 * x] @ zs[2 * x + 1])]
    terms = {0: [(c, u) for c, u in t0 if c > 0]}
    for m, sgn in ((1, 1), (-1, -1)):
        tm = []
        for x in range(N):
            for s in range(2):
                tm += [(V[x] / 4, sgn * 1j * Id), (V[x] / 4, sgn * 1j * zs[2 * x + s])]
        terms[m] = [(c, u) for c, u in tm if c > 0]
    return Model("Hubbard2", H, LCUDecomposition(terms),
                 {"H_hub": H_hub, "eps_k": eps_k, "U": U, "V": V, "N": N, "drive": drive})


# --- adiabatic preparation ----------------------------------------------------------------

def adiabatic_prep(h0: np.ndarray = SZ, h1: np.ndarray = SX, omega: float = 0.05,
                   lcu0: list | None = None, lcu1: list | None = None) -> Model:
    """H(t) = h0 (1 - sin omega t) + h1 sin omega t, so H_0 = h0, H_{+-1} = -+ i (h0 - h1)/2.

    The mode oracles are O_{+-1} = |0><0| (x) (-+ i O0) + |1><1| (x) (+- i O1) with
    state (sqrt(a0)|0>|G0> + sqrt(a1)|1>|G1>)/sqrt(a0 + a1).
    """
    from .hamiltonian import lcu_decompose

    h0 = np.asarray(h0, dtype=complex)
    h1 = np.asarray(h1, dtype=complex)
    H = from_components(omega, {0: h0, 1: -0.5j * (h0 - h1)})
    lcu0 = lcu_decompose(h0) if lcu0 is None else lcu0
    lcu1 = lcu_decompose(h1) if lcu1 is None else lcu1
    a0 = sum(c for c, _ in lcu0)
    a1 = sum(c for c, _ in lcu1)
    terms = {0: list(lcu0)}
    for m, sgn in ((1, 1), (-1, -1)):
        terms[m] = [(c / 2, -sgn * 1j * u) for c, u in lcu0] + [(c / 2, sgn * 1j * u) for c, u in lcu1]
    return Model("AdiabaticPrep", H, LCUDecomposition(terms), {"abar0": a0, "abar1": a1, "h0": h0, "h1": h1})


def adiabatic_mode_oracle(model: Model, sign: int) -> tuple[np.ndarray, np.ndarray]:
    """Explicit (O_{+-1}, |G_{+-1}>) for the adiabatic schedule (single-term LCUs of h0, h1)."""
    h0, h1 = model.extras["h0"], model.extras["h1"]
    from .hamiltonian import lcu_decompose

    (c0, u0), = lcu_decompose(h0)
    (c1, u1), = lcu_decompose(h1)
    O = np.block([[-sign * 1j * u0, np.zeros_like(u0)], [np.zeros_like(u1), sign * 1j * u1]])
    G = np.array([math.sqrt(c0), math.sqrt(c1)]) / math.sqrt(c0 + c1)
    return O, G


# --- Gaussian wave-packet drive ---------------------------------------------------------

def gaussian_amplitude(m: int, p: int, omega_tau: float) -> float:
    """A_m = (omega tau / sqrt(2 pi)) exp(-(p^2 + m^2)(omega tau)^2 / 2) sinh(p |m| (omega tau)^2)."""
    x = omega_tau ** 2
    return omega_tau / math.sqrt(2 * math.pi) * math.exp(-0.5 * (p * p + m * m) * x) * math.sinh(p * abs(m) * x)


def gaussian_packet_signal(t: float, p: int, omega: float, tau: float, n_images: int = 12) -> float:
    """sum_n exp(-(t - (n + 1/2) T)^2 / 2 tau^2) sin(p omega t), T = 2 pi / omega."""
    T = 2 * math.pi / omega
    s = sum(math.exp(-((t - (n + 0.5) * T) ** 2) / (2 * tau * tau)) for n in range(-n_images, n_images + 1))
    return s * math.sin(p * omega * t)


def gaussian_packet(p: int = 2, omega_tau: float = 1.0, delta: float = 1.0, V: float = 1.0,
                    omega: float = 1.0, m_cut: int = 6, zeta: float = 1.0, n_quad: int = 256) -> Model:
    """Qubit H(t) = (delta/2) Z + g(t) V X with g the Gaussian-packet train.

    Fourier modes come from quadrature; h is the tightest constant with
    ||H_m|| <= h exp(-|m|/zeta) over the stored modes.
    """
    tau = omega_tau / omega

    def signal(t):
        return 0.5 * delta * SZ + gaussian_packet_signal(t, p, omega, tau) * V * SX

    raw = fourier_from_signal(signal, omega, m_cut, n_quad)
    h = max(spectral_norm(c) * math.exp(abs(m) / zeta) for m, c in raw.components.items())
    H = from_components(omega, dict(raw.components), ExponentialDecay(h * (1 + 1e-12), zeta))
    from .hamiltonian import lcu_decompose

    terms = {m: lcu_decompose(c, cutoff=1e-15) for m, c in H.components.items() if np.any(np.abs(c) > 1e-15)}
    return Model("GaussianPacket", H, LCUDecomposition(terms),
                 {"p": p, "omega_tau": omega_tau, "tau": tau, "h": h, "zeta": zeta})
