"""Closed-form error bounds, the truncation-order threshold, resource formulas and the
first-order Floquet-Magnus Hamiltonian.

Resource formulas set every O/Theta constant to 1 and are flagged `scaling_only`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammainc

from .errors import IndexOutOfRange, ValidationError, check_epsilon
from .hamiltonian import FourierHamiltonian, evaluate_at
from .sambe import choose_l_max, exp_constants


class BoundValue(float):
    """A float that also records whether the bound's premise holds."""

    premise_ok: bool

    def __new__(cls, value: float, premise_ok: bool = True):
        obj = super().__new__(cls, value)
        obj.premise_ok = premise_ok
        return obj


@dataclass(frozen=True)
class BoundReport:
    name: str
    bound_value: float
    measured_value: float
    context: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.bound_value - self.measured_value

    @property
    def ok(self) -> bool:
        return self.slack >= -1e-10


def _pow_over_fact(x: float, n: int) -> float:
    """x^n / n! evaluated in log space."""
    if n == 0:
        return 1.0
    if x == 0:
        return 0.0
    return math.exp(n * math.log(x) - math.lgamma(n + 1))


def taylor_tail(x: float, n: int) -> float:
    """sum_{k >= n} x^k / k!."""
    if n <= 0:
        return math.exp(x)
    if x == 0:
        return 0.0
    return math.exp(x) * float(gammainc(n, x))


def stirling_holds(n: int) -> bool:
    """n! >= 2 (n/e)^n for n >= 1."""
    return math.lgamma(n + 1) >= math.log(2) + n * (math.log(n) - 1)


def lr_bound(dl: int, gamma: float, t: float, m_max: int) -> BoundValue:
    """2 (gamma t)^n / n! with n = ceil(dl / m_max), bounding ||<l|exp(-i H_eff t)|l'>||."""
    x = gamma * t
    dl = abs(int(dl))
    premise = dl >= 2 * m_max * x
    n = math.ceil(dl / m_max)
    if n == 0:
        return BoundValue(1.0, premise)
    return BoundValue(min(1.0, 2 * _pow_over_fact(x, n)), premise)


def lr_bound_stirling(dl: int, gamma: float, t: float, m_max: int) -> float:
    """Weaker closed form (e gamma t / n)^n, which dominates lr_bound via n! >= 2 (n/e)^n."""
    x = gamma * t
    n = math.ceil(abs(int(dl)) / m_max)
    if n == 0:
        return 1.0
    return 0.0 if x == 0 else math.exp(n * math.log(math.e * x / n))


def lr_bound_exp(dl: int, h: float, zeta: float, t: float) -> float:
    beta, zp = exp_constants(zeta)
    return math.exp(-(abs(dl) - 2 * beta * zp * h * t) / zp + 2 / beta)


def truncation_bound(l_max: int, gamma: float, t: float, m_max: int) -> BoundValue:
    x = gamma * t
    n = math.ceil(l_max / m_max)
    return BoundValue(20 * m_max * _pow_over_fact(x, n), l_max >= 2 * m_max * x)


def truncation_bound_split(l_max: int, gamma: float, t: float, m_max: int) -> tuple[float, float]:
    """(eps1, eps2) of the proof: 4 m_max (.) and 16 m_max (.); diagnostic only."""
    base = _pow_over_fact(gamma * t, math.ceil(l_max / m_max))
    return 4 * m_max * base, 16 * m_max * base


def truncation_bound_exp(l_max: int, h: float, zeta: float, t: float) -> float:
    beta, zp = exp_constants(zeta)
    return 4 * zp * math.exp(2 * beta * h * t - (l_max - 1) / zp + 2 / beta)


def premise_error(l_max: int, gamma: float, t: float, m_max: int) -> float:
    """10 m_max (e m_max gamma t / (l_max - m_max))^((l_max - m_max)/m_max)."""
    k = l_max - m_max
    x = gamma * t
    if x == 0:
        return 0.0
    return 10 * m_max * math.exp((k / m_max) * math.log(math.e * m_max * x / k))


def prop1_threshold(kappa: float, eta: float) -> float:
    """x* such that (kappa/x)^x <= eta for all x >= x*."""
    if kappa <= 0 or not 0 < eta < 1:
        raise ValidationError("need kappa > 0 and eta in (0, 1)")
    lg = math.log(1 / eta)
    return math.e * kappa + 4 * lg / math.log(math.e + lg / kappa)


def symmetry_order(l: int, l_src: int, l_max: int, m_max: int) -> int:
    return math.ceil((8 * l_max - 2 * m_max - abs(l) - abs(l_src)) / m_max)


def symmetry_bound(l: int, l_src: int, l_max: int, gamma: float, t: float, m_max: int) -> float:
    """8 (gamma t)^n / n! bounding the translation-symmetry defect."""
    if not -l_max + 1 <= l_src <= l_max:
        raise IndexOutOfRange(f"l_src={l_src} outside D^{l_max}")
    if not -4 * l_max + 1 <= l <= 4 * l_max:
        raise IndexOutOfRange(f"l={l} outside D^{4 * l_max}")
    return 8 * _pow_over_fact(gamma * t, symmetry_order(l, l_src, l_max, m_max))


def symmetry_tail(l: int, l_src: int, l_max: int, gamma: float, t: float, m_max: int) -> float:
    """Tighter 4 sum_{k >= n} (gamma t)^k / k! from the proof; diagnostic."""
    return 4 * taylor_tail(gamma * t, symmetry_order(l, l_src, l_max, m_max))


# --- resource formulas -----------------------------------------------------------------

REGIMES = ("Trotter", "Qubitization", "Adiabatic", "LongTime", "TruncatedDyson")


@dataclass(frozen=True)
class ResourceEstimate:
    regime: str
    ancilla_qubits: int
    ancilla_expr: str
    query_complexity: float
    query_expr: str
    gates_per_query: str
    scaling_only: bool = True
    extra: dict = field(default_factory=dict)


def _ologterm(lg: float, scale: float) -> float:
    """lg / ln(e + lg / scale), with the scale -> 0 limit."""
    if lg <= 0:
        return 0.0
    if scale <= 0:
        return 0.0
    return lg / math.log(math.e + lg / scale)


def resources(regime: str, alpha: float, gamma: float, omega: float, t: float, epsilon: float,
              n_a: int = 1, C: float = 1.0, p: int = 2, l_max: int | None = None,
              lam: float | None = None, m_max: int = 1) -> ResourceEstimate:
    """Evaluate one row of the comparison table with unit constants."""
    check_epsilon(epsilon)
    if alpha <= 0 or omega <= 0 or t <= 0 or gamma < 0:
        raise ValidationError("alpha, omega, t must be positive and gamma non-negative")
    at = alpha * t
    lg = math.log(1 / epsilon)
    if regime == "Trotter":
        q = at * (at / epsilon) ** (1.0 / p)
        return ResourceEstimate(regime, 0, "0", q, f"alpha t (alpha t / eps)^(1/{p})", "O(1)",
                                extra={"order_p": p})
    if regime == "Qubitization":
        q = at + _ologterm(lg, at)
        return ResourceEstimate(regime, n_a + 1, "n_a + O(1)", q,
                                "alpha t + ln(1/eps) / ln(e + (alpha t)^-1 ln(1/eps))", "O(n_a)")
    if regime == "Adiabatic":
        o = _ologterm(lg, gamma * t)
        q = at + _ologterm(lg, at + o)
        if l_max is None:
            l_max = choose_l_max(gamma, t, m_max, epsilon).l_max
        anc = n_a + math.ceil(math.log2(8 * l_max))
        return ResourceEstimate(regime, anc, "n_a + ceil(log2(8 l_max)) ~ n_a + O(log(gamma t) + log log(1/eps))",
                                q, "alpha t + ln(1/eps) / ln(e + {alpha t + o}^-1 ln(1/eps)), "
                                   "o = ln(1/eps) / ln(e + (gamma t)^-1 ln(1/eps))",
                                "O(n_a + log(gamma t) + log log(1/eps))",
                                extra={"o_term": o, "l_max": l_max})
    if regime == "LongTime":
        lgw = math.log(omega * t / epsilon)
        o = _ologterm(lgw, gamma / omega)
        q = at + omega * t * _ologterm(lgw, alpha / omega + o)
        if l_max is None:
            T = 2 * math.pi / omega
            n = max(1, math.floor(t / T))
            l_max = choose_l_max(gamma, T, m_max, min(epsilon / n, 0.5)).l_max
        anc = n_a + math.ceil(math.log2(8 * l_max))
        lam = gamma if lam is None else lam
        return ResourceEstimate(
            regime, anc, "n_a + ceil(log2(8 l_max)) ~ n_a + O(log(gamma/omega) + log log(omega t/eps))", q,
            "alpha t + omega t ln(omega t/eps) / ln(e + {alpha/omega + o}^-1 ln(omega t/eps)), "
            "o = ln(omega t/eps) / ln(e + (gamma/omega)^-1 ln(omega t/eps))",
            "O(n_a + log(gamma/omega) + log log(omega t/eps))",
            extra={"o_term": o, "l_max": l_max,
                   # uncertified: where the omega t log(omega t) term overtakes alpha t
                   "crossover_time": math.exp(min(alpha / omega, 700.0)) / omega,
                   "high_frequency": bool(omega >= lam)})
    if regime == "TruncatedDyson":
        x = math.log(at / epsilon)
        q = at * x / math.log(x)
        anc_arg = (gamma * omega * t / alpha + at) / epsilon
        anc = n_a + math.ceil(math.log2(anc_arg))
        return ResourceEstimate(regime, anc, "n_a + O(log((gamma omega t / alpha + alpha t)/eps)) [display only]",
                                q, "alpha t ln(alpha t/eps) / ln ln(alpha t/eps)", "O(n_a + log(alpha t/eps))",
                                extra={"ancilla_display_only": True})
    raise ValidationError(f"unknown regime {regime!r}")


def resource_table(alpha: float, gamma: float, omega: float, t: float, epsilon: float,
                   n_a: int = 1, C: float = 1.0, p: int = 2, lam: float | None = None) -> list[ResourceEstimate]:
    return [resources(r, alpha, gamma, omega, t, epsilon, n_a, C, p, lam=lam) for r in REGIMES]


# --- Floquet-Magnus ----------------------------------------------------------------------

@dataclass(frozen=True)
class FMExpansion:
    order: int
    H_FM: np.ndarray
    lam: float
    first_order_term: np.ndarray | None = None


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def fm_first_order(H: FourierHamiltonian) -> np.ndarray:
    """(1/2iT) int_0^T dt1 int_0^t1 dt2 [H(t1), H(t2)] from Fourier components."""
    H0 = H.component(0)
    out = np.zeros_like(H0)
    for m, c in H.components.items():
        if m == 0:
            continue
        out += _comm(c, H0) / (m * H.omega)
        if m > 0:
            out += _comm(H.component(-m), c) / (m * H.omega)
    return 0.5 * (out + out.conj().T)


def fm_first_order_quadrature(H: FourierHamiltonian, n_nodes: int = 64) -> np.ndarray:
    """Same double integral by Gauss-Legendre quadrature on the triangle."""
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    T = H.period
    out = np.zeros((H.dim, H.dim), dtype=complex)
    for x1, w1 in zip(x, w):
        t1 = 0.5 * T * (x1 + 1)
        H1 = evaluate_at(H, t1)
        inner = np.zeros_like(out)
        for x2, w2 in zip(x, w):
            t2 = 0.5 * t1 * (x2 + 1)
            inner += w2 * 0.5 * t1 * evaluate_at(H, t2)
        out += w1 * 0.5 * T * _comm(H1, inner)
    return out / (2j * T)


def floquet_magnus(H: FourierHamiltonian, order: int = 1, lam: float | None = None) -> FMExpansion:
    if order not in (0, 1):
        raise ValidationError("order must be 0 or 1")
    H0 = np.array(H.component(0))
    if lam is None:
        lam = float(sum(np.linalg.norm(c, 2) for c in H.components.values()))
    if order == 0:
        return FMExpansion(0, H0, lam)
    h1 = fm_first_order(H)
    return FMExpansion(1, H0 + h1, lam, h1)
