"""Verification sweeps: every closed-form bound and encoding identity measured against
an independent computation, reported as BoundReport rows."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from .amplification import amp1, amp2, naive, success_probability
from .blockenc import (encode_effective, encode_lcu, encode_linear_potential, lp_oracle_direct,
                       lp_oracle_via_comparator, walk_eigenphases, walk_operator)
from .bounds import BoundReport, lr_bound, lr_bound_exp, symmetry_bound, truncation_bound
from .hamiltonian import energy_scales
from .presets import Model, adiabatic_prep, driven_qubit, gaussian_packet, hubbard2
from .propagator import evolve_all, exact_evolve, sambe_extract
from .sambe import build_effective, build_effective_pbc, choose_l_max, ominus

SUITES = ("bounds", "encodings", "amplification")
ORACLE_TOL = 1e-10


def _block_norm(U: np.ndarray, space, l: int, lp: int) -> float:
    return float(np.linalg.norm(U[space.block(l), space.block(lp)], 2))


# --- bounds ---------------------------------------------------------------------------

def truncation_sweep(model: Model | None = None, l_values=range(3, 13), gts=(0.5, 1.0, 2.0),
                     psi0: np.ndarray | None = None) -> list[BoundReport]:
    model = model or driven_qubit()
    H = model.H
    gamma = energy_scales(H).gamma_upper
    psi0 = np.eye(H.dim, dtype=complex)[0] if psi0 is None else psi0
    out = []
    for gt in gts:
        t = gt / gamma
        exact = exact_evolve(H, psi0, t, ORACLE_TOL).vector
        for L in l_values:
            dev = float(np.linalg.norm(exact - sambe_extract(H, L, psi0, t)))
            b = truncation_bound(L, gamma, t, H.m_max)
            out.append(BoundReport("truncation", float(b), dev,
                                   {"model": model.name, "l_max": L, "gamma_t": gt, "premise": b.premise_ok}))
    return out


def lr_sweep(model: Model | None = None, L: int = 16, gts=(0.5, 1.0, 2.0),
             sources=(-4, 0, 4)) -> list[BoundReport]:
    """Transition-block norms with |l - l'| >= 2 m_max gamma t against the polynomial bound."""
    model = model or driven_qubit()
    H = model.H
    gamma = energy_scales(H).gamma_upper
    op = build_effective(H, L)
    out = []
    for gt in gts:
        t = gt / gamma
        U = evolve_all(op, t)
        for lp in sources:
            for l in op.space.labels:
                dl = abs(int(l) - lp)
                if dl < 2 * H.m_max * gt or dl == 0:
                    continue
                out.append(BoundReport("lieb_robinson", float(lr_bound(dl, gamma, t, H.m_max)),
                                       _block_norm(U, op.space, int(l), lp),
                                       {"model": model.name, "l": int(l), "l_src": lp, "gamma_t": gt}))
    return out


def lr_exp_sweep(model: Model | None = None, L: int = 16, ts=(0.25, 0.5, 1.0), dl_max: int = 12) -> list[BoundReport]:
    """Exponential-decay variant on the Gaussian-packet drive."""
    model = model or gaussian_packet()
    H = model.H
    prof = H.profile
    op = build_effective(H, L)
    out = []
    for t in ts:
        U = evolve_all(op, t)
        for l in op.space.labels:
            dl = abs(int(l))
            if dl > dl_max:
                continue
            out.append(BoundReport("lieb_robinson_exp", lr_bound_exp(dl, prof.h, prof.zeta, t),
                                   _block_norm(U, op.space, int(l), 0),
                                   {"model": model.name, "l": int(l), "l_src": 0, "t": t}))
    return out


def symmetry_sweep(model: Model | None = None, l_values=(4, 6, 8), gts=(0.5, 1.0, 2.0),
                   stride: int = 3) -> list[BoundReport]:
    """Translation-symmetry defect of exp(-i H_eff t) on D^{4 l_max}."""
    model = model or driven_qubit()
    H = model.H
    gamma = energy_scales(H).gamma_upper
    out = []
    for lm in l_values:
        L4 = 4 * lm
        op = build_effective(H, L4)
        sp_ = op.space
        for gt in gts:
            t = gt / gamma
            U = evolve_all(op, t)
            for ls in range(-lm + 1, lm + 1):
                for l in range(-L4 + 1, L4 + 1, stride):
                    ref = np.exp(1j * ls * H.omega * t) * U[sp_.block(ominus(l, ls, L4)), sp_.block(0)]
                    defect = float(np.linalg.norm(U[sp_.block(l), sp_.block(ls)] - ref, 2))
                    out.append(BoundReport("translation_symmetry",
                                           symmetry_bound(l, ls, lm, gamma, t, H.m_max), defect,
                                           {"model": model.name, "l_max": lm, "l": l, "l_src": ls, "gamma_t": gt}))
    return out


# --- encodings ------------------------------------------------------------------------

def _be_reports(name: str, be, ctx: dict) -> list[BoundReport]:
    return [BoundReport(f"{name}.residual", 1e-10, be.residual(), ctx),
            BoundReport(f"{name}.unitarity", 1e-12, be.unitarity_error(), ctx)]


def encoding_sweep(L_values=(1, 2, 4, 8), walk_L: int = 2) -> list[BoundReport]:
    out: list[BoundReport] = []
    models = [driven_qubit(), hubbard2(), adiabatic_prep()]
    for mod in models:
        for m in mod.lcu.terms:
            out += _be_reports("lcu", encode_lcu(mod.lcu, m), {"model": mod.name, "mode": m})
    for L in L_values:
        out += _be_reports("linear_potential", encode_linear_potential(L, 1.0), {"L": L})
        diff = float(abs(lp_oracle_via_comparator(L) - _lp_times_z(L)).max())
        out.append(BoundReport("comparator_vs_direct", 1e-12, diff, {"L": L}))
    for mod in models[:2]:
        for L in (L for L in L_values if L >= mod.H.m_max + 1):
            be = encode_effective(mod.H, L, mod.lcu)
            ctx = {"model": mod.name, "L": L}
            out += _be_reports("effective", be, ctx)
            ref = build_effective_pbc(mod.H, L, sparse=True).matrix.toarray() / be.alpha
            out.append(BoundReport("effective_vs_pbc", 1e-10, float(np.abs(be.encoded() - ref).max()), ctx))
    walks = [("lcu_H0", encode_lcu(models[0].lcu, 0)), ("lcu_H1", encode_lcu(models[0].lcu, 1)),
             ("hubbard_H0", encode_lcu(models[1].lcu, 0)),
             ("effective", encode_effective(models[0].H, walk_L, models[0].lcu))]
    for name, be in walks:
        err = max(c.error for c in walk_eigenphases(walk_operator(be)))
        out.append(BoundReport("walk_eigenphase", 1e-8, err, {"encoding": name}))
    return out


def _lp_times_z(L: int):
    import scipy.sparse as sp

    return sp.kron(lp_oracle_direct(L), sp.diags([1.0, -1.0]), format="csr")


# --- amplification --------------------------------------------------------------------

def amplification_sweep(epsilon: float = 1e-3, gamma_t: float = 1.0, n_states: int = 5,
                        seed: int = 0) -> list[BoundReport]:
    """Success-probability ladder and amp2 deviation on the driven qubit."""
    mod = driven_qubit()
    H = mod.H
    gamma = energy_scales(H).gamma_upper
    t = gamma_t / gamma
    lm = choose_l_max(gamma, t, H.m_max, epsilon).l_max
    rng = np.random.default_rng(seed)
    circs = (naive(H, lm, t), amp1(H, lm, t), amp2(H, lm, t))
    out = []
    for k in range(n_states):
        psi = rng.normal(size=H.dim) + 1j * rng.normal(size=H.dim)
        psi /= np.linalg.norm(psi)
        ctx = {"epsilon": epsilon, "l_max": lm, "state": k}
        pn, p1, p2 = (success_probability(c, psi) for c in circs)
        ref = 1 / (2 * lm)
        out.append(BoundReport("naive_probability", 0.2 * ref, abs(pn - ref), ctx))
        out.append(BoundReport("amp1_probability", 2 * epsilon, abs(p1 - 0.25), ctx))
        out.append(BoundReport("amp2_probability", epsilon, max(0.0, 1 - p2), ctx))
        v = circs[2].apply(np.kron(np.eye(circs[2].space.n_modes)[circs[2].space.slot(0)], psi))
        exact = exact_evolve(H, psi, t, 1e-12).vector
        target = np.kron(np.eye(circs[2].space.n_modes)[circs[2].space.slot(0)], exact)
        out.append(BoundReport("amp2_deviation", epsilon, float(np.linalg.norm(v - target)), ctx))
    return out


SUITE_TASKS: dict[str, list[Callable[[], list[BoundReport]]]] = {
    "bounds": [truncation_sweep, lr_sweep, lr_exp_sweep, symmetry_sweep],
    "encodings": [encoding_sweep],
    "amplification": [amplification_sweep],
}


def run_suite(suite: str, threads: int = 1) -> list[tuple[str, BoundReport]]:
    """Run one suite (or 'all'); tasks are distributed over a thread pool, order preserved."""
    names = SUITES if suite == "all" else (suite,)
    tasks = []
    for n in names:
        if n not in SUITE_TASKS:
            from .errors import ValidationError

            raise ValidationError(f"unknown suite {suite!r}")
        tasks += [(n, f) for f in SUITE_TASKS[n]]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as ex:
        results = list(ex.map(lambda nf: (nf[0], nf[1]()), tasks))
    return [(n, r) for n, reps in results for r in reps]
