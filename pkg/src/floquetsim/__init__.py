"""Simulation of time-periodic Hamiltonians in a truncated Sambe space."""

from __future__ import annotations

from .errors import FloquetError, ValidationError
from .hamiltonian import (ExponentialDecay, Finite, FourierHamiltonian, LCUDecomposition, energy_scales,
                          evaluate_at, fourier_from_signal, from_components)
from .sambe import (SambeOperator, SambeSpace, build_effective, build_effective_pbc, build_linear_potential,
                    choose_l_max, choose_l_max_for, quasienergies)
from .propagator import exact_evolve, exact_propagator, monodromy_quasienergies, sambe_extract
from .amplification import amp1, amp2, naive, run_adiabatic, run_longtime, success_probability
from .blockenc import encode_effective, encode_lcu, encode_linear_potential, query_degree, walk_operator
from .bounds import floquet_magnus, lr_bound, resource_table, resources, truncation_bound
from .presets import adiabatic_prep, driven_qubit, gaussian_packet, hubbard2

__version__ = "0.1.0"
